#include "adrcwave/plant.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "adrcwave/error.hpp"

namespace adrcwave {

const char* to_string(Variant v) { return v == Variant::Spring ? "spring" : "damper"; }

void PlantParams::validate() const {
    if (!(q > 0.0)) throw Error(ErrorKind::Parameter, "plant.q must satisfy q > 0");
    if (variant == Variant::Damper && q == 1.0) {
        throw Error(ErrorKind::Parameter, "plant.q must satisfy q != 1 for the damper variant");
    }
}

BoundaryCondition PlantParams::left_condition() const {
    return variant == Variant::Spring ? BoundaryCondition::flux(-q, 0.0, 0.0)
                                      : BoundaryCondition::flux(0.0, -q, 0.0);
}

void DisturbanceSpec::validate() const {
    if (kind == Kind::SinusoidSum) {
        if (theta.size() != alpha.size() || vartheta.size() != alpha.size()) {
            throw Error(ErrorKind::Parameter,
                        "disturbance theta, vartheta and alpha must have equal lengths");
        }
    }
    if (kind == Kind::Decaying && !(rate > 0.0)) {
        throw Error(ErrorKind::Parameter, "disturbance.rate must be > 0 for a decaying disturbance");
    }
    if (kind == Kind::BoundedNoise) {
        if (!(bound >= 0.0)) throw Error(ErrorKind::Parameter, "disturbance.bound must be >= 0");
        if (!(hold > 0.0)) throw Error(ErrorKind::Parameter, "disturbance hold interval must be > 0");
    }
}

void UncertaintySpec::validate() const {
    if ((kind == Kind::TraceSine || kind == Kind::LinearFunctional) && !(x0 >= 0.0 && x0 <= 1.0)) {
        throw Error(ErrorKind::Parameter, "uncertainty.x0 must lie in [0,1]");
    }
}

double UncertaintySpec::lipschitz() const {
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::TraceSine:
            return std::sqrt(2.0) * std::abs(k);
        case Kind::LinearFunctional:
            return std::sqrt(2.0) * std::abs(a) + std::abs(b);
    }
    return 0.0;
}

double eval_disturbance(const DisturbanceSpec& spec, double t) {
    using K = DisturbanceSpec::Kind;
    switch (spec.kind) {
        case K::Zero:
            return 0.0;
        case K::Constant:
            return spec.amplitude;
        case K::SinusoidSum: {
            double d = 0.0;
            for (std::size_t j = 0; j < spec.alpha.size(); ++j) {
                d += spec.theta[j] * std::sin(spec.alpha[j] * t) +
                     spec.vartheta[j] * std::cos(spec.alpha[j] * t);
            }
            return d;
        }
        case K::Decaying:
            return spec.amplitude * std::exp(-spec.rate * t);
        case K::BoundedNoise: {
            const auto step = static_cast<std::uint64_t>(std::floor(t / spec.hold + 1e-9));
            std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                              static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32)};
            std::mt19937_64 gen(seq);
            std::uniform_real_distribution<double> dist(-1.0, 1.0);
            return std::clamp(spec.bound * dist(gen), -spec.bound, spec.bound);
        }
    }
    return 0.0;
}

namespace {

std::size_t snap(const Grid& g, double x0) {
    const long j = std::lround(x0 / g.dx);
    return static_cast<std::size_t>(std::clamp<long>(j, 0, g.n));
}

}  // namespace

double eval_uncertainty(const UncertaintySpec& spec, const StatePair& s) {
    using K = UncertaintySpec::Kind;
    switch (spec.kind) {
        case K::Zero:
            return 0.0;
        case K::TraceSine:
            return spec.k * std::sin(s.position[snap(s.position.grid, spec.x0)]);
        case K::LinearFunctional:
            return spec.a * s.position[snap(s.position.grid, spec.x0)] + spec.b * integrate(s.velocity);
    }
    return 0.0;
}

double eval_uncertainty(const UncertaintySpec& spec, const WaveField& w) {
    if (spec.kind == UncertaintySpec::Kind::Zero) return 0.0;
    if (spec.kind == UncertaintySpec::Kind::TraceSine) {
        return spec.k * std::sin(w.current[snap(w.grid(), spec.x0)]);
    }
    return eval_uncertainty(spec, StatePair{w.current, w.velocity()});
}

TotalDisturbanceSample total_disturbance(const DisturbanceSpec& d, const UncertaintySpec& f,
                                         const WaveField& w, double t) {
    TotalDisturbanceSample s;
    s.t = t;
    s.f_value = eval_uncertainty(f, w);
    s.d_value = eval_disturbance(d, t);
    s.F = s.f_value + s.d_value;
    return s;
}

GridFunction plant_predict(const WaveField& state, const PlantParams& params) {
    GridFunction next = wave_interior(state);
    next[0] = close_left(state, params.left_condition());
    return next;
}

void plant_close(const WaveField& state, GridFunction& next, double u, double F) {
    next[next.size() - 1] = close_right(state, BoundaryCondition::neumann(u + F));
}

WaveField plant_step(const WaveField& state, const PlantParams& params, double u, double F, double t,
                     double dt) {
    return wave_step(state, params.left_condition(), BoundaryCondition::neumann(u + F), t, dt, nullptr,
                     "plant");
}

std::pair<double, double> measure(const WaveField& state) {
    return {state.current.front(), state.current.back()};
}

double witness_left_residual(double q) { return q * (1.0 - q); }

}  // namespace adrcwave
