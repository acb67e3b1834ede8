#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "adrcwave/analysis.hpp"
#include "adrcwave/closed_loop.hpp"
#include "adrcwave/error.hpp"

using namespace adrcwave;

namespace {

struct Samples {
    std::vector<double> t, v;
};

template <class F>
Samples sampled(double t0, double t1, int count, F fn) {
    Samples s;
    for (int i = 0; i < count; ++i) {
        const double t = t0 + (t1 - t0) * i / (count - 1);
        s.t.push_back(t);
        s.v.push_back(fn(t));
    }
    return s;
}

}  // namespace

TEST_CASE("fit_decay on synthetic series") {
    const Samples pure = sampled(0.0, 10.0, 101, [](double t) { return std::exp(-2.0 * t); });
    const DecayFit f = fit_decay(pure.t, pure.v, 0.0, 10.0);
    CHECK(f.rate == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(f.slope() == -f.rate);
    CHECK(f.residual <= 1e-9);
    CHECK(f.samples == 101);

    const Samples flat = sampled(0.0, 10.0, 50, [](double) { return 3.0; });
    const DecayFit c = fit_decay(flat.t, flat.v, 0.0, 10.0);
    CHECK(std::abs(c.rate) <= 1e-9);
    CHECK(c.intercept == doctest::Approx(std::log(3.0)));

    const Samples wobble = sampled(0.0, 20.0, 2001, [](double t) { return std::exp(-t) * (2.0 + std::sin(10.0 * t)); });
    const DecayFit w = fit_decay(wobble.t, wobble.v, 0.0, 20.0);
    CHECK(w.rate == doctest::Approx(1.0).epsilon(0.05));
    CHECK(w.residual > 0.0);
}

TEST_CASE("fit_decay recovers the rate at any cadence with ten or more points") {
    for (int count : {10, 17, 250}) {
        const Samples s = sampled(5.0, 25.0, count, [](double t) { return 4.0 * std::exp(-0.3 * t); });
        CHECK(fit_decay(s.t, s.v, 5.0, 25.0).rate == doctest::Approx(0.3).epsilon(1e-6));
    }
}

TEST_CASE("fit_decay errors") {
    const Samples few = sampled(0.0, 1.0, 9, [](double t) { return std::exp(-t); });
    CHECK_THROWS_AS(fit_decay(few.t, few.v, 0.0, 1.0), Error);
    Samples bad = sampled(0.0, 1.0, 20, [](double t) { return std::exp(-t); });
    bad.v[7] = -1.0;
    try {
        fit_decay(bad.t, bad.v, 0.0, 1.0);
        FAIL("expected a fit error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Fit);
    }
    bad.v[7] = 1e-300;
    CHECK(fit_decay(bad.t, bad.v, 0.0, 1.0, 1e-200).samples == 19);
}

TEST_CASE("l2_tail") {
    const Samples decay = sampled(0.0, 20.0, 20001, [](double t) { return std::exp(-t); });
    const TailReport d = l2_tail(decay.t, decay.v, 5.0);
    const double expected = std::exp(-30.0) * (std::exp(10.0) - 1.0) / (1.0 - std::exp(-40.0));
    CHECK(d.tail_fraction <= 1e-8);
    CHECK(d.tail_fraction == doctest::Approx(expected).epsilon(1e-3));
    CHECK(d.converging);

    const Samples one = sampled(0.0, 20.0, 201, [](double) { return 1.0; });
    const TailReport u = l2_tail(one.t, one.v, 5.0);
    CHECK(u.tail_fraction == doctest::Approx(0.25));
    CHECK(u.total == doctest::Approx(20.0));
    CHECK_FALSE(u.converging);

    const Samples zero = sampled(0.0, 20.0, 201, [](double) { return 0.0; });
    const TailReport z = l2_tail(zero.t, zero.v, 5.0);
    CHECK(z.total == 0.0);
    CHECK(z.tail == 0.0);
    CHECK(z.converging);

    const Samples short_span = sampled(0.0, 8.0, 81, [](double) { return 1.0; });
    try {
        l2_tail(short_span.t, short_span.v, 5.0);
        FAIL("expected a span error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Span);
    }
}

TEST_CASE("rho functional") {
    const Grid g = make_grid(100);
    CHECK(rho_functional(WaveField{GridFunction(g), GridFunction(g)}) == 0.0);

    // p(x, t) = x + t has p_t = p_x = 1.
    const GridFunction prev = GridFunction::sample(g, [](double x) { return x; });
    const GridFunction cur = GridFunction::sample(g, [&](double x) { return x + g.dx; });
    CHECK(rho_functional(WaveField{prev, cur}) == doctest::Approx(-1.0).epsilon(1e-10));

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const WaveField p{random_smooth(g, rng, 1.0), random_smooth(g, rng, 1.0)};
        const double h = h_norm(p.current, p.velocity());
        CHECK(std::abs(rho_functional(p)) <= h * h * (1.0 + 1e-12));
    }
}

TEST_CASE("boundary velocity window") {
    const Samples zero = sampled(0.0, 3.0, 301, [](double) { return 0.0; });
    CHECK(boundary_velocity_window(zero.t, zero.v, 2.5) == 0.0);
    const Samples one = sampled(0.0, 3.0, 301, [](double) { return 1.0; });
    CHECK(boundary_velocity_window(one.t, one.v, 2.5) == doctest::Approx(1.0).epsilon(1e-12));
    const Samples ramp = sampled(0.0, 3.0, 3001, [](double s) { return s; });
    CHECK(boundary_velocity_window(ramp.t, ramp.v, 2.0) == doctest::Approx(7.0 / 3.0).epsilon(1e-6));
    try {
        boundary_velocity_window(one.t, one.v, 0.5);
        FAIL("expected a history error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::History);
    }
}

TEST_CASE("time_integral_sq") {
    const Samples s = sampled(0.0, 4.0, 4001, [](double t) { return t; });
    CHECK(time_integral_sq(s.t, s.v, 1.0, 2.0) == doctest::Approx(7.0 / 3.0).epsilon(1e-6));
    CHECK(time_integral_sq(s.t, s.v, 0.0, 4.0) == doctest::Approx(64.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("Lyapunov inequalities hold along a closed-loop run") {
    ScenarioConfig cfg;
    cfg.T = 10.0;
    const RunRecord r = run(cfg);
    REQUIRE_FALSE(r.diverged);
    for (const DiagnosticRow& d : r.diagnostics) {
        CHECK(std::abs(d.rho) <= 1.1 * d.norm_p * d.norm_p);
        if (d.t >= 1.0) CHECK(d.window <= 1.1 * d.window_bound);
    }
}
