#include "adrcwave/adrc.hpp"

#include <cmath>
#include <string>

#include "adrcwave/error.hpp"

namespace adrcwave {

namespace {

void require_finite(const GridFunction& g, const char* subsystem, double t) {
    if (!g.all_finite()) throw DivergenceError(subsystem, t);
}

WaveField pointwise(const WaveField& a, const WaveField& b, double sb) {
    WaveField out{a.previous, a.current};
    for (std::size_t j = 0; j < out.current.size(); ++j) {
        out.previous[j] += sb * b.previous[j];
        out.current[j] += sb * b.current[j];
    }
    return out;
}

WaveField pointwise(const WaveField& a, const TransportField& b, double sb) {
    WaveField out{a.previous, a.current};
    for (std::size_t j = 0; j < out.current.size(); ++j) {
        out.previous[j] += sb * b.previous[j];
        out.current[j] += sb * b.current[j];
    }
    return out;
}

/// Cumulative trapezoid of K(x - s) g(s) with K(r) = e^{lambda r}, plus the
/// Euler-Maclaurin end correction -dx^2/12 [h'(x) - h'(0)] of h(s) = K(x - s) g(s).
GridFunction exp_kernel_integral(const GridFunction& g, double lambda) {
    const double dx = g.grid.dx;
    const double decay = std::exp(lambda * dx);
    GridFunction out(g.grid);
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
        out[j + 1] = decay * out[j] + 0.5 * dx * (decay * g[j] + g[j + 1]);
    }
    const GridFunction dg = derivative(g);
    const double h0 = dg[0] - lambda * g[0];
    for (std::size_t j = 1; j < g.size(); ++j) {
        const double hx = dg[j] - lambda * g[j];
        out[j] -= dx * dx / 12.0 * (hx - std::exp(lambda * g.grid.x(j)) * h0);
    }
    return out;
}

ObserverState shift_observer(const ObserverState& obs, GridFunction w_hat_next, const PlantParams& pp,
                             const EstimatorParams& ep, const ControllerParams& cp,
                             const StepMeasurement& y) {
    ObserverState next;
    next.w_hat = WaveField{obs.w_hat.current, std::move(w_hat_next)};
    const double w_hat0 = next.w_hat.current[0];
    next.Y = transport_step(obs.Y, -ep.c0 * (w_hat0 - y.w0_next));
    if (pp.variant == Variant::Damper) {
        if (!obs.Z) throw Error(ErrorKind::Parameter, "damper observer requires the Z field");
        next.Z = transport_step(*obs.Z, -cp.c2 * w_hat0);
    }
    return next;
}

}  // namespace

double EstimatorParams::velocity_coefficient(const PlantParams& pp) const {
    const double num = pp.variant == Variant::Spring ? c0 : c0 - pp.q;
    return num / (1.0 - c0);
}

void EstimatorParams::validate(const PlantParams& pp) const {
    if (pp.variant == Variant::Spring) {
        if (!(c0 > 0.0 && c0 < 1.0)) {
            throw Error(ErrorKind::Parameter, "estimator.c0 must satisfy 0 < c0 < 1 (got " +
                                                  std::to_string(c0) + ")");
        }
        if (!(c1 > 0.0)) throw Error(ErrorKind::Parameter, "estimator.c1 must satisfy c1 > 0");
        return;
    }
    if (c0 == 1.0) throw Error(ErrorKind::Parameter, "estimator.c0 must satisfy c0 != 1");
    if (!(c1 / (1.0 - c0) > 0.0)) {
        throw Error(ErrorKind::Parameter, "estimator gains must satisfy c1/(1-c0) > 0");
    }
    if (!(velocity_coefficient(pp) > 0.0)) {
        throw Error(ErrorKind::Parameter, "estimator gains must satisfy (c0-q)/(1-c0) > 0 (c0=" +
                                              std::to_string(c0) + ", q=" + std::to_string(pp.q) + ")");
    }
}

void ControllerParams::validate(const PlantParams& pp) const {
    if (!(c3 > 0.0)) throw Error(ErrorKind::Parameter, "controller.c3 must satisfy c3 > 0");
    if (pp.variant == Variant::Spring) {
        if (!(c2 > 0.0)) throw Error(ErrorKind::Parameter, "controller.c2 must satisfy c2 > 0");
        return;
    }
    if (!(c2 != 1.0 && (c2 - pp.q) / (1.0 - c2) > 0.0)) {
        throw Error(ErrorKind::Parameter, "controller gains must satisfy (c2-q)/(1-c2) > 0 (c2=" +
                                              std::to_string(c2) + ", q=" + std::to_string(pp.q) + ")");
    }
}

BoundaryCondition compensator_left_condition(const PlantParams& pp, const EstimatorParams& ep,
                                             double w0_avg) {
    if (pp.variant == Variant::Spring) return BoundaryCondition::flux(ep.c1, 0.0, -(pp.q + ep.c1) * w0_avg);
    return BoundaryCondition::flux(ep.c1, -pp.q, -ep.c1 * w0_avg);
}

EstimatorState estimator_step(const EstimatorState& est, const EstimatorParams& ep,
                              const PlantParams& pp, const StepMeasurement& y, double u, double t) {
    const double t_next = t + est.v.dt();

    GridFunction v_next = wave_interior(est.v);
    v_next[0] = close_left(est.v, compensator_left_condition(pp, ep, y.w0_avg));
    v_next[v_next.size() - 1] =
        close_right(est.v, BoundaryCondition::neumann(u - transport_exit_slope(est.W)));
    require_finite(v_next, "estimator.v", t_next);

    TransportField W_next = transport_step(est.W, -ep.c0 * (v_next[0] - y.w0_next));

    GridFunction z_next = wave_interior(est.z);
    z_next[0] = close_left(est.z, BoundaryCondition::flux(ep.c1_tilde(), ep.velocity_coefficient(pp), 0.0));
    z_next[z_next.size() - 1] = y.w1_next - v_next.back() - W_next.current.back();
    require_finite(z_next, "estimator.z", t_next);

    EstimatorState next;
    next.f_hat_last = ghost_trace(est.z, z_next, End::Right);
    next.v = WaveField{est.v.current, std::move(v_next)};
    next.z = WaveField{est.z.current, std::move(z_next)};
    next.W = std::move(W_next);
    return next;
}

double estimate_total_disturbance(const EstimatorState& est) { return est.f_hat_last; }

ObserverState observer_step(const ObserverState& obs, const PlantParams& pp, const EstimatorParams& ep,
                            const ControllerParams& cp, const StepMeasurement& y, double u,
                            double f_hat, double t) {
    const WaveField& wh = obs.w_hat;
    GridFunction next = wave_interior(wh);
    next[0] = close_left(wh, compensator_left_condition(pp, ep, y.w0_avg));
    next[next.size() - 1] =
        close_right(wh, BoundaryCondition::neumann(u + f_hat - transport_exit_slope(obs.Y)));
    require_finite(next, "observer", t + wh.dt());
    return shift_observer(obs, std::move(next), pp, ep, cp, y);
}

FeedbackStep observer_feedback_step(const ObserverState& obs, const PlantParams& pp,
                                    const EstimatorParams& ep, const ControllerParams& cp,
                                    const StepMeasurement& y, double f_hat, double t) {
    const WaveField& wh = obs.w_hat;
    const double dx = wh.grid().dx;
    const double dt = wh.dt();
    const std::size_t n = wh.current.size() - 1;

    GridFunction next = wave_interior(wh);
    next[0] = close_left(wh, compensator_left_condition(pp, ep, y.w0_avg));

    BoundaryCondition right;
    if (pp.variant == Variant::Spring) {
        const double k = cp.c2 + pp.q;
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double weight = j == 0 ? 0.5 * dx : dx;
            const double vel = (next[j] - wh.previous[j]) / (2.0 * dt);
            const double avg = 0.5 * (next[j] + wh.previous[j]);
            s += weight * std::exp(pp.q * (1.0 - wh.grid().x(j))) * (cp.c3 * vel + pp.q * avg);
        }
        right = BoundaryCondition::flux(-k * (1.0 + 0.5 * pp.q * dx), -cp.c3 * (1.0 + 0.5 * k * dx), -k * s);
    } else {
        const TransportField& Z = *obs.Z;
        const double z_avg = 0.5 * (transport_exit_next(Z) + Z.previous[n]);
        right = BoundaryCondition::flux(-cp.c3, 0.0, -cp.c3 * z_avg - transport_exit_slope(Z));
    }
    next[n] = close_right(wh, right);
    require_finite(next, "observer", t + dt);

    FeedbackStep out;
    out.feedback = realized_flux(wh, right, End::Right, next[n]);
    out.control = -f_hat + transport_exit_slope(obs.Y) + out.feedback;
    out.next = shift_observer(obs, std::move(next), pp, ep, cp, y);
    return out;
}

double control_spring(const ObserverState& obs, double f_hat, const ControllerParams& cp,
                      const PlantParams& pp) {
    const WaveField& wh = obs.w_hat;
    const GridFunction vel = wh.velocity();
    const Grid& g = wh.grid();
    const double k = cp.c2 + pp.q;
    GridFunction source(g);
    for (std::size_t j = 0; j < g.size(); ++j) source[j] = cp.c3 * vel[j] + pp.q * wh.current[j];
    return -f_hat + transport_exit_slope(obs.Y) - cp.c3 * vel.back() - k * wh.current.back() -
           k * exp_kernel_integral(source, pp.q).back();
}

double control_damper(const ObserverState& obs, double f_hat, const ControllerParams& cp) {
    if (!obs.Z) throw Error(ErrorKind::Parameter, "damper control requires the Z field");
    const TransportField& Z = *obs.Z;
    return -cp.c3 * obs.w_hat.current.back() - cp.c3 * Z.current.back() - f_hat +
           transport_exit_slope(obs.Y) - transport_exit_slope(Z);
}

GridFunction volterra_apply(const GridFunction& w_hat, double q, double c2) {
    GridFunction out = exp_kernel_integral(w_hat, q);
    out *= c2 + q;
    out += w_hat;
    return out;
}

GridFunction volterra_invert(const GridFunction& w_tilde, double q, double c2) {
    GridFunction out = exp_kernel_integral(w_tilde, -c2);
    out *= -(c2 + q);
    out += w_tilde;
    return out;
}

DiagnosticState diagnostics(const WaveField& plant, const EstimatorState& est, const ObserverState& obs,
                            const PlantParams& pp, const ControllerParams& cp) {
    DiagnosticState d;
    d.v_hat = pointwise(est.v, plant, -1.0);
    d.p = pointwise(pointwise(plant, est.v, -1.0), est.W, -1.0);
    d.beta = pointwise(est.z, d.p, -1.0);
    d.eps = pointwise(obs.w_hat, plant, -1.0);
    d.eps_tilde = pointwise(d.eps, obs.Y, 1.0);
    d.eta = pointwise(d.eps_tilde, d.beta, -1.0);
    if (pp.variant == Variant::Spring) {
        d.w_tilde = WaveField{volterra_apply(obs.w_hat.previous, pp.q, cp.c2),
                              volterra_apply(obs.w_hat.current, pp.q, cp.c2)};
    } else {
        d.w_tilde = pointwise(obs.w_hat, *obs.Z, 1.0);
    }
    return d;
}

}  // namespace adrcwave
