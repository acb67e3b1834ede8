#include "adrcwave/closed_loop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "adrcwave/analysis.hpp"
#include "adrcwave/error.hpp"

namespace adrcwave {

const char* const kTrajectoryColumnNames[kTrajectoryColumns] = {
    "t",        "u",          "d",        "f",         "F",         "F_hat",
    "F_err",    "norm_w",     "norm_w_hat", "norm_eps", "norm_vhat", "norm_beta",
    "norm_wtilde", "sup_W",   "sup_Y",    "sup_Z",     "w0_trace",  "w1_trace"};

const char* const kDiagnosticColumnNames[kDiagnosticColumns] = {"t",   "norm_est", "norm_p",
                                                                "rho", "window",   "window_bound"};

double column_value(const TrajectoryRow& r, int column) {
    const double values[kTrajectoryColumns] = {r.t,         r.u,         r.d,         r.f,         r.F,
                                               r.F_hat,     r.F_err,     r.norm_w,    r.norm_w_hat,
                                               r.norm_eps,  r.norm_vhat, r.norm_beta, r.norm_wtilde,
                                               r.sup_W,     r.sup_Y,     r.sup_Z,     r.w0_trace,
                                               r.w1_trace};
    return values[column];
}

int column_index(const std::string& name) {
    for (int i = 0; i < kTrajectoryColumns; ++i) {
        if (name == kTrajectoryColumnNames[i]) return i;
    }
    return -1;
}

const char* to_string(InitPreset p) {
    switch (p) {
        case InitPreset::Zero:
            return "zero";
        case InitPreset::RandomSmooth:
            return "random-smooth";
        case InitPreset::ZeroOutputWitness:
            return "zero-output-witness";
        case InitPreset::Truth:
            return "truth";
    }
    return "zero";
}

void ScenarioConfig::validate() const {
    plant.validate();
    estimator.validate(plant);
    controller.validate(plant);
    disturbance.validate();
    uncertainty.validate();
    if (n < 8) throw Error(ErrorKind::Parameter, "run.n must be at least 8 (got " + std::to_string(n) + ")");
    if (!(T > 0.0)) throw Error(ErrorKind::Parameter, "run.T must satisfy T > 0");
    if (cadence < 1) throw Error(ErrorKind::Parameter, "run.cadence must be at least 1");
    if (!(max_amplitude > 0.0)) throw Error(ErrorKind::Parameter, "run.max_amplitude must be > 0");
    if (!(compat_tol >= 0.0)) throw Error(ErrorKind::Parameter, "run.compat_tol must be >= 0");
    if (plant_init == InitPreset::Truth) {
        throw Error(ErrorKind::Parameter, "init.plant cannot be 'truth'");
    }
    if (estimator_init == InitPreset::Truth) {
        throw Error(ErrorKind::Parameter, "init.estimator cannot be 'truth'");
    }
}

int ScenarioConfig::steps() const { return static_cast<int>(std::llround(T * static_cast<double>(n))); }

double CompatibilityReport::max_abs() const {
    return std::max({std::abs(W_shift), std::abs(Y_shift), std::abs(Z_shift), std::abs(z_shift)});
}

GridFunction random_smooth(const Grid& g, std::mt19937_64& rng, double amplitude) {
    std::normal_distribution<double> normal(0.0, 1.0);
    double a[4], b[4];
    for (int k = 0; k < 4; ++k) {
        a[k] = normal(rng);
        b[k] = normal(rng);
    }
    return GridFunction::sample(g, [&](double x) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double kk = static_cast<double>(k + 1);
            const double w = std::numbers::pi * kk * x;
            s += (a[k] * std::sin(w) + b[k] * std::cos(w)) / (kk * kk);
        }
        return amplitude * s;
    });
}

namespace {

double shift_to(GridFunction& f, std::size_t j, double target) {
    const double shift = target - f[j];
    for (double& v : f.values) v += shift;
    return shift;
}

void guard(const GridFunction& g, const char* subsystem, double t, double max_amplitude) {
    if (!g.all_finite() || g.max_abs() > max_amplitude) throw DivergenceError(subsystem, t);
}

}  // namespace

ClosedLoopState init_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const Grid g = make_grid(cfg.n);
    const double dt = cfg.dt();
    const std::size_t n = static_cast<std::size_t>(cfg.n);

    std::mt19937_64 rng(cfg.seed);
    const double amp = cfg.init_amplitude;
    GridFunction rw0 = random_smooth(g, rng, amp), rw1 = random_smooth(g, rng, amp);
    GridFunction rv0 = random_smooth(g, rng, amp), rv1 = random_smooth(g, rng, amp);
    GridFunction rz0 = random_smooth(g, rng, amp), rz1 = random_smooth(g, rng, amp);
    GridFunction rW0 = random_smooth(g, rng, amp);
    GridFunction rY0 = random_smooth(g, rng, amp);
    GridFunction rZ0 = random_smooth(g, rng, amp);
    GridFunction rh0 = random_smooth(g, rng, amp), rh1 = random_smooth(g, rng, amp);
    const GridFunction zero(g);

    GridFunction w0 = zero, w1 = zero;
    if (cfg.plant_init == InitPreset::RandomSmooth) {
        w0 = rw0;
        w1 = rw1;
    } else if (cfg.plant_init == InitPreset::ZeroOutputWitness) {
        const double q = cfg.plant.q;
        w0 = GridFunction::sample(g, [q](double x) { return q * (x - 1.0); });
    }

    GridFunction v0 = zero, v1 = zero, z0 = zero, z1 = zero, W0 = zero;
    if (cfg.estimator_init == InitPreset::RandomSmooth) {
        v0 = rv0;
        v1 = rv1;
        z0 = rz0;
        z1 = rz1;
        W0 = rW0;
    }

    GridFunction h0 = zero, h1 = zero, Y0 = zero, Z0 = zero;
    if (cfg.observer_init == InitPreset::RandomSmooth) {
        h0 = rh0;
        h1 = rh1;
        Y0 = rY0;
        Z0 = rZ0;
    } else if (cfg.observer_init == InitPreset::Truth) {
        h0 = w0;
        h1 = w1;
    }

    ClosedLoopState s;
    const double c0 = cfg.estimator.c0;
    s.compat.W_shift = shift_to(W0, 0, -c0 * (v0[0] - w0[0]));
    s.compat.Y_shift = shift_to(Y0, 0, -c0 * (h0[0] - w0[0]));
    if (cfg.plant.variant == Variant::Damper) s.compat.Z_shift = shift_to(Z0, 0, -cfg.controller.c2 * h0[0]);
    s.compat.z_shift = shift_to(z0, n, w0[n] - v0[n] - W0[n]);
    if (cfg.strict_compat && s.compat.max_abs() > cfg.compat_tol) {
        throw Error(ErrorKind::Compatibility,
                    "initial data violate the compatibility conditions by " + std::to_string(s.compat.max_abs()) +
                        " (tolerance " + std::to_string(cfg.compat_tol) + ")");
    }

    s.plant = wave_start_backward(w0, w1, dt);
    s.est.v = wave_start_backward(v0, v1, dt);
    s.est.z = wave_start_backward(z0, z1, dt);
    s.est.W = transport_start(W0);
    s.est.z.previous[n] = s.plant.previous[n] - s.est.v.previous[n] - s.est.W.previous[n];
    s.est.f_hat_last = boundary_slope(s.est.z.current, End::Right);
    s.obs.w_hat = wave_start_backward(h0, h1, dt);
    s.obs.Y = transport_start(Y0);
    if (cfg.plant.variant == Variant::Damper) s.obs.Z = transport_start(Z0);
    s.t = 0.0;
    s.step = 0;
    return s;
}

double applied_f_hat(const ClosedLoopState& s, const ScenarioConfig& cfg, double F) {
    if (cfg.exact_fhat) return F;
    const auto& tr = s.traces;
    const long m = static_cast<long>(tr.size());
    auto at = [&](long back) -> double {
        if (!cfg.filter_fhat) return tr[static_cast<std::size_t>(m - back)];
        double sum = 0.0;
        int count = 0;
        for (long i = back; i < back + 3 && i <= m; ++i, ++count) sum += tr[static_cast<std::size_t>(m - i)];
        return sum / count;
    };
    if (m >= 4) return 2.0 * at(2) - at(4);
    if (m >= 2) return at(2);
    return s.est.f_hat_last;
}

StepSignals compute_signals(const ClosedLoopState& s, const ScenarioConfig& cfg) {
    StepSignals sig;
    sig.F = total_disturbance(cfg.disturbance, cfg.uncertainty, s.plant, s.t);
    sig.f_hat = applied_f_hat(s, cfg, sig.F.F);
    sig.plant_next = plant_predict(s.plant, cfg.plant);
    sig.measurement.w0_next = sig.plant_next[0];
    sig.measurement.w0_avg = 0.5 * (sig.plant_next[0] + s.plant.previous[0]);
    if (cfg.open_loop) {
        sig.u = cfg.open_loop_u;
        sig.observer_next = observer_step(s.obs, cfg.plant, cfg.estimator, cfg.controller, sig.measurement, sig.u,
                                          sig.f_hat, s.t);
    } else {
        FeedbackStep fb = observer_feedback_step(s.obs, cfg.plant, cfg.estimator, cfg.controller,
                                                 sig.measurement, sig.f_hat, s.t);
        sig.u = fb.control;
        sig.observer_next = std::move(fb.next);
    }
    return sig;
}

void tick(ClosedLoopState& s, const ScenarioConfig& cfg) {
    const double t_next = static_cast<double>(s.step + 1) * cfg.dt();
    StepSignals sig = compute_signals(s, cfg);
    guard(sig.observer_next.w_hat.current, "observer", t_next, cfg.max_amplitude);

    plant_close(s.plant, sig.plant_next, sig.u, sig.F.F);
    guard(sig.plant_next, "plant", t_next, cfg.max_amplitude);
    sig.measurement.w1_next = sig.plant_next.back();

    EstimatorState est_next = estimator_step(s.est, cfg.estimator, cfg.plant, sig.measurement, sig.u, s.t);
    guard(est_next.v.current, "estimator.v", t_next, cfg.max_amplitude);
    guard(est_next.z.current, "estimator.z", t_next, cfg.max_amplitude);

    s.traces.push_back(est_next.f_hat_last);
    while (s.traces.size() > 8) s.traces.pop_front();

    advance(s.plant, std::move(sig.plant_next));
    s.est = std::move(est_next);
    s.obs = std::move(sig.observer_next);
    s.last_u = sig.u;
    s.last_F = sig.F.F;
    s.last_f = sig.F.f_value;
    s.last_d = sig.F.d_value;
    s.last_F_hat = sig.f_hat;
    s.step += 1;
    s.t = t_next;
}

TrajectoryRow sample_row(const ClosedLoopState& s, const ScenarioConfig& cfg) {
    const DiagnosticState d = diagnostics(s.plant, s.est, s.obs, cfg.plant, cfg.controller);
    auto h = [](const WaveField& f) { return h_norm(f.current, f.velocity()); };
    TrajectoryRow r{};
    r.t = s.t;
    r.norm_w = h(s.plant);
    r.norm_w_hat = h(s.obs.w_hat);
    r.norm_eps = h(d.eps);
    r.norm_vhat = h(d.v_hat);
    r.norm_beta = h(d.beta);
    r.norm_wtilde = h(d.w_tilde);
    r.sup_W = s.est.W.current.max_abs();
    r.sup_Y = s.obs.Y.current.max_abs();
    r.sup_Z = s.obs.Z ? s.obs.Z->current.max_abs() : 0.0;
    r.w0_trace = s.plant.current.front();
    r.w1_trace = s.plant.current.back();
    return r;
}

namespace {

WaveField p_field(const ClosedLoopState& s) {
    WaveField p{s.plant.previous - s.est.v.previous, s.plant.current - s.est.v.current};
    p.previous -= s.est.W.previous;
    p.current -= s.est.W.current;
    return p;
}

double estimator_norm(const EstimatorState& est) {
    const double hv = h_norm(est.v.current, est.v.velocity());
    const double hz = h_norm(est.z.current, est.z.velocity());
    const GridFunction wx = derivative(est.W.current);
    GridFunction wx2(wx.grid);
    for (std::size_t j = 0; j < wx.size(); ++j) wx2[j] = wx[j] * wx[j];
    const double w0 = est.W.current[0];
    return std::sqrt(hv * hv + hz * hz + integrate(wx2) + w0 * w0);
}

/// Per-step history of p_t(0)^2 and h_norm(p)^2 over the trailing unit window.
class WindowTracker {
public:
    explicit WindowTracker(std::size_t span) : span_(span) {}

    void push(double t, double pt0, double hp2) {
        times_.push_back(t);
        pt0_.push_back(pt0);
        hp2_.push_back(hp2);
        if (times_.size() > span_ + 1) {
            times_.erase(times_.begin());
            pt0_.erase(pt0_.begin());
            hp2_.erase(hp2_.begin());
        }
    }

    bool full() const { return times_.size() == span_ + 1; }

    std::pair<double, double> evaluate(double t) const {
        const double window = boundary_velocity_window(times_, pt0_, t);
        const double bound = 3.0 * *std::max_element(hp2_.begin(), hp2_.end());
        return {window, bound};
    }

private:
    std::size_t span_;
    std::vector<double> times_, pt0_, hp2_;
};

}  // namespace

RunRecord run(const ScenarioConfig& cfg) {
    RunRecord rec;
    ClosedLoopState s = init_scenario(cfg);
    rec.compat = s.compat;
    const int steps = cfg.steps();
    const double dt = cfg.dt();
    WindowTracker window(static_cast<std::size_t>(cfg.n));

    auto track = [&](const ClosedLoopState& st) {
        const WaveField p = p_field(st);
        const double pt0 = (p.current[0] - p.previous[0]) / dt;
        const double hp = h_norm(p.current, p.velocity());
        window.push(st.t, pt0, hp * hp);
        return p;
    };

    try {
        for (int k = 0; k <= steps; ++k) {
            const WaveField p = track(s);
            const bool sampled = k % cfg.cadence == 0 || k == steps;
            TrajectoryRow row{};
            DiagnosticRow diag{};
            if (sampled) {
                row = sample_row(s, cfg);
                diag.t = s.t;
                diag.norm_est = estimator_norm(s.est);
                diag.norm_p = h_norm(p.current, p.velocity());
                diag.rho = rho_functional(p);
                if (window.full()) std::tie(diag.window, diag.window_bound) = window.evaluate(s.t);
            }
            double u, F, f, d, f_hat;
            if (k < steps) {
                tick(s, cfg);
                u = s.last_u;
                F = s.last_F;
                f = s.last_f;
                d = s.last_d;
                f_hat = s.last_F_hat;
            } else {
                const StepSignals sig = compute_signals(s, cfg);
                u = sig.u;
                F = sig.F.F;
                f = sig.F.f_value;
                d = sig.F.d_value;
                f_hat = sig.f_hat;
            }
            if (sampled) {
                row.u = u;
                row.d = d;
                row.f = f;
                row.F = F;
                row.F_hat = f_hat;
                row.F_err = f_hat - F;
                rec.rows.push_back(row);
                rec.diagnostics.push_back(diag);
            }
        }
    } catch (const DivergenceError& e) {
        rec.diverged = true;
        rec.divergence_time = e.time();
        rec.divergence_subsystem = e.subsystem();
        rec.message = e.what();
    }
    return rec;
}

}  // namespace adrcwave
