// Acceptance suite: one pass/fail line per criterion at n=200, dt=dx.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "adrcwave/adrc.hpp"
#include "adrcwave/analysis.hpp"
#include "adrcwave/closed_loop.hpp"
#include "adrcwave/pde.hpp"
#include "scenarios.hpp"

using namespace adrcwave;
using scenarios::Series;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& label, double value, const char* relation, double bound) {
        pass = pass && ok;
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s%s %s=%.4g (%s %.4g)", detail.tellp() > 0 ? "; " : "",
                      ok ? "ok" : "MISS", label.c_str(), value, relation, bound);
        detail << buf;
    }
    void at_most(const std::string& label, double value, double bound) {
        check(value <= bound, label, value, "<=", bound);
    }
    void at_least(const std::string& label, double value, double bound) {
        check(value >= bound, label, value, ">=", bound);
    }
    void below(const std::string& label, double value, double bound) {
        check(value < bound, label, value, "<", bound);
    }
};

void decay_and_ratio(Outcome& out, const std::string& tag, const ScenarioConfig& base) {
    const RunRecord r200 = run(base);
    if (r200.diverged) {
        out.check(false, tag + " diverged at t", r200.divergence_time, ">", base.T);
        return;
    }
    for (const char* name : {"norm_w", "norm_w_hat", "norm_eps", "norm_vhat", "norm_beta"}) {
        out.below(tag + " slope(" + name + ")[5,25]", scenarios::slope(scenarios::column(r200, name), 5, 25), 0.0);
    }
    const Series w = scenarios::column(r200, "norm_w");
    out.at_most(tag + " norm_w(30)/norm_w(0)", w.at(30.0) / w.v.front(), 1e-3);

    ScenarioConfig fine = base;
    fine.n = 400;
    const RunRecord r400 = run(fine);
    const double s200 = scenarios::slope(w, 5, 25);
    const double s400 = scenarios::slope(scenarios::column(r400, "norm_w"), 5, 25);
    out.at_most(tag + " |rate400-rate200|/|rate200|", std::abs(s400 - s200) / std::abs(s200), 0.2);
}

void estimation(Outcome& out, const std::string& tag, const ScenarioConfig& base) {
    ScenarioConfig bounded = scenarios::with_bounded_disturbance(base);
    bounded.T = 40.0;
    const RunRecord rb = run(bounded);
    const Series err = scenarios::column(rb, "F_err");
    const double total = time_integral_sq(err.t, err.v, 0.0, 40.0);
    const double tail = time_integral_sq(err.t, err.v, 35.0, 40.0);
    out.at_most(tag + " int_[35,40](F^-F)^2 / int_[0,40]", tail / total, 0.05);

    ScenarioConfig decaying = scenarios::with_decaying_disturbance(base);
    decaying.T = 40.0;
    const RunRecord rd = run(decaying);
    const Series est = scenarios::estimator_norm(rd);
    out.at_most(tag + " decaying-d estimator norm(40)/norm(0)", est.at(40.0) / est.v.front(), 1e-2);
}

void persistent(Outcome& out, const std::string& tag, const ScenarioConfig& base) {
    ScenarioConfig cfg = scenarios::with_bounded_disturbance(base);
    cfg.T = 60.0;
    const RunRecord r = run(cfg);
    if (r.diverged) {
        out.check(false, tag + " diverged at t", r.divergence_time, ">", cfg.T);
        return;
    }
    const Series w = scenarios::column(r, "norm_w");
    out.at_most(tag + " norm_w(40)/norm_w(0)", w.at(40.0) / w.v.front(), 1e-2);
    out.at_most(tag + " slope(norm_w)[40,60]", scenarios::slope(w, 40, 60), 0.0);
    const Series est = scenarios::estimator_norm(r);
    out.at_least(tag + " max est[0,20] - max est[20,40]", est.max_over(0, 20) - est.max_over(20, 40), 0.0);
}

Outcome criterion1() {
    Outcome out;
    const Grid g = make_grid(200);
    std::mt19937_64 rng(7);
    const GridFunction w0 = random_smooth(g, rng, 1.0), w1 = random_smooth(g, rng, 1.0);
    const double c2 = 1.0, c3 = 1.0;
    const auto left = BoundaryCondition::flux(c2, 0.0, 0.0);
    const auto right = BoundaryCondition::flux(0.0, -c3, 0.0);
    WaveField f = wave_start(w0, w1, g.dx);
    Series norm;
    const double e0 = wave_energy(f, c2, 0.0);
    double e4 = 0.0;
    const int steps = 10 * g.n;
    for (int k = 1; k <= steps; ++k) {
        f = wave_step(f, left, right, (k - 1) * g.dx, g.dx, nullptr, "target");
        norm.t.push_back(k * g.dx);
        norm.v.push_back(h_norm(f.current, f.velocity()));
        if (k == 4 * g.n) e4 = wave_energy(f, c2, 0.0);
    }
    out.at_most("slope(h)[2,10]", scenarios::slope(norm, 2, 10), -0.5);
    out.at_most("E(4)/E(0)", e4 / e0, 1e-6);
    return out;
}

Outcome criterion2() {
    Outcome out;
    decay_and_ratio(out, "spring", scenarios::spring());
    return out;
}

Outcome criterion3() {
    Outcome out;
    estimation(out, "spring", scenarios::spring());
    return out;
}

Outcome criterion4() {
    Outcome out;
    persistent(out, "spring", scenarios::spring());
    return out;
}

Outcome criterion5() {
    Outcome out;
    ScenarioConfig truth = scenarios::spring(200, 10.0);
    truth.observer_init = InitPreset::Truth;
    truth.exact_fhat = true;
    const RunRecord rt = run(truth);
    const Series eps = scenarios::column(rt, "norm_eps");
    const double w0 = scenarios::column(rt, "norm_w").v.front();
    out.at_most("max eps[0,10]/norm_w(0) at truth", eps.max_over(0, 10) / w0, 1e-6);

    const RunRecord rr = run(scenarios::spring());
    out.at_most("slope(norm_eps)[5,25] random init", scenarios::slope(scenarios::column(rr, "norm_eps"), 5, 25),
                -0.05);
    return out;
}

double transport_closed_form_error(const ScenarioConfig& cfg) {
    ClosedLoopState s = init_scenario(cfg);
    const std::size_t n = static_cast<std::size_t>(cfg.n);
    struct Track {
        std::function<const TransportField&(const ClosedLoopState&)> get;
        std::vector<double> initial;
        std::vector<double> inflow;
    };
    std::vector<Track> tracks;
    tracks.push_back({[](const ClosedLoopState& st) -> const TransportField& { return st.est.W; }, {}, {}});
    tracks.push_back({[](const ClosedLoopState& st) -> const TransportField& { return st.obs.Y; }, {}, {}});
    if (s.obs.Z) {
        tracks.push_back({[](const ClosedLoopState& st) -> const TransportField& { return *st.obs.Z; }, {}, {}});
    }
    for (Track& tr : tracks) {
        tr.initial = tr.get(s).current.values;
        tr.inflow.push_back(tr.initial[0]);
    }
    double worst = 0.0;
    for (int k = 1; k <= cfg.steps(); ++k) {
        tick(s, cfg);
        for (Track& tr : tracks) {
            const GridFunction& cur = tr.get(s).current;
            tr.inflow.push_back(cur[0]);
            for (std::size_t j = 0; j <= n; ++j) {
                const std::size_t kk = static_cast<std::size_t>(k);
                const double expected = j >= kk ? tr.initial[j - kk] : tr.inflow[kk - j];
                worst = std::max(worst, std::abs(cur[j] - expected));
            }
        }
    }
    return worst;
}

Outcome criterion6() {
    Outcome out;
    out.at_most("spring W,Y vs characteristics", transport_closed_form_error(scenarios::spring(200, 3.0)), 1e-12);
    out.at_most("damper W,Y,Z vs characteristics", transport_closed_form_error(scenarios::damper(200, 3.0)), 1e-12);

    const Grid g = make_grid(200);
    TransportField tf = transport_start(GridFunction::sample(g, [](double x) { return std::cos(7.0 * x); }));
    double sine_err = 0.0, flush_err = 0.0;
    std::vector<double> inflow{tf.current[0]};
    for (int k = 1; k <= 3 * g.n; ++k) {
        const double t = k * g.dx;
        tf = transport_step(tf, std::sin(t));
        inflow.push_back(std::sin(t));
        for (std::size_t j = 0; j < g.size() && static_cast<int>(j) < k; ++j) {
            sine_err = std::max(sine_err, std::abs(tf.current[j] - std::sin(t - g.x(j))));
            if (k >= g.n) flush_err = std::max(flush_err, std::abs(tf.current[j] - inflow[k - j]));
        }
    }
    out.at_most("inflow sin(t) vs sin(t-x)", sine_err, 1e-12);
    out.at_most("Y inflow history for t>=1", flush_err, 0.0);
    return out;
}

Outcome criterion7() {
    Outcome out;
    const Grid g = make_grid(512);
    const GridFunction smooth =
        GridFunction::sample(g, [](double x) { return std::sin(3.0 * x) + x * x - 0.5 * std::cos(2.0 * x); });
    const double q = 0.5, c2 = 1.0;
    out.at_most("max|invert(apply(g)) - g|",
                (volterra_invert(volterra_apply(smooth, q, c2), q, c2) - smooth).max_abs(), 1e-6);
    out.at_most("max|apply(invert(g)) - g|",
                (volterra_apply(volterra_invert(smooth, q, c2), q, c2) - smooth).max_abs(), 1e-6);
    const GridFunction tilde = volterra_apply(GridFunction(make_grid(200), 1.0), 1.0, 1.0);
    out.at_most("|w~(1) - (2e-1)|", std::abs(tilde.back() - (2.0 * std::exp(1.0) - 1.0)), 1e-5);
    return out;
}

Outcome criterion8() {
    Outcome out;
    decay_and_ratio(out, "damper", scenarios::damper());
    estimation(out, "damper", scenarios::damper());
    persistent(out, "damper", scenarios::damper());
    return out;
}

void lyapunov(Outcome& out, const std::string& tag, const RunRecord& r) {
    double rho_ratio = 0.0, window_ratio = 0.0;
    for (const DiagnosticRow& d : r.diagnostics) {
        if (d.norm_p > 0.0) rho_ratio = std::max(rho_ratio, std::abs(d.rho) / (d.norm_p * d.norm_p));
        if (d.t >= 1.0 && d.window_bound > 0.0) window_ratio = std::max(window_ratio, d.window / d.window_bound);
    }
    out.at_most(tag + " max |rho|/h(p)^2", rho_ratio, 1.1);
    out.at_most(tag + " max window/bound", window_ratio, 1.1);
}

Outcome criterion9() {
    Outcome out;
    lyapunov(out, "criterion-2 run", run(scenarios::spring()));
    ScenarioConfig bounded = scenarios::with_bounded_disturbance(scenarios::spring());
    bounded.T = 60.0;
    lyapunov(out, "criterion-4 run", run(bounded));
    return out;
}

Outcome criterion10() {
    Outcome out;
    ScenarioConfig spring = scenarios::spring(200, 20.0);
    spring.open_loop = true;
    const RunRecord rs = run(spring);
    if (rs.diverged) {
        out.check(true, "open-loop spring blew up at t", rs.divergence_time, "<=", spring.T);
    } else {
        out.at_least("open-loop spring slope(norm_w)[0,20]", scenarios::slope(scenarios::column(rs, "norm_w"), 0, 20),
                     0.0);
    }

    ScenarioConfig damper = scenarios::damper(200, 10.0);
    damper.open_loop = true;
    ClosedLoopState s = init_scenario(damper);
    std::vector<double> energy{wave_energy(s.plant)};
    for (int k = 1; k <= damper.steps(); ++k) {
        tick(s, damper);
        energy.push_back(wave_energy(s.plant));
    }
    const int first = damper.n;
    double worst_drop = 0.0;
    int strict_steps = 0;
    for (std::size_t k = static_cast<std::size_t>(first); k + 1 < energy.size(); ++k) {
        worst_drop = std::max(worst_drop, (energy[k] - energy[k + 1]) / energy[k]);
        if (energy[k + 1] > energy[k]) ++strict_steps;
    }
    out.at_most("open-loop damper worst relative energy drop after t=1", worst_drop, 0.0);
    out.at_least("open-loop damper E(10)/E(1)", energy.back() / energy[static_cast<std::size_t>(first)], 1.0 + 1e-9);

    ScenarioConfig witness = scenarios::spring(200, 10.0);
    witness.plant.q = 1.0;
    witness.plant_init = InitPreset::ZeroOutputWitness;
    witness.disturbance.kind = DisturbanceSpec::Kind::Constant;
    witness.disturbance.amplitude = 1.0;
    witness.open_loop = true;
    const RunRecord rw = run(witness);
    out.at_most("witness max|w(1,t)| on [0,10]", scenarios::column(rw, "w1_trace").max_over(0, 10), 1e-8);
    const Series nw = scenarios::column(rw, "norm_w");
    double drift = 0.0;
    for (double v : nw.v) drift = std::max(drift, std::abs(v - nw.v.front()));
    out.at_most("witness drift of h-norm", drift, 1e-8);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> selected;
    app.add_option("--criterion", selected, "Criterion number(s) 1-10; default all")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);
    if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                         criterion5, criterion6, criterion7, criterion8,
                                                         criterion9, criterion10};
    bool all = true;
    for (int c : selected) {
        bool pass = false;
        std::string detail;
        try {
            const Outcome o = criteria[static_cast<std::size_t>(c - 1)]();
            pass = o.pass;
            detail = o.detail.str();
        } catch (const std::exception& e) {
            detail = std::string("error: ") + e.what();
        }
        std::cout << "criterion " << c << ": " << (pass ? "PASS" : "FAIL") << " | " << detail << std::endl;
        all = all && pass;
    }
    return all ? 0 : 1;
}
