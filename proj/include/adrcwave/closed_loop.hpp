#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "adrcwave/adrc.hpp"
#include "adrcwave/pde.hpp"
#include "adrcwave/plant.hpp"

namespace adrcwave {

/// Named initial-data generators.
enum class InitPreset { Zero, RandomSmooth, ZeroOutputWitness, Truth };

const char* to_string(InitPreset p);

struct ScenarioConfig {
    PlantParams plant;
    EstimatorParams estimator;
    ControllerParams controller;
    DisturbanceSpec disturbance;
    UncertaintySpec uncertainty;

    InitPreset plant_init = InitPreset::RandomSmooth;
    InitPreset estimator_init = InitPreset::RandomSmooth;
    InitPreset observer_init = InitPreset::RandomSmooth;
    std::uint64_t seed = 7;
    double init_amplitude = 1.0;

    int n = 200;
    double T = 30.0;
    int cadence = 1;

    bool open_loop = false;
    double open_loop_u = 0.0;
    bool filter_fhat = false;
    bool exact_fhat = false;
    bool strict_compat = false;
    double compat_tol = 1e-9;
    double max_amplitude = 1e8;

    double fit_start = 5.0;
    double fit_end = 25.0;

    /// Checks every parameter constraint; throws Error(Parameter) naming the offender.
    void validate() const;

    int steps() const;
    double dt() const { return 1.0 / static_cast<double>(n); }
};

/// Constant shifts applied to make the initial data compatible.
struct CompatibilityReport {
    double W_shift = 0.0;
    double Y_shift = 0.0;
    double Z_shift = 0.0;
    double z_shift = 0.0;

    double max_abs() const;
};

struct ClosedLoopState {
    double t = 0.0;
    long step = 0;
    WaveField plant;
    EstimatorState est;
    ObserverState obs;
    double last_u = 0.0;
    double last_F = 0.0;
    double last_f = 0.0;
    double last_d = 0.0;
    double last_F_hat = 0.0;
    std::deque<double> traces;  ///< recent F^ traces, newest last
    CompatibilityReport compat;
};

/// Sum over k=1..4 of (N(0,1) sin(k pi x) + N(0,1) cos(k pi x))/k^2, scaled.
GridFunction random_smooth(const Grid& g, std::mt19937_64& rng, double amplitude);

ClosedLoopState init_scenario(const ScenarioConfig& cfg);

/// F^ the controller applies during the next step, from the trace history.
double applied_f_hat(const ClosedLoopState& s, const ScenarioConfig& cfg, double F);

/// Everything a tick decides before the plant's right node is closed.
struct StepSignals {
    TotalDisturbanceSample F;
    double f_hat = 0.0;
    double u = 0.0;
    GridFunction plant_next;  ///< interior and left node only
    StepMeasurement measurement;
    ObserverState observer_next;
};

StepSignals compute_signals(const ClosedLoopState& s, const ScenarioConfig& cfg);

/// Advances every subsystem by one dt. Throws DivergenceError naming the subsystem.
void tick(ClosedLoopState& s, const ScenarioConfig& cfg);

struct TrajectoryRow {
    double t, u, d, f, F, F_hat, F_err;
    double norm_w, norm_w_hat, norm_eps, norm_vhat, norm_beta, norm_wtilde;
    double sup_W, sup_Y, sup_Z;
    double w0_trace, w1_trace;
};

inline constexpr int kTrajectoryColumns = 18;
extern const char* const kTrajectoryColumnNames[kTrajectoryColumns];
double column_value(const TrajectoryRow& r, int column);
int column_index(const std::string& name);

/// Per-sample Lyapunov and estimator diagnostics.
struct DiagnosticRow {
    double t;
    double norm_est;        ///< sqrt(h(v)^2 + h(z)^2 + int W_x^2 + W(0)^2)
    double norm_p;          ///< h_norm of (p, p_t)
    double rho;             ///< 2 int (x-1) p_t p_x
    double window;          ///< int_{t-1}^{t} p_t(0,s)^2 ds, zero before t = 1
    double window_bound;    ///< 3 max_{[t-1,t]} h_norm(p,p_t)^2, zero before t = 1
};

inline constexpr int kDiagnosticColumns = 6;
extern const char* const kDiagnosticColumnNames[kDiagnosticColumns];

struct RunRecord {
    std::vector<TrajectoryRow> rows;
    std::vector<DiagnosticRow> diagnostics;
    CompatibilityReport compat;
    bool diverged = false;
    double divergence_time = 0.0;
    std::string divergence_subsystem;
    std::string message;
};

TrajectoryRow sample_row(const ClosedLoopState& s, const ScenarioConfig& cfg);

/// Runs init plus T/dt ticks, sampling every `cadence` steps. Divergence is
/// captured in the record together with every row produced before it.
RunRecord run(const ScenarioConfig& cfg);

}  // namespace adrcwave
