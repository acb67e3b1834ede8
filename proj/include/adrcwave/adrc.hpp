#pragma once

#include <optional>

#include "adrcwave/grid.hpp"
#include "adrcwave/pde.hpp"
#include "adrcwave/plant.hpp"

namespace adrcwave {

/// Estimator gains. c~0 = c0/(1-c0) and c~1 = c1/(1-c0); for the damper the
/// velocity coefficient of the z-system is (c0-q)/(1-c0).
struct EstimatorParams {
    double c0 = 0.5;
    double c1 = 1.0;

    double c1_tilde() const { return c1 / (1.0 - c0); }
    double velocity_coefficient(const PlantParams& pp) const;

    /// Throws Error(Parameter) naming the violated constraint.
    void validate(const PlantParams& pp) const;
};

struct ControllerParams {
    double c2 = 1.0;
    double c3 = 1.0;

    void validate(const PlantParams& pp) const;
};

/// Total-disturbance estimator (v, z, W) and its latest output F^ = z_x(1,t).
struct EstimatorState {
    WaveField v;
    WaveField z;
    TransportField W;
    double f_hat_last = 0.0;
};

/// Observer (w^, Y), plus Z for the damper variant.
struct ObserverState {
    WaveField w_hat;
    TransportField Y;
    std::optional<TransportField> Z;
};

/// Measured plant values used by the compensator during one step: the time
/// average of w(0) over the previous and next levels and the next-level traces.
struct StepMeasurement {
    double w0_avg = 0.0;
    double w0_next = 0.0;
    double w1_next = 0.0;
};

/// Left condition shared by the observer and the v-subsystem.
BoundaryCondition compensator_left_condition(const PlantParams& pp, const EstimatorParams& ep,
                                             double w0_avg);

/// Advances v, W and z and refreshes F^ from the virtual-ghost trace of z.
EstimatorState estimator_step(const EstimatorState& est, const EstimatorParams& ep,
                              const PlantParams& pp, const StepMeasurement& y, double u, double t);

double estimate_total_disturbance(const EstimatorState& est);

/// Observer step with the explicit right flux u + F^ - Y_x(1).
ObserverState observer_step(const ObserverState& obs, const PlantParams& pp, const EstimatorParams& ep,
                            const ControllerParams& cp, const StepMeasurement& y, double u,
                            double f_hat, double t);

struct FeedbackStep {
    ObserverState next;
    double feedback = 0.0;  ///< realized w^_x(1) during the step
    double control = 0.0;   ///< u = -F^ + Y_x(1) + feedback
};

/// Observer step in closed loop. The observer's right flux u + F^ - Y_x(1)
/// equals the backstepping feedback, which is closed implicitly at x=1; the
/// control is reconstructed from the realized flux.
FeedbackStep observer_feedback_step(const ObserverState& obs, const PlantParams& pp,
                                    const EstimatorParams& ep, const ControllerParams& cp,
                                    const StepMeasurement& y, double f_hat, double t);

/// Spring control law evaluated on a snapshot of the observer.
double control_spring(const ObserverState& obs, double f_hat, const ControllerParams& cp,
                      const PlantParams& pp);

/// Damper control law evaluated on a snapshot of the observer.
double control_damper(const ObserverState& obs, double f_hat, const ControllerParams& cp);

/// w~ = w^ + (c2+q) int_0^x e^{q(x-s)} w^(s) ds.
GridFunction volterra_apply(const GridFunction& w_hat, double q, double c2);

/// w^ = w~ - (c2+q) int_0^x e^{-c2(x-s)} w~(s) ds.
GridFunction volterra_invert(const GridFunction& w_tilde, double q, double c2);

/// Derived fields, each on the previous and current levels.
struct DiagnosticState {
    WaveField v_hat;
    WaveField p;
    WaveField beta;
    WaveField eps;
    WaveField eps_tilde;
    WaveField eta;
    WaveField w_tilde;
};

DiagnosticState diagnostics(const WaveField& plant, const EstimatorState& est, const ObserverState& obs,
                            const PlantParams& pp, const ControllerParams& cp);

}  // namespace adrcwave
