#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "adrcwave/grid.hpp"
#include "adrcwave/pde.hpp"

namespace adrcwave {

enum class Variant { Spring, Damper };

const char* to_string(Variant v);

/// Destabilizing boundary gain. Spring: w_x(0) = -q w(0). Damper: w_x(0) = -q w_t(0).
struct PlantParams {
    double q = 0.5;
    Variant variant = Variant::Spring;

    /// Throws Error(Parameter) when q <= 0, or q == 1 for the damper.
    void validate() const;

    /// Flux condition at x=0 for the uncontrolled plant.
    BoundaryCondition left_condition() const;
};

/// External disturbance d(t).
struct DisturbanceSpec {
    enum class Kind { Zero, Constant, SinusoidSum, Decaying, BoundedNoise };
    Kind kind = Kind::Zero;
    double amplitude = 0.0;
    double rate = 0.0;
    std::vector<double> theta;
    std::vector<double> vartheta;
    std::vector<double> alpha;
    double bound = 0.0;
    std::uint64_t seed = 0;
    double hold = 0.0;  ///< piecewise-constant interval of bounded noise (the step dt)

    void validate() const;
};

/// Internal uncertainty f(w, w_t), globally Lipschitz with f(0,0) = 0.
struct UncertaintySpec {
    enum class Kind { Zero, TraceSine, LinearFunctional };
    Kind kind = Kind::Zero;
    double k = 0.0;
    double x0 = 1.0;
    double a = 0.0;
    double b = 0.0;

    void validate() const;

    /// Lipschitz constant with respect to h_norm.
    double lipschitz() const;
};

struct TotalDisturbanceSample {
    double t = 0.0;
    double f_value = 0.0;
    double d_value = 0.0;
    double F = 0.0;
};

double eval_disturbance(const DisturbanceSpec& spec, double t);
double eval_uncertainty(const UncertaintySpec& spec, const StatePair& s);
double eval_uncertainty(const UncertaintySpec& spec, const WaveField& w);
TotalDisturbanceSample total_disturbance(const DisturbanceSpec& d, const UncertaintySpec& f,
                                         const WaveField& w, double t);

/// Interior and left endpoint of the next plant level; the right node is left open.
GridFunction plant_predict(const WaveField& state, const PlantParams& params);

/// Closes the right endpoint, w_x(1) = u + F.
void plant_close(const WaveField& state, GridFunction& next, double u, double F);

/// One full step of the plant with boundary input u + F.
WaveField plant_step(const WaveField& state, const PlantParams& params, double u, double F, double t,
                     double dt);

/// y_m = (w(0,t), w(1,t)).
std::pair<double, double> measure(const WaveField& state);

/// Residual of the left condition w_x(0) + q w(0) for the profile (q(x-1), 0).
double witness_left_residual(double q);

}  // namespace adrcwave
