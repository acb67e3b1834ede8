#pragma once

#include <string>

#include "adrcwave/grid.hpp"

namespace adrcwave {

/// Endpoint condition for a wave field.
///
/// Flux form: u_x = a*u + b*u_t + g at the endpoint. The scheme evaluates the
/// Robin term as the average of the next and previous levels and the velocity
/// term as the centered difference over the same two levels, so the endpoint
/// value solves a scalar linear equation in closed form.
///
/// Dirichlet form: the endpoint is assigned g directly.
struct BoundaryCondition {
    enum class Kind { Dirichlet, Flux };
    Kind kind = Kind::Flux;
    double a = 0.0;
    double b = 0.0;
    double g = 0.0;

    static BoundaryCondition flux(double a, double b, double g) { return {Kind::Flux, a, b, g}; }
    static BoundaryCondition neumann(double g = 0.0) { return {Kind::Flux, 0.0, 0.0, g}; }
    static BoundaryCondition dirichlet(double value) { return {Kind::Dirichlet, 0.0, 0.0, value}; }
};

/// Two-level state (u at t-dt and at t) of a second-order wave subsystem.
struct WaveField {
    GridFunction previous;
    GridFunction current;

    const Grid& grid() const { return current.grid; }
    double dt() const { return current.grid.dx; }
    GridFunction velocity() const;
};

/// Two-level state of a transport subsystem T_t = -T_x with inflow at x=0.
struct TransportField {
    GridFunction previous;
    GridFunction current;

    const Grid& grid() const { return current.grid; }
};

/// Taylor start: previous = w0, current = w0 + dt*w1 + dt^2/2 * w0'' with
/// one-sided second differences at the endpoints. Throws Error(Cfl) if dt != dx.
WaveField wave_start(const GridFunction& w0, const GridFunction& w1, double dt);

/// Same start taken backwards in time: current = w0, previous is the level at -dt.
WaveField wave_start_backward(const GridFunction& w0, const GridFunction& w1, double dt);

/// Leapfrog interior update at CFL=1, next_j = cur_{j+1} + cur_{j-1} - prev_j,
/// plus dt^2 * forcing_j when a forcing field is given. Endpoint entries of the
/// result are left untouched (zero) for the caller to close.
GridFunction wave_interior(const WaveField& f, const GridFunction* forcing = nullptr);

/// Endpoint value of the next level for a flux or Dirichlet condition.
double close_left(const WaveField& f, const BoundaryCondition& bc);
double close_right(const WaveField& f, const BoundaryCondition& bc);

/// Flux u_x realized by the closure once the endpoint value `next_end` is known.
double realized_flux(const WaveField& f, const BoundaryCondition& bc, End end, double next_end);

/// Virtual-ghost trace of u_x at an endpoint, (next + prev - 2*neighbour)/(2dx)
/// on the right and its mirror on the left. Needs the next level.
double ghost_trace(const WaveField& f, const GridFunction& next, End end);

/// Moves the field forward by one level.
void advance(WaveField& f, GridFunction next);

/// Full leapfrog step with both endpoint conditions evaluated for this step.
/// Throws DivergenceError naming `subsystem` when a value becomes non-finite.
WaveField wave_step(const WaveField& f, const BoundaryCondition& left, const BoundaryCondition& right,
                    double t, double dt, const GridFunction* forcing = nullptr,
                    const std::string& subsystem = "wave");

/// Discrete energy of the scheme on the half level between previous and current,
/// including the Robin endpoint terms. It is exactly conserved by neutral
/// endpoints and non-increasing under dissipative ones.
double wave_energy(const WaveField& f, double left_robin = 0.0, double right_robin = 0.0);

/// Transport field whose previous level is traced back along characteristics.
TransportField transport_start(const GridFunction& t0);

/// Exact shift at CFL=1: next_j = cur_{j-1}, next_0 = inflow.
TransportField transport_step(const TransportField& f, double inflow);

/// T_x(1) consistent with the shift, (prev_n - cur_{n-1})/(2dx).
double transport_exit_slope(const TransportField& f);

/// Value at x=1 one level ahead, cur_{n-1}.
double transport_exit_next(const TransportField& f);

}  // namespace adrcwave
