#include "adrcwave/pde.hpp"

#include <cmath>
#include <string>

#include "adrcwave/error.hpp"

namespace adrcwave {

namespace {

void require_cfl(const Grid& g, double dt) {
    if (std::abs(dt - g.dx) > 1e-12 * g.dx) {
        throw Error(ErrorKind::Cfl, "time step dt=" + std::to_string(dt) +
                                        " must equal dx=" + std::to_string(g.dx) + " (CFL ratio 1)");
    }
}

GridFunction taylor_level(const GridFunction& w0, const GridFunction& w1, double dt) {
    const std::size_t m = w0.size();
    GridFunction out(w0.grid);
    for (std::size_t j = 1; j + 1 < m; ++j) {
        const double lap = w0[j + 1] - 2.0 * w0[j] + w0[j - 1];
        out[j] = w0[j] + dt * w1[j] + 0.5 * lap;
    }
    const double lap_l = 2.0 * w0[0] - 5.0 * w0[1] + 4.0 * w0[2] - w0[3];
    const double lap_r = 2.0 * w0[m - 1] - 5.0 * w0[m - 2] + 4.0 * w0[m - 3] - w0[m - 4];
    out[0] = w0[0] + dt * w1[0] + 0.5 * lap_l;
    out[m - 1] = w0[m - 1] + dt * w1[m - 1] + 0.5 * lap_r;
    return out;
}

}  // namespace

GridFunction WaveField::velocity() const {
    GridFunction v = current - previous;
    v *= 1.0 / dt();
    return v;
}

WaveField wave_start(const GridFunction& w0, const GridFunction& w1, double dt) {
    require_cfl(w0.grid, dt);
    return WaveField{w0, taylor_level(w0, w1, dt)};
}

WaveField wave_start_backward(const GridFunction& w0, const GridFunction& w1, double dt) {
    require_cfl(w0.grid, dt);
    return WaveField{taylor_level(w0, -1.0 * w1, dt), w0};
}

GridFunction wave_interior(const WaveField& f, const GridFunction* forcing) {
    const GridFunction& cur = f.current;
    const GridFunction& prev = f.previous;
    const std::size_t m = cur.size();
    GridFunction next(cur.grid);
    for (std::size_t j = 1; j + 1 < m; ++j) next[j] = cur[j + 1] + cur[j - 1] - prev[j];
    if (forcing != nullptr) {
        const double dt2 = f.dt() * f.dt();
        for (std::size_t j = 1; j + 1 < m; ++j) next[j] += dt2 * (*forcing)[j];
    }
    return next;
}

double close_left(const WaveField& f, const BoundaryCondition& bc) {
    if (bc.kind == BoundaryCondition::Kind::Dirichlet) return bc.g;
    const double dx = f.grid().dx;
    const double prev0 = f.previous[0];
    return (2.0 * f.current[1] - 2.0 * dx * bc.g - (1.0 + bc.a * dx - bc.b) * prev0) /
           (1.0 + bc.b + bc.a * dx);
}

double close_right(const WaveField& f, const BoundaryCondition& bc) {
    if (bc.kind == BoundaryCondition::Kind::Dirichlet) return bc.g;
    const std::size_t n = f.current.size() - 1;
    const double dx = f.grid().dx;
    const double prevn = f.previous[n];
    return (2.0 * f.current[n - 1] + 2.0 * dx * bc.g - (1.0 + bc.b - bc.a * dx) * prevn) /
           (1.0 - bc.b - bc.a * dx);
}

double realized_flux(const WaveField& f, const BoundaryCondition& bc, End end, double next_end) {
    const std::size_t j = end == End::Left ? 0 : f.current.size() - 1;
    const double prev = f.previous[j];
    const double dt = f.dt();
    return bc.a * 0.5 * (next_end + prev) + bc.b * (next_end - prev) / (2.0 * dt) + bc.g;
}

double ghost_trace(const WaveField& f, const GridFunction& next, End end) {
    const double dx = f.grid().dx;
    if (end == End::Left) return (2.0 * f.current[1] - next[0] - f.previous[0]) / (2.0 * dx);
    const std::size_t n = next.size() - 1;
    return (next[n] + f.previous[n] - 2.0 * f.current[n - 1]) / (2.0 * dx);
}

void advance(WaveField& f, GridFunction next) {
    f.previous = std::move(f.current);
    f.current = std::move(next);
}

WaveField wave_step(const WaveField& f, const BoundaryCondition& left, const BoundaryCondition& right,
                    double t, double dt, const GridFunction* forcing, const std::string& subsystem) {
    require_cfl(f.grid(), dt);
    GridFunction next = wave_interior(f, forcing);
    next[0] = close_left(f, left);
    next[next.size() - 1] = close_right(f, right);
    if (!next.all_finite()) throw DivergenceError(subsystem, t + dt);
    return WaveField{f.current, std::move(next)};
}

double wave_energy(const WaveField& f, double left_robin, double right_robin) {
    const GridFunction& cur = f.current;
    const GridFunction& prev = f.previous;
    const std::size_t m = cur.size();
    const double dx = f.grid().dx;
    const double dt = f.dt();
    double kinetic = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double v = (cur[j] - prev[j]) / dt;
        const double w = (j == 0 || j + 1 == m) ? 0.5 : 1.0;
        kinetic += w * v * v;
    }
    double strain = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        strain += (cur[j + 1] - cur[j]) * (prev[j + 1] - prev[j]);
    }
    const double robin = 0.5 * left_robin * (cur[0] * cur[0] + prev[0] * prev[0]) -
                         0.5 * right_robin * (cur[m - 1] * cur[m - 1] + prev[m - 1] * prev[m - 1]);
    return kinetic * dx + strain / dx + robin;
}

TransportField transport_start(const GridFunction& t0) {
    const std::size_t m = t0.size();
    GridFunction prev(t0.grid);
    for (std::size_t j = 0; j + 1 < m; ++j) prev[j] = t0[j + 1];
    prev[m - 1] = 2.0 * t0[m - 1] - t0[m - 2];
    return TransportField{std::move(prev), t0};
}

TransportField transport_step(const TransportField& f, double inflow) {
    const std::size_t m = f.current.size();
    GridFunction next(f.current.grid);
    for (std::size_t j = m - 1; j >= 1; --j) next[j] = f.current[j - 1];
    next[0] = inflow;
    return TransportField{f.current, std::move(next)};
}

double transport_exit_slope(const TransportField& f) {
    const std::size_t n = f.current.size() - 1;
    return (f.previous[n] - f.current[n - 1]) / (2.0 * f.current.grid.dx);
}

double transport_exit_next(const TransportField& f) {
    return f.current[f.current.size() - 2];
}

}  // namespace adrcwave
