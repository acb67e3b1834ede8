#include "adrcwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adrcwave/error.hpp"

namespace adrcwave {

Grid make_grid(int n) {
    if (n < 8) {
        throw Error(ErrorKind::Resolution,
                    "grid resolution n=" + std::to_string(n) + " is below the minimum of 8 cells");
    }
    return Grid{n, 1.0 / static_cast<double>(n)};
}

GridFunction::GridFunction(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) {
        throw Error(ErrorKind::Parameter, "grid function length " + std::to_string(values.size()) +
                                              " does not match " + std::to_string(grid.size()) +
                                              " nodes");
    }
}

GridFunction GridFunction::sample(const Grid& g, const std::function<double(double)>& fn) {
    GridFunction out(g);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = fn(g.x(j));
    return out;
}

bool GridFunction::all_finite() const noexcept {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double GridFunction::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    for (std::size_t j = 0; j < values.size(); ++j) values[j] += o.values[j];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
    for (std::size_t j = 0; j < values.size(); ++j) values[j] -= o.values[j];
    return *this;
}

GridFunction& GridFunction::operator*=(double s) {
    for (double& v : values) v *= s;
    return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double s, GridFunction a) { return a *= s; }

GridFunction derivative(const GridFunction& g) {
    const std::size_t m = g.size();
    const double dx = g.grid.dx;
    GridFunction d(g.grid);
    for (std::size_t j = 1; j + 1 < m; ++j) d[j] = (g[j + 1] - g[j - 1]) / (2.0 * dx);
    d[0] = boundary_slope(g, End::Left);
    d[m - 1] = boundary_slope(g, End::Right);
    return d;
}

double integrate(const GridFunction& g) {
    const std::size_t m = g.size();
    double s = 0.5 * (g[0] + g[m - 1]);
    for (std::size_t j = 1; j + 1 < m; ++j) s += g[j];
    return s * g.grid.dx;
}

double h_norm(const GridFunction& position, const GridFunction& velocity) {
    const GridFunction px = derivative(position);
    GridFunction px2(px.grid), v2(velocity.grid);
    for (std::size_t j = 0; j < px.size(); ++j) {
        px2[j] = px[j] * px[j];
        v2[j] = velocity[j] * velocity[j];
    }
    const double p0 = position[0];
    return std::sqrt(integrate(px2) + integrate(v2) + p0 * p0);
}

double h_norm(const StatePair& s) { return h_norm(s.position, s.velocity); }

double boundary_slope(const GridFunction& g, End end) {
    const std::size_t m = g.size();
    const double dx = g.grid.dx;
    if (end == End::Left) return (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * dx);
    return (3.0 * g[m - 1] - 4.0 * g[m - 2] + g[m - 3]) / (2.0 * dx);
}

}  // namespace adrcwave
