#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace adrcwave {

/// Uniform grid on [0,1] with n cells and n+1 nodes x_j = j*dx.
struct Grid {
    int n = 0;
    double dx = 0.0;

    std::size_t size() const noexcept { return static_cast<std::size_t>(n) + 1; }
    double x(std::size_t j) const noexcept { return static_cast<double>(j) * dx; }

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Builds a grid; throws Error(Resolution) when n < 8.
Grid make_grid(int n);

/// A real function sampled at every node of a grid.
struct GridFunction {
    Grid grid;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
    GridFunction(const Grid& g, std::vector<double> v);

    static GridFunction sample(const Grid& g, const std::function<double(double)>& fn);

    std::size_t size() const noexcept { return values.size(); }
    double& operator[](std::size_t j) { return values[j]; }
    double operator[](std::size_t j) const { return values[j]; }
    double front() const { return values.front(); }
    double back() const { return values.back(); }

    bool all_finite() const noexcept;
    double max_abs() const noexcept;

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator*=(double s);
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double s, GridFunction a);

/// Displacement/velocity pair, an element of H^1 x L^2.
struct StatePair {
    GridFunction position;
    GridFunction velocity;
};

enum class End { Left, Right };

/// Centered differences inside, 3-point one-sided second-order stencils at the ends.
GridFunction derivative(const GridFunction& g);

/// Composite trapezoidal rule over [0,1].
double integrate(const GridFunction& g);

/// sqrt( int position'^2 + int velocity^2 + position(0)^2 ).
double h_norm(const StatePair& s);
double h_norm(const GridFunction& position, const GridFunction& velocity);

/// 3-point one-sided second-order estimate of g' at an endpoint.
double boundary_slope(const GridFunction& g, End end);

}  // namespace adrcwave
