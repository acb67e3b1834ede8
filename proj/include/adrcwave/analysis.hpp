#pragma once

#include <span>
#include <utility>
#include <vector>

#include "adrcwave/pde.hpp"

namespace adrcwave {

/// Least-squares fit of log(value) = intercept - rate * t over a window.
struct DecayFit {
    double t_start = 0.0;
    double t_end = 0.0;
    double rate = 0.0;       ///< mu^, the negated slope
    double intercept = 0.0;  ///< log M^
    double residual = 0.0;   ///< rms of the fit on log-values
    int samples = 0;

    double slope() const { return -rate; }
};

/// Fits samples with t in [t_start, t_end]. Values at or below `floor` are
/// excluded; remaining nonpositive values, or fewer than 10 samples, raise Error(Fit).
DecayFit fit_decay(std::span<const double> t, std::span<const double> value, double t_start, double t_end,
                   double floor = 0.0);

struct TailReport {
    double total = 0.0;
    double tail = 0.0;
    double tail_fraction = 0.0;
    double tau = 0.0;
    bool converging = true;
};

/// Trapezoid-in-time integral of value^2 and the share of it in the final tau.
/// Raises Error(Span) if the samples span less than 2*tau.
TailReport l2_tail(std::span<const double> t, std::span<const double> value, double tau,
                   double threshold = 0.05);

/// rho = 2 int (x-1) p_t p_x dx with p_t = (current - previous)/dt and p_x by derivative().
double rho_functional(const WaveField& p);

/// Trapezoid of p_t(0,s)^2 over [t-1, t] from per-step samples (s, p_t(0,s)).
/// Raises Error(History) if the samples do not cover the window.
double boundary_velocity_window(std::span<const double> s, std::span<const double> pt0, double t);

/// Integral over [t0,t1] of value^2 by the trapezoid rule on the samples inside.
double time_integral_sq(std::span<const double> t, std::span<const double> value, double t0, double t1);

}  // namespace adrcwave
