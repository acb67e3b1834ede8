#include "adrcwave/analysis.hpp"

#include <cmath>
#include <string>

#include "adrcwave/error.hpp"

namespace adrcwave {

DecayFit fit_decay(std::span<const double> t, std::span<const double> value, double t_start, double t_end,
                   double floor) {
    if (!(t_start < t_end)) throw Error(ErrorKind::Fit, "decay-fit window must satisfy t_start < t_end");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_start || t[i] > t_end) continue;
        if (floor > 0.0 && value[i] <= floor) continue;
        if (!(value[i] > 0.0)) {
            throw Error(ErrorKind::Fit, "nonpositive value " + std::to_string(value[i]) + " at t=" +
                                            std::to_string(t[i]) + " inside the decay-fit window");
        }
        xs.push_back(t[i]);
        ys.push_back(std::log(value[i]));
    }
    if (xs.size() < 10) {
        throw Error(ErrorKind::Fit, "decay fit needs at least 10 samples in [" + std::to_string(t_start) +
                                        ", " + std::to_string(t_end) + "], got " +
                                        std::to_string(xs.size()));
    }
    const double m = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ss += r * r;
    }
    DecayFit fit;
    fit.t_start = t_start;
    fit.t_end = t_end;
    fit.rate = -slope;
    fit.intercept = intercept;
    fit.residual = std::sqrt(ss / m);
    fit.samples = static_cast<int>(xs.size());
    return fit;
}

double time_integral_sq(std::span<const double> t, std::span<const double> value, double t0, double t1) {
    double total = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t[i - 1] < t0 - 1e-12 || t[i] > t1 + 1e-12) continue;
        total += 0.5 * (t[i] - t[i - 1]) * (value[i] * value[i] + value[i - 1] * value[i - 1]);
    }
    return total;
}

TailReport l2_tail(std::span<const double> t, std::span<const double> value, double tau, double threshold) {
    if (t.size() < 2 || t.back() - t.front() < 2.0 * tau - 1e-12) {
        throw Error(ErrorKind::Span, "tail report needs samples spanning at least " +
                                         std::to_string(2.0 * tau) + " time units");
    }
    TailReport r;
    r.tau = tau;
    r.total = time_integral_sq(t, value, t.front(), t.back());
    r.tail = time_integral_sq(t, value, t.back() - tau, t.back());
    r.tail_fraction = r.total > 0.0 ? r.tail / r.total : 0.0;
    r.converging = r.tail_fraction <= threshold;
    return r;
}

double rho_functional(const WaveField& p) {
    const GridFunction px = derivative(p.current);
    const GridFunction pt = p.velocity();
    GridFunction integrand(p.grid());
    for (std::size_t j = 0; j < integrand.size(); ++j) {
        integrand[j] = 2.0 * (p.grid().x(j) - 1.0) * pt[j] * px[j];
    }
    return integrate(integrand);
}

double boundary_velocity_window(std::span<const double> s, std::span<const double> pt0, double t) {
    const double t0 = t - 1.0;
    if (s.empty() || s.front() > t0 + 1e-9 || s.back() < t - 1e-9) {
        throw Error(ErrorKind::History, "boundary velocity history does not cover [" + std::to_string(t0) +
                                            ", " + std::to_string(t) + "]");
    }
    return time_integral_sq(s, pt0, t0, t);
}

}  // namespace adrcwave
