#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace bvf {

/// Ordinary least-squares line fit.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;          ///< coefficient of determination in [0, 1]
    std::size_t points = 0;
};

inline LinearFit least_squares(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("least_squares: size mismatch");
    if (xs.size() < 2) throw std::invalid_argument("least_squares: need at least 2 points");
    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) { sx += xs[i]; sy += ys[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("least_squares: degenerate abscissae");
    LinearFit fit;
    fit.points = xs.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double yhat = fit.intercept + fit.slope * xs[i];
        ss_res += (ys[i] - yhat) * (ys[i] - yhat);
        ss_tot += (ys[i] - my) * (ys[i] - my);
    }
    fit.r2 = (ss_tot > 0.0) ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    return fit;
}

} // namespace bvf
