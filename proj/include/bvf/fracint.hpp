#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bvf/boxdim.hpp"
#include "bvf/grid.hpp"
#include "bvf/parallel.hpp"
#include "bvf/variation.hpp"

namespace bvf {

// ---------------------------------------------------------------------------
// Gamma
// ---------------------------------------------------------------------------

/// Gamma function for positive arguments via the Lanczos approximation
/// (g = 7, 9 coefficients), with the reflection formula below 0.5.
/// Relative accuracy is better than 1e-12 on [0.5, 50], the range the
/// fractional-integral kernels use.
inline double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("gamma_fn: argument must be positive");
    static constexpr double coef[9] = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
    const double z = x - 1.0;
    double a = coef[0];
    for (int i = 1; i < 9; ++i) a += coef[i] / (z + i);
    const double t = z + 7.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

// ---------------------------------------------------------------------------
// Mixed Riemann-Liouville fractional integral
// ---------------------------------------------------------------------------

/// Orders of the integral kernel (x-s)^(alpha-1) (y-t)^(beta-1).
struct FracParams {
    double alpha = 1.0;
    double beta = 1.0;

    void validate() const {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw std::invalid_argument("FracParams: alpha and beta must be strictly positive");
    }
};

/// Product quadrature used by frac_integral: each source cell is subdivided
/// `refinement` times per axis, the kernel factor is integrated exactly over
/// every sub-cell, and the integrand is taken at sub-cell midpoints via
/// bilinear interpolation of the grid.
struct QuadratureScheme {
    int refinement = 1;

    void validate() const {
        if (refinement < 1) throw std::invalid_argument("QuadratureScheme: refinement must be >= 1");
    }
};

namespace detail {

// Kernel-segment weights on a uniform axis: weight(j) integrates
// (x - s)^(order-1) exactly over the j-th sub-cell counted from the target
// node inward, i.e. weight[j] = ((j+1)h)^order - (j h)^order) / order.
inline std::vector<double> kernel_weights(int segments, double h, double order) {
    std::vector<double> t(segments + 1);
    for (int j = 0; j <= segments; ++j) t[j] = std::pow(j * h, order);
    std::vector<double> w(segments);
    for (int j = 0; j < segments; ++j) w[j] = (t[j + 1] - t[j]) / order;
    return w;
}

} // namespace detail

/// Mixed Riemann-Liouville fractional integral of a grid function,
///   I(x,y) = 1/(Gamma(alpha) Gamma(beta)) * int_a^x int_c^y
///            (x-s)^(alpha-1) (y-t)^(beta-1) f(s,t) ds dt,
/// sampled on the same nodes as the input. The kernel is integrated exactly
/// per source sub-cell (no special-casing of the weak singularity at s = x),
/// f is taken at sub-cell midpoints by bilinear interpolation, and the
/// quadrature is exact for constant integrands. Nodes on x = a or y = c have
/// an empty integration region and are 0.
inline GridFunction frac_integral(const GridFunction& g, const FracParams& p,
                                  const QuadratureScheme& q = {}) {
    p.validate();
    q.validate();
    g.rect().validate_nonnegative();
    const int m = g.m(), n = g.n(), r = q.refinement;
    const int mr = m * r, nr = n * r;
    const double hxr = g.hx() / r, hyr = g.hy() / r;

    const std::vector<double> wx = detail::kernel_weights(mr, hxr, p.alpha);
    const std::vector<double> wy = detail::kernel_weights(nr, hyr, p.beta);

    // Integrand at refined-cell midpoints, row-major (nr rows of mr).
    std::vector<double> mid(static_cast<std::size_t>(nr) * mr);
    for (int l = 0; l < nr; ++l) {
        const int jy = l / r;
        const double fy = ((l % r) + 0.5) / r;
        for (int k = 0; k < mr; ++k) {
            const int ix = k / r;
            const double fx = ((k % r) + 0.5) / r;
            mid[static_cast<std::size_t>(l) * mr + k] =
                g.at(ix, jy) * (1 - fx) * (1 - fy) + g.at(ix + 1, jy) * fx * (1 - fy) +
                g.at(ix, jy + 1) * (1 - fx) * fy + g.at(ix + 1, jy + 1) * fx * fy;
        }
    }

    const double norm = 1.0 / (gamma_fn(p.alpha) * gamma_fn(p.beta));
    std::vector<double> out(static_cast<std::size_t>(m + 1) * (n + 1), 0.0);
    // Rows are independent targets; threads write disjoint slices.
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
        const int jq = static_cast<int>(row) + 1;
        // Column sums against the y-weights anchored at y_jq.
        std::vector<double> col(mr, 0.0);
        for (int l = 0; l < nr && l < jq * r; ++l) {
            const double w = wy[jq * r - 1 - l];
            const double* mrow = &mid[static_cast<std::size_t>(l) * mr];
            for (int k = 0; k < mr; ++k) col[k] += w * mrow[k];
        }
        double* orow = &out[static_cast<std::size_t>(jq) * (m + 1)];
        for (int pq = 1; pq <= m; ++pq) {
            double acc = 0.0;
            for (int k = 0; k < pq * r; ++k) acc += wx[pq * r - 1 - k] * col[k];
            orow[pq] = norm * acc;
        }
    });
    return GridFunction(g.rect(), m, n, std::move(out));
}

/// Univariate Riemann-Liouville integral with the same kernel-exact weights
/// and midpoint sampling, used by the separable-reduction check.
inline std::vector<double> frac_integral_1d(const std::vector<double>& samples, double a,
                                            double b, double alpha, int refinement = 1) {
    if (samples.size() < 2 || !(a < b))
        throw std::invalid_argument("frac_integral_1d: need samples on a proper interval");
    if (!(alpha > 0.0)) throw std::invalid_argument("frac_integral_1d: alpha must be positive");
    if (a < 0.0) throw std::invalid_argument("frac_integral_1d: domain requires 0 <= a");
    const int m = static_cast<int>(samples.size()) - 1;
    const int r = refinement, mr = m * r;
    const double hr = (b - a) / mr;
    const std::vector<double> w = detail::kernel_weights(mr, hr, alpha);
    std::vector<double> mid(mr);
    for (int k = 0; k < mr; ++k) {
        const int ix = k / r;
        const double fx = ((k % r) + 0.5) / r;
        mid[k] = samples[ix] * (1 - fx) + samples[ix + 1] * fx;
    }
    const double norm = 1.0 / gamma_fn(alpha);
    std::vector<double> out(samples.size(), 0.0);
    for (int p = 1; p <= m; ++p) {
        double acc = 0.0;
        for (int k = 0; k < p * r; ++k) acc += w[p * r - 1 - k] * mid[k];
        out[static_cast<std::size_t>(p)] = norm * acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Theorem checks
// ---------------------------------------------------------------------------

/// Boundedness theorem: |I f| <= max|f| (b-a)^alpha (d-c)^beta /
/// (Gamma(alpha+1) Gamma(beta+1)).
struct SupBoundReport {
    double bound = 0.0;
    double sup_abs = 0.0;
    bool holds = false;
};

inline SupBoundReport sup_bound_check(const GridFunction& g, const FracParams& p,
                                      const QuadratureScheme& q = {}) {
    p.validate();
    double max_abs = 0.0;
    for (double v : g.values()) max_abs = std::max(max_abs, std::abs(v));
    SupBoundReport rep;
    rep.bound = max_abs * std::pow(g.rect().width(), p.alpha) *
                std::pow(g.rect().height(), p.beta) /
                (gamma_fn(p.alpha + 1.0) * gamma_fn(p.beta + 1.0));
    const GridFunction f = frac_integral(g, p, q);
    for (double v : f.values()) rep.sup_abs = std::max(rep.sup_abs, std::abs(v));
    rep.holds = rep.sup_abs <= rep.bound + 1e-9;
    return rep;
}

/// Separable reduction of the mixed integral with beta = 1: for f(x,y) = g(x),
/// I^(alpha,1) f (x,y) = (y - c) * I^alpha g (x). Both sides are computed
/// numerically on each resolution and compared on common nodes.
struct SeparableLevel {
    int resolution = 0;
    double max_discrepancy = 0.0;
};

struct SeparableReport {
    std::vector<SeparableLevel> levels;
    /// Shrink factor d_i / d_{i+1} per doubling. Discrepancies at or below
    /// `floor` cannot be measured against roundoff; such ratios report +inf
    /// (converged below the measurement floor).
    std::vector<double> shrink_ratios;
    double floor = 0.0;
};

inline SeparableReport separable_reduction_check(const std::vector<double>& samples1d, Rect rect,
                                                 double alpha,
                                                 const std::vector<int>& resolutions,
                                                 int refinement = 1) {
    rect.validate_nonnegative();
    if (resolutions.size() < 2)
        throw std::invalid_argument("separable_reduction_check: need at least 2 resolutions");
    for (std::size_t i = 1; i < resolutions.size(); ++i)
        if (resolutions[i] != 2 * resolutions[i - 1])
            throw std::invalid_argument("separable_reduction_check: resolutions must double");
    const int finest = resolutions.back();
    if (static_cast<int>(samples1d.size()) != finest + 1)
        throw std::invalid_argument("separable_reduction_check: need " + std::to_string(finest + 1) +
                                    " samples for the finest resolution");

    SeparableReport rep;
    double scale = 0.0;
    for (int res : resolutions) {
        const int stride = finest / res;
        std::vector<double> gs(res + 1);
        for (int i = 0; i <= res; ++i) gs[static_cast<std::size_t>(i)] =
            samples1d[static_cast<std::size_t>(i) * stride];
        std::vector<double> values(static_cast<std::size_t>(res + 1) * (res + 1));
        for (int j = 0; j <= res; ++j)
            for (int i = 0; i <= res; ++i)
                values[static_cast<std::size_t>(j) * (res + 1) + i] = gs[static_cast<std::size_t>(i)];
        const GridFunction f(rect, res, res, std::move(values));
        const GridFunction lhs = frac_integral(f, FracParams{alpha, 1.0}, QuadratureScheme{refinement});
        const std::vector<double> g1 = frac_integral_1d(gs, rect.a, rect.b, alpha, refinement);
        double disc = 0.0;
        for (int j = 0; j <= res; ++j) {
            const double yfac = f.y(j) - rect.c;
            for (int i = 0; i <= res; ++i) {
                const double rhs = yfac * g1[static_cast<std::size_t>(i)];
                scale = std::max(scale, std::abs(rhs));
                disc = std::max(disc, std::abs(lhs.at(i, j) - rhs));
            }
        }
        rep.levels.push_back({res, disc});
    }
    rep.floor = 1e-12 * std::max(1.0, scale);
    for (std::size_t i = 0; i + 1 < rep.levels.size(); ++i) {
        const double d0 = rep.levels[i].max_discrepancy;
        const double d1 = rep.levels[i + 1].max_discrepancy;
        rep.shrink_ratios.push_back(d1 <= rep.floor ? std::numeric_limits<double>::infinity()
                                                    : d0 / d1);
    }
    return rep;
}

/// Monotone-image theorem check: for coordinate-monotone g with g(a,c) >= 0,
/// the fractional integral is again coordinate-monotone.
struct MonotoneImageReport {
    bool ok = false;
    double min_d10 = 0.0;
    double min_d01 = 0.0;
    std::string message; ///< first violation, empty when ok
};

inline MonotoneImageReport monotone_image_check(const GridFunction& g, const FracParams& p,
                                                double tol = 1e-10,
                                                const QuadratureScheme& q = {}) {
    constexpr double pre_eps = 1e-12;
    for (int j = 0; j <= g.n(); ++j)
        for (int i = 1; i <= g.m(); ++i)
            if (g.at(i, j) - g.at(i - 1, j) < -pre_eps)
                throw std::invalid_argument("monotone_image_check: input is not monotone in x");
    for (int j = 1; j <= g.n(); ++j)
        for (int i = 0; i <= g.m(); ++i)
            if (g.at(i, j) - g.at(i, j - 1) < -pre_eps)
                throw std::invalid_argument("monotone_image_check: input is not monotone in y");
    if (g.at(0, 0) < 0.0)
        throw std::invalid_argument("monotone_image_check: requires g(a,c) >= 0 (theorem case (i))");

    const GridFunction f = frac_integral(g, p, q);
    MonotoneImageReport rep;
    rep.min_d10 = rep.min_d01 = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= f.n(); ++j)
        for (int i = 1; i <= f.m(); ++i) {
            const double d = f.at(i, j) - f.at(i - 1, j);
            if (d < rep.min_d10) rep.min_d10 = d;
            if (d < -tol && rep.message.empty())
                rep.message = "image decreases in x at node (" + std::to_string(i) + "," +
                              std::to_string(j) + ")";
        }
    for (int j = 1; j <= f.n(); ++j)
        for (int i = 0; i <= f.m(); ++i) {
            const double d = f.at(i, j) - f.at(i, j - 1);
            if (d < rep.min_d01) rep.min_d01 = d;
            if (d < -tol && rep.message.empty())
                rep.message = "image decreases in y at node (" + std::to_string(i) + "," +
                              std::to_string(j) + ")";
        }
    rep.ok = rep.message.empty();
    return rep;
}

/// BV-preservation check: decomposes g into monotone parts, verifies both
/// fractional-integral images stay monotone, tracks the Arzela variation of
/// I g across a resolution schedule, and estimates the dimension of the image
/// graph at the finest level.
struct BvPreservationReport {
    VerifyReport decomposition;
    MonotoneImageReport f1_image;
    MonotoneImageReport f2_image;
    std::vector<std::pair<int, double>> arzela_values; ///< (resolution, value)
    double max_rel_change = 0.0;
    bool arzela_stable = false;
    DimensionEstimate image_dimension;
    bool ok = false;
};

inline BvPreservationReport bv_preservation_check(const GridFunction& g, const FracParams& p,
                                                  const std::vector<int>& resolutions,
                                                  double stability_tol = 0.05,
                                                  double monotone_tol = 1e-10, int k_min = 3,
                                                  int k_max = 8,
                                                  const QuadratureScheme& q = {}) {
    if (resolutions.empty())
        throw std::invalid_argument("bv_preservation_check: need at least one resolution");
    for (int r : resolutions)
        if (r < 1 || g.m() % r != 0 || g.n() % r != 0)
            throw std::invalid_argument(
                "bv_preservation_check: every resolution must divide the grid cell counts");

    BvPreservationReport rep;
    const BimonotoneDecomposition dec = bimonotone_decompose(g);
    rep.decomposition = verify_bimonotone(dec, g, 1e-12);
    rep.f1_image = monotone_image_check(dec.f1, p, monotone_tol, q);
    rep.f2_image = monotone_image_check(dec.f2, p, monotone_tol, q);

    for (int r : resolutions) {
        const GridFunction gr = (r == g.m() && r == g.n()) ? g : subsample(g, g.m() / r, g.n() / r);
        const GridFunction fr = frac_integral(gr, p, q);
        rep.arzela_values.emplace_back(r, arzela_variation(fr).value);
    }
    for (std::size_t i = 0; i + 1 < rep.arzela_values.size(); ++i) {
        const double v0 = rep.arzela_values[i].second;
        const double v1 = rep.arzela_values[i + 1].second;
        const double rel = std::abs(v1 - v0) / std::max(std::abs(v0), 1e-15);
        rep.max_rel_change = std::max(rep.max_rel_change, rel);
    }
    rep.arzela_stable = rep.max_rel_change <= stability_tol;

    const int finest = resolutions.back();
    const GridFunction gf =
        (finest == g.m() && finest == g.n()) ? g : subsample(g, g.m() / finest, g.n() / finest);
    rep.image_dimension = dimension_estimate(frac_integral(gf, p, q), k_min, k_max);
    rep.ok = rep.decomposition.ok && rep.f1_image.ok && rep.f2_image.ok && rep.arzela_stable;
    return rep;
}

} // namespace bvf
