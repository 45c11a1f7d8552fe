#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bvf/fit.hpp"
#include "bvf/grid.hpp"

namespace bvf {

// ---------------------------------------------------------------------------
// delta-cells aligned with the sampling grid
// ---------------------------------------------------------------------------

/// A delta-net over the rectangle whose cell corners lie on sampling nodes.
/// Cell counts satisfy (b-a)/delta <= m_cells <= 1 + (b-a)/delta (and the
/// same in y); the last cell of an axis may be clipped by the rectangle.
struct DeltaGrid {
    double delta = 0.0;
    int m_cells = 0, n_cells = 0;  ///< delta-cells per axis
    int step_x = 0, step_y = 0;    ///< sampling nodes per delta-cell side
};

inline DeltaGrid delta_grid(const GridFunction& g, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta_grid: delta must be positive");
    if (delta >= std::min(g.rect().width(), g.rect().height()))
        throw std::invalid_argument("delta_grid: delta must be below min(b-a, d-c)");
    auto steps = [&](double h, const char* axis) {
        const double ratio = delta / h;
        const int s = static_cast<int>(std::llround(ratio));
        if (s < 1 || std::abs(ratio - s) > 1e-9 * std::max(1.0, ratio))
            throw std::invalid_argument(std::string("delta_grid: delta is not aligned with the ") +
                                        axis + "-axis sample spacing");
        return s;
    };
    DeltaGrid dg;
    dg.delta = delta;
    dg.step_x = steps(g.hx(), "x");
    dg.step_y = steps(g.hy(), "y");
    dg.m_cells = (g.m() + dg.step_x - 1) / dg.step_x;
    dg.n_cells = (g.n() + dg.step_y - 1) / dg.step_y;
    return dg;
}

/// Maximum range of f over one closed delta-cell: max - min of the samples it
/// contains (boundary samples shared with the neighbouring cells).
struct RangeValue {
    int i = 0, j = 0;
    double range = 0.0;
};

inline RangeValue max_range(const GridFunction& g, const DeltaGrid& dg, int ci, int cj) {
    if (ci < 0 || ci >= dg.m_cells || cj < 0 || cj >= dg.n_cells)
        throw std::out_of_range("max_range: cell (" + std::to_string(ci) + "," +
                                std::to_string(cj) + ") outside the delta-net");
    const int i0 = ci * dg.step_x, i1 = std::min((ci + 1) * dg.step_x, g.m());
    const int j0 = cj * dg.step_y, j1 = std::min((cj + 1) * dg.step_y, g.n());
    double lo = g.at(i0, j0), hi = lo;
    for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
            const double v = g.at(i, j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    return RangeValue{ci, cj, hi - lo};
}

// ---------------------------------------------------------------------------
// delta-cube counts
// ---------------------------------------------------------------------------

/// Per-delta record of the cube-count bracket and the direct count.
///
/// N_lower = (1/delta) * sum of cell ranges and N_upper = 2*m*n + N_lower
/// bracket the number of delta-cubes meeting the graph; N_direct counts
/// 1 + ceil(range/delta) cubes per cell column, which always lies inside the
/// bracket and is independent of vertical alignment.
struct BoxCountRecord {
    double delta = 0.0;
    int m_cells = 0, n_cells = 0;
    double n_lower = 0.0;
    double n_upper = 0.0;
    double n_direct = 0.0;
};

namespace detail {

// ceil that forgives values a hair above an integer (range/delta is often an
// exact ratio disturbed only in the last bits).
inline double ceil_snapped(double x) {
    const double fl = std::floor(x);
    return (x - fl <= 1e-9) ? fl : fl + 1.0;
}

} // namespace detail

inline BoxCountRecord box_count(const GridFunction& g, double delta) {
    const DeltaGrid dg = delta_grid(g, delta);
    double range_sum = 0.0;
    double direct = 0.0;
    for (int cj = 0; cj < dg.n_cells; ++cj) {
        for (int ci = 0; ci < dg.m_cells; ++ci) {
            const double r = max_range(g, dg, ci, cj).range;
            range_sum += r;
            direct += 1.0 + detail::ceil_snapped(r / delta);
        }
    }
    BoxCountRecord rec;
    rec.delta = delta;
    rec.m_cells = dg.m_cells;
    rec.n_cells = dg.n_cells;
    rec.n_lower = range_sum / delta;
    rec.n_upper = 2.0 * dg.m_cells * dg.n_cells + rec.n_lower;
    rec.n_direct = direct;
    if (rec.n_direct < rec.n_lower - 1e-9 || rec.n_direct > rec.n_upper + 1e-9)
        throw std::logic_error("box_count: direct count escaped the bracket");
    return rec;
}

// ---------------------------------------------------------------------------
// Dimension estimate
// ---------------------------------------------------------------------------

/// Least-squares slope of log N_direct against log(1/delta), with the records
/// retained for audit. Estimates with r2 below 0.98 are flagged low
/// confidence.
struct DimensionEstimate {
    std::vector<BoxCountRecord> records;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
    bool low_confidence = false;
};

namespace detail {

inline DimensionEstimate fit_records(std::vector<BoxCountRecord> records) {
    std::vector<double> xs, ys;
    xs.reserve(records.size());
    for (const auto& rec : records) {
        xs.push_back(std::log(1.0 / rec.delta));
        ys.push_back(std::log(rec.n_direct));
    }
    const LinearFit fit = least_squares(xs, ys);
    DimensionEstimate est;
    est.records = std::move(records);
    est.slope = fit.slope;
    est.intercept = fit.intercept;
    est.r2 = fit.r2;
    est.low_confidence = fit.r2 < 0.98;
    return est;
}

} // namespace detail

/// Dimension estimate over an explicit schedule of per-axis x-cell counts
/// (delta = (b-a)/cells for each entry). Exists for alignment cases a dyadic
/// schedule cannot reach, e.g. lambda = 3 Weierstrass grids.
inline DimensionEstimate dimension_estimate_schedule(const GridFunction& g,
                                                     const std::vector<int>& cell_counts) {
    if (cell_counts.size() < 3)
        throw std::invalid_argument("dimension_estimate_schedule: need at least 3 levels");
    std::vector<BoxCountRecord> records;
    records.reserve(cell_counts.size());
    for (int cells : cell_counts) {
        if (cells < 1)
            throw std::invalid_argument("dimension_estimate_schedule: cell counts must be >= 1");
        records.push_back(box_count(g, g.rect().width() / cells));
    }
    return detail::fit_records(std::move(records));
}

/// Dimension estimate over dyadic levels k_min..k_max with
/// delta_k = (b-a)/2^k anchored to the x extent. Every delta_k must align
/// with the sampling grid, which requires resolution >= 2^k_max.
inline DimensionEstimate dimension_estimate(const GridFunction& g, int k_min, int k_max) {
    if (k_min < 0 || k_max - k_min < 2)
        throw std::invalid_argument("dimension_estimate: need k_max - k_min >= 2 dyadic levels");
    if ((1 << k_max) > g.m())
        throw std::invalid_argument("dimension_estimate: grid resolution " + std::to_string(g.m()) +
                                    " is too coarse for level " + std::to_string(k_max));
    std::vector<int> cells;
    for (int k = k_min; k <= k_max; ++k) cells.push_back(1 << k);
    return dimension_estimate_schedule(g, cells);
}

/// Degenerate one-axis case of the estimator: counts delta-columns against a
/// sampled univariate graph. Used for the cylinder +1 law.
inline DimensionEstimate dimension_estimate_1d(const std::vector<double>& samples, double a,
                                               double b, int k_min, int k_max) {
    if (samples.size() < 2 || !(a < b))
        throw std::invalid_argument("dimension_estimate_1d: need samples on a proper interval");
    const int m = static_cast<int>(samples.size()) - 1;
    if (k_min < 0 || k_max - k_min < 2)
        throw std::invalid_argument("dimension_estimate_1d: need k_max - k_min >= 2 levels");
    if ((1 << k_max) > m)
        throw std::invalid_argument("dimension_estimate_1d: resolution too coarse");
    std::vector<BoxCountRecord> records;
    for (int k = k_min; k <= k_max; ++k) {
        const int cells = 1 << k;
        if (m % cells != 0)
            throw std::invalid_argument("dimension_estimate_1d: level " + std::to_string(k) +
                                        " does not align with the samples");
        const int step = m / cells;
        const double delta = (b - a) / cells;
        double direct = 0.0, range_sum = 0.0;
        for (int ci = 0; ci < cells; ++ci) {
            double lo = samples[static_cast<std::size_t>(ci) * step], hi = lo;
            for (int i = ci * step; i <= (ci + 1) * step; ++i) {
                lo = std::min(lo, samples[static_cast<std::size_t>(i)]);
                hi = std::max(hi, samples[static_cast<std::size_t>(i)]);
            }
            range_sum += hi - lo;
            direct += 1.0 + detail::ceil_snapped((hi - lo) / delta);
        }
        BoxCountRecord rec;
        rec.delta = delta;
        rec.m_cells = cells;
        rec.n_cells = 1;
        rec.n_lower = range_sum / delta;
        rec.n_upper = 2.0 * cells + rec.n_lower;
        rec.n_direct = direct;
        records.push_back(rec);
    }
    return detail::fit_records(std::move(records));
}

// ---------------------------------------------------------------------------
// Hoelder exponent
// ---------------------------------------------------------------------------

/// Graph-dimension bracket implied by a Hoelder exponent s in [0, 1]: the
/// upper bound 3 - s, and the same value as a lower bound when the matching
/// reverse condition holds.
inline std::pair<double, double> holder_dim_bounds(double s) {
    if (!(s >= 0.0 && s <= 1.0))
        throw std::invalid_argument("holder_dim_bounds: s must lie in [0, 1]");
    return {3.0 - s, 3.0 - s};
}

struct HolderEstimate {
    double s_hat = 1.0;      ///< fitted exponent, clamped to [0, 1]
    double dim_upper = 2.0;  ///< 3 - s_hat
    bool degenerate = false; ///< all cell ranges were zero (s_hat = 1 by convention)
};

/// Fits the Hoelder exponent as the slope of log(mean cell range) against
/// log(delta) over dyadic levels. A flat input has no measurable exponent and
/// reports s_hat = 1 by convention.
inline HolderEstimate estimate_holder(const GridFunction& g, int k_min, int k_max) {
    if (k_max - k_min < 2)
        throw std::invalid_argument("estimate_holder: need at least 3 dyadic levels");
    std::vector<double> xs, ys;
    for (int k = k_min; k <= k_max; ++k) {
        const double delta = g.rect().width() / (1 << k);
        const DeltaGrid dg = delta_grid(g, delta);
        double sum = 0.0;
        for (int cj = 0; cj < dg.n_cells; ++cj)
            for (int ci = 0; ci < dg.m_cells; ++ci) sum += max_range(g, dg, ci, cj).range;
        const double mean = sum / (static_cast<double>(dg.m_cells) * dg.n_cells);
        if (mean > 0.0) {
            xs.push_back(std::log(delta));
            ys.push_back(std::log(mean));
        }
    }
    HolderEstimate est;
    if (xs.size() < 2) {
        est.s_hat = 1.0;
        est.degenerate = true;
    } else {
        est.s_hat = std::clamp(least_squares(xs, ys).slope, 0.0, 1.0);
    }
    est.dim_upper = 3.0 - est.s_hat;
    return est;
}

} // namespace bvf
