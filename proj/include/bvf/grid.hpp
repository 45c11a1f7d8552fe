#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bvf/parallel.hpp"

namespace bvf {

/// Closed axis-aligned rectangle [a,b] x [c,d].
struct Rect {
    double a = 0.0; ///< lower x bound
    double b = 1.0; ///< upper x bound
    double c = 0.0; ///< lower y bound
    double d = 1.0; ///< upper y bound

    double width() const { return b - a; }
    double height() const { return d - c; }

    void validate() const {
        if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d)))
            throw std::invalid_argument("Rect: bounds must be finite");
        if (!(a < b) || !(c < d))
            throw std::invalid_argument("Rect: requires a < b and c < d");
    }

    /// Extra constraint for use as a fractional-integral domain.
    void validate_nonnegative() const {
        validate();
        if (a < 0.0 || c < 0.0)
            throw std::invalid_argument("Rect: fractional-integral domain requires 0 <= a and 0 <= c");
    }

    bool operator==(const Rect&) const = default;
};

/// Uniform samples of a real-valued function on a rectangle.
///
/// m and n are cell counts per axis; storage is row-major with
/// values[j*(m+1)+i] = f(x_i, y_j), x_i = a + i*(b-a)/m, y_j = c + j*(d-c)/n.
/// Values are immutable after construction and safe to share across threads.
class GridFunction {
public:
    GridFunction(Rect rect, int m, int n, std::vector<double> values)
        : rect_(rect), m_(m), n_(n), values_(std::move(values)) {
        rect_.validate();
        if (m_ < 1 || n_ < 1)
            throw std::invalid_argument("GridFunction: cell counts must be >= 1");
        const std::size_t expect =
            static_cast<std::size_t>(m_ + 1) * static_cast<std::size_t>(n_ + 1);
        if (values_.size() != expect)
            throw std::invalid_argument("GridFunction: expected " + std::to_string(expect) +
                                        " values, got " + std::to_string(values_.size()));
        for (std::size_t k = 0; k < values_.size(); ++k) {
            if (!std::isfinite(values_[k]))
                throw std::invalid_argument("GridFunction: values[" + std::to_string(k) +
                                            "] is not finite");
        }
    }

    const Rect& rect() const { return rect_; }
    int m() const { return m_; }
    int n() const { return n_; }

    double hx() const { return rect_.width() / m_; }
    double hy() const { return rect_.height() / n_; }

    double x(int i) const { return rect_.a + i * rect_.width() / m_; }
    double y(int j) const { return rect_.c + j * rect_.height() / n_; }

    double at(int i, int j) const {
        return values_[static_cast<std::size_t>(j) * (m_ + 1) + static_cast<std::size_t>(i)];
    }

    std::span<const double> values() const { return values_; }

    bool same_grid(const GridFunction& other) const {
        return rect_ == other.rect_ && m_ == other.m_ && n_ == other.n_;
    }

    /// Bilinear interpolation at an interior point (clamped to the rectangle).
    double bilinear(double px, double py) const {
        const double tx = std::clamp((px - rect_.a) / hx(), 0.0, static_cast<double>(m_));
        const double ty = std::clamp((py - rect_.c) / hy(), 0.0, static_cast<double>(n_));
        const int i = std::min(static_cast<int>(tx), m_ - 1);
        const int j = std::min(static_cast<int>(ty), n_ - 1);
        const double fx = tx - i, fy = ty - j;
        return at(i, j) * (1 - fx) * (1 - fy) + at(i + 1, j) * fx * (1 - fy) +
               at(i, j + 1) * (1 - fx) * fy + at(i + 1, j + 1) * fx * fy;
    }

private:
    Rect rect_;
    int m_, n_;
    std::vector<double> values_;
};

/// Samples a pointwise function on the uniform grid. Deterministic: two calls
/// with identical arguments produce identical arrays. An evaluation failure at
/// a node is reported with the node's coordinates.
inline GridFunction sample(const std::function<double(double, double)>& eval, Rect rect,
                           int m, int n) {
    rect.validate();
    if (m < 1 || n < 1) throw std::invalid_argument("sample: cell counts must be >= 1");
    std::vector<double> values(static_cast<std::size_t>(m + 1) * (n + 1));
    parallel_for(static_cast<std::size_t>(n) + 1, [&](std::size_t j) {
        const double py = rect.c + static_cast<double>(j) * rect.height() / n;
        for (int i = 0; i <= m; ++i) {
            const double px = rect.a + static_cast<double>(i) * rect.width() / m;
            double v;
            try {
                v = eval(px, py);
            } catch (const std::exception& e) {
                throw std::runtime_error("sample: evaluation failed at (x=" +
                                         std::to_string(px) + ", y=" + std::to_string(py) +
                                         "): " + e.what());
            }
            if (!std::isfinite(v))
                throw std::runtime_error("sample: non-finite value at (x=" + std::to_string(px) +
                                         ", y=" + std::to_string(py) + ")");
            values[j * (m + 1) + static_cast<std::size_t>(i)] = v;
        }
    });
    return GridFunction(rect, m, n, std::move(values));
}

/// Restriction of g to every sx-th column and sy-th row (sx | m, sy | n).
inline GridFunction subsample(const GridFunction& g, int sx, int sy) {
    if (sx < 1 || sy < 1 || g.m() % sx != 0 || g.n() % sy != 0)
        throw std::invalid_argument("subsample: steps must divide the cell counts");
    const int m = g.m() / sx, n = g.n() / sy;
    std::vector<double> values(static_cast<std::size_t>(m + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= m; ++i)
            values[static_cast<std::size_t>(j) * (m + 1) + i] = g.at(i * sx, j * sy);
    return GridFunction(g.rect(), m, n, std::move(values));
}

} // namespace bvf
