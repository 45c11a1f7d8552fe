#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bvf/grid.hpp"
#include "bvf/senses.hpp"

namespace bvf {

/// Partial sum of the classical Weierstrass-type series
///   W(x) = sum_{k=0..K} lam^{(s-2)k} * sin(lam^k * x),
/// with s in (1,2) and lam > 1. The graph box dimension of the full series
/// tends to s, which makes the family a synthetic non-BV reference with an
/// analytically known target dimension.
inline double weierstrass_1d(double s, double lam, int terms_k, double x) {
    if (!(s > 1.0 && s < 2.0)) throw std::invalid_argument("weierstrass_1d: s must lie in (1,2)");
    if (!(lam > 1.0)) throw std::invalid_argument("weierstrass_1d: lam must exceed 1");
    if (terms_k < 0) throw std::invalid_argument("weierstrass_1d: K must be nonnegative");
    double acc = 0.0;
    double amp = 1.0;              // lam^{(s-2)k}
    double freq = 1.0;             // lam^k
    const double amp_step = std::pow(lam, s - 2.0);
    for (int k = 0; k <= terms_k; ++k) {
        acc += amp * std::sin(freq * x);
        amp *= amp_step;
        freq *= lam;
    }
    return acc;
}

/// Expected boundedness classification per sense (from the literature the
/// corpus entries are drawn from); `unknown` means the entry makes no claim.
enum class ExpectedBV { bounded, unbounded, unknown };

/// A named, pointwise-evaluable test function with optional parameters and
/// per-sense expected diagnoses.
struct CorpusEntry {
    std::string identifier;
    std::map<std::string, double> parameters;      // defaults; callers may override
    std::map<Sense, ExpectedBV> expected;
    std::string note;
};

namespace detail {

inline double param(const std::map<std::string, double>& params, const std::string& key,
                    double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

} // namespace detail

/// Evaluates a corpus function at a point. Known identifiers:
///   constant              f = value                     (param: value, default 1)
///   ones                  f = 1
///   plane                 f = x + y
///   xy                    f = x * y
///   plane_indicator       f = 1 on {x + y = 1}, else 0
///   step_below_diagonal   f = 0 for x < y, else 1
///   xsin_inv              f = x sin(1/x), f(0,.) = 0
///   weierstrass_cylinder  f = x + W(y)                  (params: s, lam, K)
///
/// plane_indicator tests x + y == 1 exactly in binary64; rational nodes of
/// dyadic grids land on the set exactly.
inline double corpus_eval(const std::string& id, const std::map<std::string, double>& params,
                          double x, double y) {
    if (id == "constant") return detail::param(params, "value", 1.0);
    if (id == "ones") return 1.0;
    if (id == "plane") return x + y;
    if (id == "xy") return x * y;
    if (id == "plane_indicator") return (x + y == 1.0) ? 1.0 : 0.0;
    if (id == "step_below_diagonal") return (x < y) ? 0.0 : 1.0;
    if (id == "xsin_inv") return (x == 0.0) ? 0.0 : x * std::sin(1.0 / x);
    if (id == "weierstrass_cylinder") {
        const double s = detail::param(params, "s", 1.5);
        const double lam = detail::param(params, "lam", 3.0);
        const int terms_k = static_cast<int>(detail::param(params, "K", 20.0));
        return x + weierstrass_1d(s, lam, terms_k, y);
    }
    throw std::invalid_argument(
        "corpus_eval: unknown identifier '" + id +
        "' (known: constant, ones, plane, xy, plane_indicator, step_below_diagonal, "
        "xsin_inv, weierstrass_cylinder)");
}

/// Pointwise evaluator bound to an identifier and parameter set.
inline std::function<double(double, double)> corpus_fn(const std::string& id,
                                                       std::map<std::string, double> params = {}) {
    corpus_eval(id, params, 0.5, 0.5); // validate identifier and parameters up front
    return [id, params](double x, double y) { return corpus_eval(id, params, x, y); };
}

/// The registry of corpus entries with their expected diagnoses.
///
/// The indicator of Q x Q (the rationals example) is deliberately absent:
/// every grid node is rational, so any finite sampling collapses it to the
/// constant 1. It has no faithful numeric surrogate and is kept as this note.
inline const std::vector<CorpusEntry>& corpus_entries() {
    static const std::vector<CorpusEntry> entries = [] {
        std::vector<CorpusEntry> v;
        auto all_bounded = [] {
            std::map<Sense, ExpectedBV> e;
            for (Sense s : all_senses) e[s] = ExpectedBV::bounded;
            return e;
        };
        v.push_back({"constant", {{"value", 1.0}}, all_bounded(), "smooth reference"});
        v.push_back({"plane", {}, all_bounded(), "Lipschitz reference"});
        v.push_back({"xy", {}, all_bounded(), "smooth monotone reference"});
        v.push_back({"plane_indicator",
                     {},
                     {{Sense::arzela, ExpectedBV::bounded}, {Sense::frechet, ExpectedBV::unbounded}},
                     "indicator of the anti-diagonal x + y = 1"});
        v.push_back({"step_below_diagonal",
                     {},
                     {{Sense::tonelli, ExpectedBV::bounded}, {Sense::hardy, ExpectedBV::unbounded}},
                     "unit step across the diagonal x = y"});
        v.push_back({"xsin_inv",
                     {},
                     {{Sense::vitali, ExpectedBV::bounded},
                      {Sense::hahn, ExpectedBV::unbounded},
                      {Sense::pierpont, ExpectedBV::unbounded}},
                     "x sin(1/x) cylinder; infinite univariate oscillation near x = 0"});
        v.push_back({"weierstrass_cylinder",
                     {{"s", 1.5}, {"lam", 3.0}, {"K", 20.0}},
                     {{Sense::vitali, ExpectedBV::bounded},
                      {Sense::hahn, ExpectedBV::unbounded},
                      {Sense::pierpont, ExpectedBV::unbounded}},
                     "x + W(y); target graph dimension 1 + s"});
        return v;
    }();
    return entries;
}

inline const CorpusEntry& corpus_entry(const std::string& id) {
    for (const auto& e : corpus_entries()) {
        if (e.identifier == id) return e;
    }
    throw std::invalid_argument("corpus_entry: unknown identifier '" + id + "'");
}

} // namespace bvf
