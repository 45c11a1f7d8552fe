// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bvf/bvf.hpp"
#include "bvf/cli.hpp"
#include "oracles.hpp"

using namespace bvf;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << idx << ": " << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!pass) ++failures;
}

void run_criterion(int idx, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [pass, detail] = body();
        report(idx, name, pass, detail);
    } catch (const std::exception& e) {
        report(idx, name, false, std::string("exception: ") + e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

GridFunction sample_unit(const std::function<double(double, double)>& f, int res) {
    return sample(f, {0, 1, 0, 1}, res, res);
}

/// Cylinder surface x + W(y) with the Weierstrass row evaluated once per node.
GridFunction cylinder_grid(int res, double s, double lam, int terms_k) {
    std::vector<double> w(res + 1);
    for (int j = 0; j <= res; ++j)
        w[static_cast<std::size_t>(j)] = weierstrass_1d(s, lam, terms_k, static_cast<double>(j) / res);
    std::vector<double> values(static_cast<std::size_t>(res + 1) * (res + 1));
    for (int j = 0; j <= res; ++j) {
        const double wy = w[static_cast<std::size_t>(j)];
        for (int i = 0; i <= res; ++i)
            values[static_cast<std::size_t>(j) * (res + 1) + i] = static_cast<double>(i) / res + wy;
    }
    return GridFunction({0, 1, 0, 1}, res, res, std::move(values));
}

GridFunction add_plane(const GridFunction& g, double p, double q) {
    std::vector<double> values(g.values().begin(), g.values().end());
    for (int j = 0; j <= g.n(); ++j)
        for (int i = 0; i <= g.m(); ++i)
            values[static_cast<std::size_t>(j) * (g.m() + 1) + i] += p * g.x(i) + q * g.y(j);
    return GridFunction(g.rect(), g.m(), g.n(), std::move(values));
}

} // namespace

int main() {
    std::cout << "acceptance suite, version " << version_string << "\n";

    run_criterion(1, "Arzela DP equals the monotone-sequence brute force", [] {
        const auto t0 = std::chrono::steady_clock::now();
        std::mt19937 rng(101);
        std::uniform_int_distribution<int> dim(1, 3);
        int mismatches = 0;
        for (int t = 0; t < 200; ++t) {
            const GridFunction g = oracle::random_grid(rng, dim(rng), dim(rng));
            if (arzela_variation(g).value != oracle::arzela_bruteforce(g)) ++mismatches;
        }
        const double secs = seconds_since(t0);
        return std::make_pair(mismatches == 0 && secs < 5.0,
                              "200 grids, mismatches=" + std::to_string(mismatches) + ", " +
                                  fmt(secs) + " s < 5 s");
    });

    run_criterion(2, "Vitali finest-grid sum equals the sub-net maximum", [] {
        std::mt19937 rng(102);
        int mismatches = 0;
        for (int t = 0; t < 100; ++t) {
            const GridFunction g = oracle::random_grid(rng, 4, 4);
            if (vitali_variation(g).value != oracle::vitali_subnet_max(g)) ++mismatches;
        }
        return std::make_pair(mismatches == 0,
                              "100 random 4x4 grids, mismatches=" + std::to_string(mismatches));
    });

    run_criterion(3, "Frechet enumeration exact; heuristic a high-quality lower bound", [] {
        std::mt19937 rng(103);
        int mismatches = 0, violations = 0;
        for (int t = 0; t < 50; ++t) {
            const GridFunction g = oracle::random_grid(rng, 3, 3);
            const double exact = frechet_variation(g, FrechetMode::exact).value;
            if (exact != oracle::frechet_double_enum(g)) ++mismatches;
            if (frechet_variation(g, FrechetMode::heuristic).value > exact) ++violations;
        }
        int equal = 0;
        for (int t = 0; t < 200; ++t) {
            const GridFunction g = oracle::random_grid(rng, 6, 6);
            const double exact = frechet_variation(g, FrechetMode::exact).value;
            const double heur = frechet_variation(g, FrechetMode::heuristic).value;
            if (heur > exact) ++violations;
            if (heur == exact) ++equal;
        }
        const double rate = equal / 2.0;
        return std::make_pair(mismatches == 0 && violations == 0 && rate >= 95.0,
                              "double-enum mismatches=" + std::to_string(mismatches) +
                                  ", heuristic violations=" + std::to_string(violations) +
                                  ", equality " + fmt(rate) + "% >= 95%");
    });

    run_criterion(4, "plane_indicator 3x3 triple: Vitali 6, Frechet 6, Arzela 2", [] {
        const GridFunction g = sample(corpus_fn("plane_indicator"), {0, 1, 0, 1}, 2, 2);
        const double v = vitali_variation(g).value;
        const double f = frechet_variation(g).value;
        const double a = arzela_variation(g).value;
        return std::make_pair(v == 6.0 && f == 6.0 && a == 2.0,
                              "vitali=" + fmt(v) + ", frechet=" + fmt(f) + ", arzela=" + fmt(a));
    });

    run_criterion(5, "BV corpus dimension slopes at resolution 1024, levels 3..8", [] {
        std::string detail;
        bool pass = true;
        for (const char* id : {"constant", "plane", "xy"}) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto est = dimension_estimate(sample(corpus_fn(id), {0, 1, 0, 1}, 1024, 1024), 3, 8);
            const double secs = seconds_since(t0);
            bool ok = est.slope >= 1.95 && est.slope <= 2.15 && secs < 10.0;
            if (std::string(id) == "constant") ok = ok && std::abs(est.slope - 2.0) <= 1e-12;
            pass = pass && ok;
            if (!detail.empty()) detail += ", ";
            detail += std::string(id) + "=" + fmt(est.slope) + " in [1.95,2.15] " + fmt(secs) + "s";
        }
        detail += "; constant within 1e-12 of 2";
        return std::make_pair(pass, detail);
    });

    run_criterion(6, "Hoelder surrogate: Weierstrass cylinder slope and exponent", [] {
        const GridFunction g = cylinder_grid(4096, 1.5, 3.0, 20);
        const auto est = dimension_estimate(g, 4, 9);
        const auto hold = estimate_holder(g, 4, 9);
        const bool pass = est.slope >= 2.3 && est.slope <= 2.7 && hold.s_hat >= 0.35 &&
                          hold.s_hat <= 0.65;
        return std::make_pair(pass, "slope=" + fmt(est.slope) + " in [2.3,2.7] (target 2.5), s_hat=" +
                                        fmt(hold.s_hat) + " in [0.35,0.65]");
    });

    run_criterion(7, "Lipschitz-addition invariance of the slope", [] {
        std::string detail;
        bool pass = true;
        const GridFunction xy = sample_unit(corpus_fn("xy"), 1024);
        const GridFunction cyl = cylinder_grid(1024, 1.5, 3.0, 20);
        for (const auto& [name, g] : {std::pair<const char*, const GridFunction&>{"xy", xy},
                                      {"cylinder", cyl}}) {
            const double base = dimension_estimate(g, 3, 8).slope;
            const double shifted = dimension_estimate(add_plane(g, 0.7, -0.3), 3, 8).slope;
            const double diff = std::abs(shifted - base);
            pass = pass && diff <= 0.05;
            if (!detail.empty()) detail += ", ";
            detail += std::string(name) + " |diff|=" + fmt(diff) + " <= 0.05";
        }
        return std::make_pair(pass, detail);
    });

    run_criterion(8, "diagnosis matrix matches the example classifications", [] {
        const Rect rect{0, 1, 0, 1};
        const std::vector<int> resolutions{8, 16, 32, 64, 128, 256};
        const std::vector<int> ks{2, 4, 8, 16, 32, 64};
        const auto xsin = corpus_fn("xsin_inv");
        const auto step = corpus_fn("step_below_diagonal");
        const auto plane_ind = corpus_fn("plane_indicator");

        const Verdict xsin_vitali = diagnose_refinement(xsin, rect, Sense::vitali, resolutions).verdict;
        const Verdict xsin_hahn = diagnose_refinement(xsin, rect, Sense::hahn, ks).verdict;
        const Verdict step_tonelli = diagnose_refinement(step, rect, Sense::tonelli, resolutions).verdict;
        const Verdict step_hardy = diagnose_refinement(step, rect, Sense::hardy, resolutions).verdict;
        const Verdict pi_arzela = diagnose_refinement(plane_ind, rect, Sense::arzela, resolutions).verdict;

        const bool pass = xsin_vitali == Verdict::bounded && xsin_hahn == Verdict::unbounded &&
                          step_tonelli == Verdict::bounded && step_hardy == Verdict::unbounded &&
                          pi_arzela == Verdict::bounded;
        std::ostringstream ss;
        ss << "xsin_inv vitali=" << to_string(xsin_vitali) << "/hahn=" << to_string(xsin_hahn)
           << ", step tonelli=" << to_string(step_tonelli) << "/hardy=" << to_string(step_hardy)
           << ", plane_indicator arzela=" << to_string(pi_arzela);
        return std::make_pair(pass, ss.str());
    });

    run_criterion(9, "fractional-integral exactness on constants at 128x128", [] {
        const GridFunction ones = sample_unit(corpus_fn("ones"), 128);
        bool pass = true;
        std::string detail;
        for (auto [al, be] : {std::pair{1.0, 1.0}, {0.5, 0.5}, {1.7, 0.9}}) {
            const GridFunction f = frac_integral(ones, {al, be});
            const double norm = 1.0 / (gamma_fn(al + 1.0) * gamma_fn(be + 1.0));
            double err = 0.0, err_xy = 0.0;
            for (int j = 0; j <= 128; ++j)
                for (int i = 0; i <= 128; ++i) {
                    const double want = norm * std::pow(f.x(i), al) * std::pow(f.y(j), be);
                    err = std::max(err, std::abs(f.at(i, j) - want));
                    if (al == 1.0 && be == 1.0)
                        err_xy = std::max(err_xy, std::abs(f.at(i, j) - f.x(i) * f.y(j)));
                }
            pass = pass && err <= 1e-10;
            if (al == 1.0 && be == 1.0) {
                pass = pass && err_xy <= 1e-12;
                detail += "(1,1) vs xy err=" + fmt(err_xy) + " <= 1e-12, ";
            }
            detail += "(" + fmt(al) + "," + fmt(be) + ") err=" + fmt(err) + "; ";
        }
        return std::make_pair(pass, detail + "tolerance 1e-10");
    });

    run_criterion(10, "boundedness theorem across the corpus, equality for constants", [] {
        bool pass = true;
        int checks = 0;
        for (const auto& entry : corpus_entries()) {
            const GridFunction g =
                sample(corpus_fn(entry.identifier, entry.parameters), {0, 1, 0, 1}, 64, 64);
            for (auto [al, be] : {std::pair{0.5, 0.5}, {1.0, 1.0}, {1.7, 0.9}}) {
                pass = pass && sup_bound_check(g, {al, be}).holds;
                ++checks;
            }
        }
        const auto eq = sup_bound_check(sample_unit(corpus_fn("ones"), 64), {1.0, 1.0});
        const double gap = std::abs(eq.sup_abs - eq.bound);
        pass = pass && gap <= 1e-9;
        return std::make_pair(pass, std::to_string(checks) + " checks hold; constant equality gap=" +
                                        fmt(gap) + " <= 1e-9");
    });

    run_criterion(11, "separable reduction for g(x) = x, alpha = 1, 64->128->256", [] {
        std::vector<double> xs(257);
        for (int i = 0; i <= 256; ++i) xs[static_cast<std::size_t>(i)] = i / 256.0;
        const auto rep = separable_reduction_check(xs, {0, 1, 0, 1}, 1.0, {64, 128, 256});
        bool pass = true;
        std::string detail = "discrepancies ";
        for (const auto& lv : rep.levels) detail += fmt(lv.max_discrepancy) + " ";
        for (double r : rep.shrink_ratios) pass = pass && r >= 1.7;
        const bool at_floor = rep.levels.back().max_discrepancy <= rep.floor;
        detail += at_floor ? "(below the roundoff floor " + fmt(rep.floor) +
                                 ": both quadrature routes coincide for this case, ratio reads "
                                 "converged)"
                           : "(ratios ";
        if (!at_floor) {
            for (double r : rep.shrink_ratios) detail += fmt(r) + " ";
            detail += ">= 1.7)";
        }
        return std::make_pair(pass, detail);
    });

    run_criterion(12, "BV preservation under the fractional integral", [] {
        bool pass = true;
        std::string detail;
        for (const char* id : {"xy", "plane", "constant"}) {
            const GridFunction g = sample_unit(corpus_fn(id), 256);
            const auto rep = bv_preservation_check(g, {0.5, 0.5}, {64, 128, 256}, 0.05, 1e-10, 3, 8);
            const bool ok = rep.decomposition.ok && rep.f1_image.ok && rep.f2_image.ok &&
                            rep.arzela_stable && rep.image_dimension.slope >= 1.95 &&
                            rep.image_dimension.slope <= 2.15;
            pass = pass && ok;
            if (!detail.empty()) detail += ", ";
            detail += std::string(id) + " slope=" + fmt(rep.image_dimension.slope) +
                      " drift=" + fmt(rep.max_rel_change);
        }
        return std::make_pair(pass, detail + "; decomposition 1e-12, monotone 1e-10, drift <= 5%, "
                                             "slope in [1.95,2.15]");
    });

    run_criterion(13, "CLI determinism on the criterion-5 configs", [] {
        namespace fs = std::filesystem;
        bool pass = true;
        for (const char* id : {"constant", "plane", "xy"}) {
            std::vector<std::string> payloads;
            for (int round = 0; round < 2; ++round) {
                const fs::path out = fs::temp_directory_path() /
                                     ("bvf_accept_" + std::string(id) + std::to_string(round) + ".json");
                const std::string outstr = out.string();
                const char* argv[] = {"bvf",     "boxdim",       "--corpus", id,
                                      "--levels", "3..8",        "--resolution", "1024",
                                      "--output", outstr.c_str()};
                if (bvf::cli::cli_main(10, argv) != 0) pass = false;
                std::ifstream in(out, std::ios::binary);
                std::ostringstream ss;
                ss << in.rdbuf();
                payloads.push_back(ss.str());
                fs::remove(out);
            }
            pass = pass && !payloads[0].empty() && payloads[0] == payloads[1];
        }
        return std::make_pair(pass, "boxdim constant/plane/xy at 1024 run twice, byte-identical");
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
