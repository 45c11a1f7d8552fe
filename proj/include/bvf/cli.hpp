#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bvf/boxdim.hpp"
#include "bvf/corpus.hpp"
#include "bvf/fracint.hpp"
#include "bvf/grid_io.hpp"
#include "bvf/variation.hpp"
#include "bvf/version.hpp"

namespace bvf::cli {

using json = nlohmann::ordered_json;

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<int> out;
    for (const auto& tok : split(text, ',')) {
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw CLI::ValidationError(flag, "'" + tok + "' is not an integer");
        }
    }
    return out;
}

/// "3..8" -> {3, 8}
inline std::pair<int, int> parse_level_range(const std::string& text, const std::string& flag) {
    const auto pos = text.find("..");
    if (pos == std::string::npos)
        throw CLI::ValidationError(flag, "expected a range like 3..8");
    try {
        return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 2))};
    } catch (const std::exception&) {
        throw CLI::ValidationError(flag, "expected a range like 3..8");
    }
}

inline json witness_json(const VariationWitness& w) {
    if (const auto* net = std::get_if<Net>(&w))
        return {{"type", "net"}, {"xs", net->xs}, {"ys", net->ys}};
    if (const auto* sv = std::get_if<SignVector>(&w))
        return {{"type", "signs"}, {"eps", sv->eps}, {"eps_bar", sv->eps_bar}};
    const auto& path = std::get<MonotonePath>(w);
    json pts = json::array();
    for (const auto& [i, j] : path.pts) pts.push_back({i, j});
    return {{"type", "path"}, {"points", pts}};
}

inline json to_json(const VariationResult& r) {
    json j;
    j["value"] = r.value;
    j["exactness"] = std::string(to_string(r.exactness));
    if (r.witness) j["witness"] = witness_json(*r.witness);
    return j;
}

inline json to_json(const BoundednessDiagnosis& d) {
    json j;
    json sums = json::array();
    for (const auto& [res, s] : d.sums) sums.push_back({res, s});
    j["sums"] = sums;
    j["slope"] = d.slope;
    j["r2"] = d.r2;
    j["verdict"] = std::string(to_string(d.verdict));
    return j;
}

inline json to_json(const DimensionEstimate& est) {
    json j;
    json records = json::array();
    for (const auto& rec : est.records) {
        records.push_back({{"delta", rec.delta},
                           {"m", rec.m_cells},
                           {"n", rec.n_cells},
                           {"n_lower", rec.n_lower},
                           {"n_upper", rec.n_upper},
                           {"n_direct", rec.n_direct}});
    }
    j["records"] = records;
    j["slope"] = est.slope;
    j["intercept"] = est.intercept;
    j["r2"] = est.r2;
    j["low_confidence"] = est.low_confidence;
    return j;
}

inline void write_output(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << payload;
}

} // namespace detail

/// One resolved CLI invocation: pointwise input, sampling sizes, sense and
/// schedule selections, and the output target. Identical configs produce
/// byte-identical artifacts (reports carry no timestamps).
struct RunConfig {
    std::string command;
    std::string corpus_id;
    std::map<std::string, double> params;
    std::string grid_path;
    Rect rect{0.0, 1.0, 0.0, 1.0};
    int m = 64, n = 64;
    std::vector<std::string> senses;
    std::string frechet_mode = "auto";
    std::vector<int> ks;
    int resolution = 0;
    int k_min = 3, k_max = 8;
    std::vector<int> schedule;
    double alpha = 1.0, beta = 1.0;
    int refinement = 1;
    std::string check;
    std::vector<int> resolutions;
    std::string g1d = "x";
    std::vector<std::string> corpus_ids;
    std::string output;
    std::string format = "json";
};

namespace detail {

inline json config_json(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    if (!cfg.corpus_id.empty()) {
        j["corpus"] = cfg.corpus_id;
        if (!cfg.params.empty()) j["params"] = cfg.params;
    }
    if (!cfg.grid_path.empty()) j["grid"] = cfg.grid_path;
    return j;
}

inline GridFunction load_input(const RunConfig& cfg, int m, int n) {
    if (!cfg.grid_path.empty()) return read_grid(cfg.grid_path);
    if (cfg.corpus_id.empty())
        throw std::runtime_error("no input: pass --corpus <id> or --grid <path>");
    return sample(corpus_fn(cfg.corpus_id, cfg.params), cfg.rect, m, n);
}

inline std::string render(const json& report, const std::string& payload_csv,
                          const std::string& format) {
    if (format == "csv") return payload_csv;
    return report.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

inline int run_variation(const RunConfig& cfg) {
    if (cfg.senses.empty()) throw std::runtime_error("variation: --senses must be nonempty");
    const GridFunction g = load_input(cfg, cfg.m, cfg.n);

    json results;
    std::string csv;
    std::optional<BoundednessDiagnosis> hahn_cache;
    auto hahn_diag = [&]() -> const BoundednessDiagnosis& {
        if (!hahn_cache) {
            std::vector<int> ks = cfg.ks;
            if (ks.empty()) {
                for (int k = 2; k <= std::min(g.m(), g.n()) && ks.size() < 6; k *= 2)
                    if (g.m() % k == 0 && g.n() % k == 0) ks.push_back(k);
            }
            if (ks.size() < 3)
                throw std::runtime_error("variation: hahn needs >= 3 usable net sizes "
                                         "(pass --ks or use a resolution with more divisors)");
            hahn_cache = hahn_profile(g, ks);
        }
        return *hahn_cache;
    };

    for (const auto& name : cfg.senses) {
        const Sense sense = sense_from_string(name);
        switch (sense) {
            case Sense::vitali: {
                const auto r = vitali_variation(g);
                results[name] = to_json(r);
                csv += name + "," + bvf::detail::format_double(r.value) + "\n";
                break;
            }
            case Sense::frechet: {
                FrechetMode mode = FrechetMode::exact;
                if (cfg.frechet_mode == "heuristic" ||
                    (cfg.frechet_mode == "auto" && std::min(g.m(), g.n()) > 20))
                    mode = FrechetMode::heuristic;
                const auto r = frechet_variation(g, mode);
                results[name] = to_json(r);
                csv += name + "," + bvf::detail::format_double(r.value) + "\n";
                break;
            }
            case Sense::arzela: {
                const auto r = arzela_variation(g);
                results[name] = to_json(r);
                csv += name + "," + bvf::detail::format_double(r.value) + "\n";
                break;
            }
            case Sense::tonelli: {
                const auto t = tonelli_variation(g);
                results[name] = {{"int_phi", t.int_phi}, {"int_mu", t.int_mu}};
                csv += name + "_int_phi," + bvf::detail::format_double(t.int_phi) + "\n";
                csv += name + "_int_mu," + bvf::detail::format_double(t.int_mu) + "\n";
                break;
            }
            case Sense::hahn: {
                results[name] = to_json(hahn_diag());
                csv += name + "," + std::string(to_string(hahn_diag().verdict)) + "\n";
                break;
            }
            case Sense::pierpont: {
                json j = to_json(hahn_diag());
                j["via"] = "hahn-equivalence";
                results[name] = j;
                csv += name + "," + std::string(to_string(hahn_diag().verdict)) + "\n";
                break;
            }
            case Sense::hardy: {
                const auto rep = hardy_report(g);
                json j;
                j["vitali"] = rep.vitali.value;
                j["min_section_fixed_x"] = rep.min_section_fixed_x;
                j["min_section_fixed_y"] = rep.min_section_fixed_y;
                j["vitali_trend"] = to_json(rep.vitali_trend);
                j["verdict"] = std::string(to_string(rep.verdict));
                results[name] = j;
                csv += name + "," + std::string(to_string(rep.verdict)) + "\n";
                break;
            }
        }
    }

    json report;
    report["schema"] = 1;
    report["version"] = version_string;
    report["config"] = config_json(cfg);
    report["config"]["m"] = g.m();
    report["config"]["n"] = g.n();
    report["config"]["senses"] = cfg.senses;
    report["results"] = {{"senses", results}};
    write_output(cfg.output, render(report, csv, cfg.format));
    return 0;
}

// ---------------------------------------------------------------------------

inline int run_boxdim(const RunConfig& cfg) {
    const int res = cfg.resolution > 0 ? cfg.resolution : 1024;
    const GridFunction g = load_input(cfg, res, res);

    const DimensionEstimate est = cfg.schedule.empty()
                                      ? dimension_estimate(g, cfg.k_min, cfg.k_max)
                                      : dimension_estimate_schedule(g, cfg.schedule);
    std::optional<HolderEstimate> holder;
    if (cfg.schedule.empty()) holder = estimate_holder(g, cfg.k_min, cfg.k_max);

    std::string csv = "log_inv_delta,log_n_direct\n";
    for (const auto& rec : est.records)
        csv += bvf::detail::format_double(std::log(1.0 / rec.delta)) + "," +
               bvf::detail::format_double(std::log(rec.n_direct)) + "\n";

    json report;
    report["schema"] = 1;
    report["version"] = version_string;
    report["config"] = config_json(cfg);
    report["config"]["resolution"] = res;
    if (cfg.schedule.empty())
        report["config"]["levels"] = std::to_string(cfg.k_min) + ".." + std::to_string(cfg.k_max);
    else
        report["config"]["schedule"] = cfg.schedule;
    report["results"] = to_json(est);
    if (holder) {
        report["results"]["holder"] = {{"s_hat", holder->s_hat},
                                       {"dim_upper", holder->dim_upper},
                                       {"degenerate", holder->degenerate}};
    }
    write_output(cfg.output, render(report, csv, cfg.format));
    return 0;
}

// ---------------------------------------------------------------------------

inline double eval_g1d(const std::string& id, double x) {
    if (id == "x") return x;
    if (id == "sqrt_x") return std::sqrt(x);
    if (id == "one") return 1.0;
    throw std::runtime_error("fracint: unknown --g1d '" + id + "' (known: x, sqrt_x, one)");
}

inline int run_fracint(const RunConfig& cfg) {
    const FracParams p{cfg.alpha, cfg.beta};
    p.validate();
    const QuadratureScheme q{cfg.refinement};
    const int res = cfg.resolution > 0 ? cfg.resolution : 64;

    json report;
    report["schema"] = 1;
    report["version"] = version_string;
    report["config"] = config_json(cfg);
    report["config"]["alpha"] = cfg.alpha;
    report["config"]["beta"] = cfg.beta;
    report["config"]["resolution"] = res;

    if (cfg.check.empty()) {
        const GridFunction g = load_input(cfg, res, res);
        const GridFunction f = frac_integral(g, p, q);
        if (cfg.format == "csv") {
            write_output(cfg.output, grid_to_csv(f));
        } else {
            write_output(cfg.output, grid_to_json(f).dump(2) + "\n");
        }
        return 0;
    }

    json results;
    std::string csv;
    if (cfg.check == "sup-bound") {
        const GridFunction g = load_input(cfg, res, res);
        const SupBoundReport rep = sup_bound_check(g, p, q);
        results = {{"holds", rep.holds}, {"bound", rep.bound}, {"sup_abs", rep.sup_abs},
                   {"tolerance", 1e-9}};
        csv = "holds," + std::string(rep.holds ? "true" : "false") + "\nbound," +
              bvf::detail::format_double(rep.bound) + "\nsup_abs," + bvf::detail::format_double(rep.sup_abs) + "\n";
    } else if (cfg.check == "monotone-image") {
        const GridFunction g = load_input(cfg, res, res);
        const MonotoneImageReport rep = monotone_image_check(g, p, 1e-10, q);
        results = {{"holds", rep.ok},
                   {"min_d10", rep.min_d10},
                   {"min_d01", rep.min_d01},
                   {"tolerance", 1e-10}};
        if (!rep.ok) results["violation"] = rep.message;
        csv = "holds," + std::string(rep.ok ? "true" : "false") + "\n";
    } else if (cfg.check == "separable") {
        std::vector<int> resolutions = cfg.resolutions;
        if (resolutions.empty()) resolutions = {64, 128, 256};
        const int finest = resolutions.back();
        std::vector<double> samples(finest + 1);
        for (int i = 0; i <= finest; ++i)
            samples[static_cast<std::size_t>(i)] =
                eval_g1d(cfg.g1d, cfg.rect.a + i * cfg.rect.width() / finest);
        const SeparableReport rep =
            separable_reduction_check(samples, cfg.rect, cfg.alpha, resolutions, cfg.refinement);
        json levels = json::array();
        for (const auto& lv : rep.levels)
            levels.push_back({{"resolution", lv.resolution},
                              {"max_discrepancy", lv.max_discrepancy}});
        results = {{"g1d", cfg.g1d}, {"levels", levels}, {"floor", rep.floor}};
        json ratios = json::array();
        for (double r : rep.shrink_ratios)
            ratios.push_back(std::isinf(r) ? json("converged-below-floor") : json(r));
        results["shrink_ratios"] = ratios;
        for (const auto& lv : rep.levels)
            csv += std::to_string(lv.resolution) + "," +
                   bvf::detail::format_double(lv.max_discrepancy) + "\n";
    } else if (cfg.check == "bv-preservation") {
        std::vector<int> resolutions = cfg.resolutions;
        if (resolutions.empty()) resolutions = {64, 128, 256};
        const int finest = resolutions.back();
        const GridFunction g = load_input(cfg, finest, finest);
        const BvPreservationReport rep = bv_preservation_check(g, p, resolutions);
        json arzela = json::array();
        for (const auto& [r, v] : rep.arzela_values) arzela.push_back({r, v});
        results = {{"ok", rep.ok},
                   {"decomposition_ok", rep.decomposition.ok},
                   {"f1_image_monotone", rep.f1_image.ok},
                   {"f2_image_monotone", rep.f2_image.ok},
                   {"arzela_values", arzela},
                   {"max_rel_change", rep.max_rel_change},
                   {"arzela_stable", rep.arzela_stable},
                   {"stability_tolerance", 0.05},
                   {"monotone_tolerance", 1e-10},
                   {"image_dimension_slope", rep.image_dimension.slope}};
        if (!rep.decomposition.ok) results["decomposition_violation"] = rep.decomposition.message;
        csv = "ok," + std::string(rep.ok ? "true" : "false") + "\n";
    } else {
        throw std::runtime_error("fracint: unknown --check '" + cfg.check +
                                 "' (known: sup-bound, monotone-image, separable, "
                                 "bv-preservation)");
    }
    report["config"]["check"] = cfg.check;
    report["results"] = results;
    write_output(cfg.output, render(report, csv, cfg.format));
    return 0;
}

// ---------------------------------------------------------------------------

inline int run_corpus(const RunConfig& cfg) {
    std::vector<int> resolutions = cfg.resolutions;
    if (resolutions.empty()) resolutions = {8, 16, 32, 64, 128, 256};
    std::vector<int> ks = cfg.ks;
    if (ks.empty()) ks = {2, 4, 8, 16, 32, 64};

    std::vector<std::string> ids = cfg.corpus_ids;
    if (ids.empty())
        for (const auto& e : corpus_entries()) ids.push_back(e.identifier);

    json results;
    std::string csv = "corpus,sense,verdict,expected,match\n";
    for (const auto& id : ids) {
        const CorpusEntry& entry = corpus_entry(id);
        const auto fn = corpus_fn(id, entry.parameters);
        json per;
        for (const auto& [sense, expected] : entry.expected) {
            const bool hahn_like = sense == Sense::hahn || sense == Sense::pierpont;
            const BoundednessDiagnosis diag =
                diagnose_refinement(fn, cfg.rect, sense, hahn_like ? ks : resolutions);
            const std::string verdict(to_string(diag.verdict));
            std::string want = expected == ExpectedBV::bounded     ? "bounded"
                               : expected == ExpectedBV::unbounded ? "unbounded"
                                                                   : "unknown";
            const bool match = want == "unknown" || want == verdict;
            per[std::string(to_string(sense))] = {{"verdict", verdict},
                                                  {"slope", diag.slope},
                                                  {"expected", want},
                                                  {"match", match}};
            csv += id + "," + std::string(to_string(sense)) + "," + verdict + "," + want + "," +
                   (match ? "true" : "false") + "\n";
        }
        results[id] = per;
    }

    json report;
    report["schema"] = 1;
    report["version"] = version_string;
    report["config"] = config_json(cfg);
    report["config"]["resolutions"] = resolutions;
    report["config"]["ks"] = ks;
    report["results"] = results;
    write_output(cfg.output, render(report, csv, cfg.format));
    return 0;
}

} // namespace detail

/// Builds the command-line application and runs one invocation.
/// Exit status: 0 success, 1 computation error, 2 usage error.
inline int cli_main(int argc, const char* const* argv) {
    CLI::App app{"bounded-variation functionals, box dimension, and fractional integrals "
                 "on grid-sampled bivariate functions"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string senses_arg, levels_arg = "3..8", ks_arg, schedule_arg, resolutions_arg;
    std::vector<std::string> param_args;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--corpus", cfg.corpus_id, "corpus function identifier");
        sub->add_option("--grid", cfg.grid_path, "grid file (.json or .csv)");
        sub->add_option("--param", param_args, "corpus parameter override name=value");
        sub->add_option("--output", cfg.output, "output file (default: stdout)");
        sub->add_option("--format", cfg.format, "output format: json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* variation = app.add_subcommand("variation", "variation functionals per sense");
    add_common(variation);
    variation->add_option("--m", cfg.m, "cells along x for corpus sampling");
    variation->add_option("--n", cfg.n, "cells along y for corpus sampling");
    variation->add_option("--senses", senses_arg, "comma-separated sense list")->required();
    variation->add_option("--frechet-mode", cfg.frechet_mode, "auto, exact, or heuristic")
        ->check(CLI::IsMember({"auto", "exact", "heuristic"}));
    variation->add_option("--ks", ks_arg, "comma-separated Hahn net sizes");

    CLI::App* boxdim = app.add_subcommand("boxdim", "graph box-dimension estimate");
    add_common(boxdim);
    boxdim->add_option("--resolution", cfg.resolution, "corpus sampling resolution (default 1024)");
    boxdim->add_option("--levels", levels_arg, "dyadic level range, e.g. 3..8");
    boxdim->add_option("--schedule", schedule_arg,
                       "comma-separated cell counts overriding the dyadic levels");

    CLI::App* fracint = app.add_subcommand("fracint", "mixed Riemann-Liouville fractional integral");
    add_common(fracint);
    fracint->add_option("--alpha", cfg.alpha, "order along x")->required();
    fracint->add_option("--beta", cfg.beta, "order along y")->required();
    fracint->add_option("--resolution", cfg.resolution, "corpus sampling resolution (default 64)");
    fracint->add_option("--refinement", cfg.refinement, "quadrature sub-cells per source cell");
    fracint->add_option("--check", cfg.check,
                        "sup-bound, monotone-image, separable, or bv-preservation");
    fracint->add_option("--resolutions", resolutions_arg,
                        "comma-separated schedule for separable/bv-preservation");
    fracint->add_option("--g1d", cfg.g1d, "univariate factor for --check separable (x, sqrt_x, one)");

    CLI::App* corpus = app.add_subcommand("corpus", "diagnosis matrix for the corpus entries");
    add_common(corpus);
    corpus->add_option("--id", cfg.corpus_ids, "corpus identifiers (default: all)");
    corpus->add_option("--resolutions", resolutions_arg, "comma-separated refinement schedule");
    corpus->add_option("--ks", ks_arg, "comma-separated Hahn net sizes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const auto& kv : param_args) {
            const auto pos = kv.find('=');
            if (pos == std::string::npos)
                throw CLI::ValidationError("--param", "expects name=value, got '" + kv + "'");
            try {
                cfg.params[kv.substr(0, pos)] = std::stod(kv.substr(pos + 1));
            } catch (const std::exception&) {
                throw CLI::ValidationError("--param", "'" + kv.substr(pos + 1) +
                                                          "' is not a number");
            }
        }
        if (!senses_arg.empty()) cfg.senses = detail::split(senses_arg, ',');
        if (!ks_arg.empty()) cfg.ks = detail::parse_int_list(ks_arg, "--ks");
        if (!schedule_arg.empty())
            cfg.schedule = detail::parse_int_list(schedule_arg, "--schedule");
        if (!resolutions_arg.empty())
            cfg.resolutions = detail::parse_int_list(resolutions_arg, "--resolutions");
        std::tie(cfg.k_min, cfg.k_max) = detail::parse_level_range(levels_arg, "--levels");
        for (const auto* sched : {&cfg.schedule, &cfg.resolutions}) {
            for (std::size_t i = 1; i < sched->size(); ++i)
                if ((*sched)[i] <= (*sched)[i - 1])
                    throw CLI::ValidationError("schedule", "entries must be strictly increasing");
        }

        if (variation->parsed()) {
            cfg.command = "variation";
            if (!variation->count("--n")) cfg.n = cfg.m;
            return detail::run_variation(cfg);
        }
        if (boxdim->parsed()) {
            cfg.command = "boxdim";
            return detail::run_boxdim(cfg);
        }
        if (fracint->parsed()) {
            cfg.command = "fracint";
            return detail::run_fracint(cfg);
        }
        cfg.command = "corpus";
        return detail::run_corpus(cfg);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace bvf::cli
