#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bvf/cli.hpp"
#include "bvf/grid_io.hpp"

using bvf::cli::cli_main;
using nlohmann::json;

namespace {

int run(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"bvf"};
    argv.insert(argv.end(), args.begin(), args.end());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("bvf_cli_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json run_json(std::initializer_list<const char*> args, const std::string& name) {
    const auto path = temp_file(name);
    std::vector<const char*> argv{"bvf"};
    argv.insert(argv.end(), args.begin(), args.end());
    const std::string out = "--output";
    const std::string pathstr = path.string();
    argv.push_back(out.c_str());
    argv.push_back(pathstr.c_str());
    REQUIRE(cli_main(static_cast<int>(argv.size()), argv.data()) == 0);
    const json j = json::parse(slurp(path));
    std::filesystem::remove(path);
    return j;
}

} // namespace

TEST_CASE("variation subcommand reports the hand-computed triple") {
    const json j = run_json({"variation", "--corpus", "plane_indicator", "--m", "2", "--n", "2",
                             "--senses", "vitali,frechet,arzela"},
                            "triple.json");
    REQUIRE(j.at("schema") == 1);
    REQUIRE(j["results"]["senses"]["vitali"]["value"] == 6.0);
    REQUIRE(j["results"]["senses"]["frechet"]["value"] == 6.0);
    REQUIRE(j["results"]["senses"]["arzela"]["value"] == 2.0);
    REQUIRE(j["config"]["m"] == 2);
}

TEST_CASE("variation covers the remaining senses") {
    const json j = run_json({"variation", "--corpus", "xy", "--m", "16", "--senses",
                             "tonelli,hahn,pierpont,hardy"},
                            "senses.json");
    REQUIRE(std::abs(j["results"]["senses"]["tonelli"]["int_phi"].get<double>() - 0.5) < 1e-12);
    REQUIRE(j["results"]["senses"]["hahn"]["verdict"] == "bounded");
    REQUIRE(j["results"]["senses"]["pierpont"]["via"] == "hahn-equivalence");
    REQUIRE(j["results"]["senses"]["hardy"]["verdict"] == "bounded");
}

TEST_CASE("boxdim subcommand fits the constant slope exactly") {
    const json j = run_json({"boxdim", "--corpus", "constant", "--levels", "3..8", "--resolution",
                             "256"},
                            "boxdim.json");
    REQUIRE(std::abs(j["results"]["slope"].get<double>() - 2.0) < 1e-12);
    REQUIRE(j["results"]["records"].size() == 6);
    REQUIRE(j["results"]["holder"]["s_hat"].get<double>() == 1.0);
}

TEST_CASE("boxdim csv output is the two-column log-log table") {
    const auto path = temp_file("boxdim.csv");
    REQUIRE(run({"boxdim", "--corpus", "plane", "--levels", "3..5", "--resolution", "64",
                 "--format", "csv", "--output", path.string().c_str()}) == 0);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "log_inv_delta,log_n_direct");
    int rows = 0;
    for (std::string line; std::getline(in, line) && !line.empty();) ++rows;
    REQUIRE(rows == 3);
    std::filesystem::remove(path);
}

TEST_CASE("fracint sup-bound check on the unit constant") {
    const json j = run_json({"fracint", "--corpus", "ones", "--alpha", "1", "--beta", "1",
                             "--check", "sup-bound"},
                            "supbound.json");
    REQUIRE(j["results"]["holds"] == true);
    REQUIRE(std::abs(j["results"]["bound"].get<double>() - 1.0) < 1e-9);
    REQUIRE(std::abs(j["results"]["sup_abs"].get<double>() - 1.0) < 1e-9);
}

TEST_CASE("fracint without a check emits the integral grid") {
    const auto path = temp_file("integral.json");
    REQUIRE(run({"fracint", "--corpus", "ones", "--alpha", "1", "--beta", "1", "--resolution",
                 "16", "--output", path.string().c_str()}) == 0);
    const bvf::GridFunction f = bvf::read_grid(path.string());
    REQUIRE(f.m() == 16);
    REQUIRE(std::abs(f.at(16, 16) - 1.0) < 1e-12); // I(1,1) of 1 at the far corner is xy = 1
    REQUIRE(std::abs(f.at(8, 8) - 0.25) < 1e-12);
    std::filesystem::remove(path);
}

TEST_CASE("grid file input feeds every subcommand") {
    const auto gpath = temp_file("input_grid.json");
    bvf::write_grid(bvf::sample([](double x, double y) { return x + y; }, {0, 1, 0, 1}, 2, 2),
                    gpath.string());
    const json j = run_json({"variation", "--grid", gpath.string().c_str(), "--senses", "arzela"},
                            "fromfile.json");
    REQUIRE(j["results"]["senses"]["arzela"]["value"] == 2.0);
    std::filesystem::remove(gpath);
}

TEST_CASE("corpus subcommand classifies the paper examples") {
    const json j = run_json({"corpus", "--id", "plane_indicator", "--resolutions", "8,16,32,64"},
                            "corpus.json");
    const auto& e = j["results"]["plane_indicator"];
    REQUIRE(e["arzela"]["verdict"] == "bounded");
    REQUIRE(e["arzela"]["match"] == true);
    REQUIRE(e["frechet"]["verdict"] == "unbounded");
    REQUIRE(e["frechet"]["match"] == true);
}

TEST_CASE("exit codes distinguish usage from computation errors") {
    REQUIRE(run({"variation", "--corpus", "xy"}) == 2);                       // missing --senses
    REQUIRE(run({"variation", "--no-such-flag", "x"}) == 2);                  // unknown flag
    REQUIRE(run({"variation", "--corpus", "xy", "--senses", "hahn", "--ks", "2,x"}) == 2);
    REQUIRE(run({"boxdim", "--corpus", "xy", "--levels", "eight"}) == 2);
    REQUIRE(run({"boxdim", "--corpus", "xy", "--schedule", "8,4,2"}) == 2);   // not increasing
    REQUIRE(run({"boxdim", "--corpus", "typo_function"}) == 1);               // unknown corpus id
    REQUIRE(run({"variation", "--corpus", "xy", "--senses", "bogus"}) == 1);  // unknown sense
    REQUIRE(run({"fracint", "--corpus", "ones", "--alpha", "0", "--beta", "1"}) == 1);
}

TEST_CASE("identical configs produce byte-identical artifacts") {
    const auto p1 = temp_file("det1.json");
    const auto p2 = temp_file("det2.json");
    for (const auto& p : {p1, p2}) {
        REQUIRE(run({"boxdim", "--corpus", "xy", "--levels", "3..6", "--resolution", "128",
                     "--output", p.string().c_str()}) == 0);
    }
    REQUIRE(slurp(p1) == slurp(p2));
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}
