#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "longevity/cli/commands.hpp"
#include "longevity/cli/config.hpp"
#include "longevity/cli/output.hpp"

using namespace longevity;
using namespace longevity::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = LONGEVITY_CONFIG_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "longevity");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

// Fresh scratch directory under the system temp dir.
fs::path scratch(const std::string& name) {
    std::random_device rd;
    const fs::path p = fs::temp_directory_path() / ("longevity_" + name + "_" + std::to_string(rd()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> split(const std::string& row) {
    std::vector<std::string> out;
    std::istringstream in(row);
    for (std::string f; std::getline(in, f, ',');) out.push_back(f);
    if (!row.empty() && row.back() == ',') out.emplace_back();
    return out;
}

json base_doc() {
    return json::parse(R"({
      "society": {"gamma": 2.0, "alpha": 0.0, "child_cost": 2.0, "extension_cost": 3.0},
      "initial": {"kind": "gaussian", "mean": 2.0, "sigma": 1.0, "n_points": 201},
      "run": {"generations": 3},
      "output": {"directory": "out"}
    })");
}

std::string config_error(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("config parsing") {
    const auto c = parse_config(base_doc());
    CHECK(c.society.gamma == 2.0);
    CHECK(*c.society.extension_cost == 3.0);
    CHECK(c.initial.n_points == 201);
    CHECK(c.run.generations == 3);
    CHECK(c.run.bins == 100);
    CHECK(c.run.hist_generations == std::vector<int>{0, 1, 2, 4, 8});

    auto doc = base_doc();
    doc["society"]["extension_cost"] = nullptr;
    CHECK_FALSE(parse_config(doc).society.extension_cost.has_value());

    for (const auto& name : {"no_extension", "segregated", "tunneling", "profit"}) {
        CHECK_NOTHROW(load_config(kConfigs / (std::string(name) + ".json")));
    }
}

TEST_CASE("config errors name the field") {
    auto doc = base_doc();
    doc["society"]["gamma"] = -1.0;
    CHECK(config_error(doc).find("society.gamma") != std::string::npos);

    doc = base_doc();
    doc["society"]["alpha"] = -0.5;
    CHECK(config_error(doc).find("society.alpha") != std::string::npos);

    doc = base_doc();
    doc["society"].erase("child_cost");
    CHECK(config_error(doc).find("society.child_cost") != std::string::npos);

    doc = base_doc();
    doc["initial"]["kind"] = "lognormal";
    CHECK(config_error(doc).find("initial.kind") != std::string::npos);

    doc = base_doc();
    doc["run"]["smooth_window"] = 4;
    CHECK(config_error(doc).find("run.smooth_window") != std::string::npos);

    doc = base_doc();
    doc["output"]["formats"] = {"xml"};
    CHECK(config_error(doc).find("output.formats") != std::string::npos);

    doc = base_doc();
    doc["initial"] = json{{"kind", "points"}, {"points", {{1.0, 0.5}, {2.0}}}};
    CHECK(config_error(doc).find("initial.points") != std::string::npos);

    const auto dir = scratch("badjson");
    std::ofstream(dir / "bad.json") << "{ not json";
    CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
    CHECK_THROWS_AS(load_config(dir / "missing.json"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(3.0) == "3");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("exit codes") {
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    CHECK(invoke({"step", "--m", "-1", "--gamma", "2", "--alpha", "0", "--child-cost", "2"}).code == 1);
    CHECK(invoke({"step", "--m", "1", "--gamma", "2", "--alpha", "0"}).code == 1);
    CHECK(invoke({"tunnel-check", "--gamma", "x", "--alpha", "0", "--e-over-c", "1"}).code == 1);
    CHECK(invoke({"simulate", "/nonexistent/dir/config.json"}).code == 2);
    CHECK(invoke({"phase-diagram", "--resolution", "1", "--out", "/dev/null/x.csv"}).code == 1);

    const auto dir = scratch("exit");
    const auto r = invoke({"profit-sweep", (kConfigs / "no_extension.json").string(), "--out-dir", dir.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("extension") != std::string::npos);

    // Unwritable destination: a regular file where a directory is needed.
    std::ofstream(dir / "blocker") << "x";
    CHECK(invoke({"phase-diagram", "--resolution", "2", "--out", (dir / "blocker" / "p.csv").string()}).code == 2);
    fs::remove_all(dir);
}

TEST_CASE("step command") {
    const auto r = invoke({"step", "--m", "8", "--gamma", "2", "--alpha", "0", "--child-cost", "2",
                        "--extension-cost", "3"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["k"] == 1);
    CHECK(j["m_prime"].get<double>() == doctest::Approx(8.0));
    CHECK(j["extended"] == true);
    CHECK(j["regime"] == "immortal");
    CHECK(j["m2"].get<double>() == doctest::Approx(3.0));

    const auto plain = invoke({"step", "--m", "0.5", "--gamma", "0.7", "--alpha", "0.5", "--child-cost", "1"});
    REQUIRE(plain.code == 0);
    const auto p = json::parse(plain.out);
    CHECK(p["m_star"] == "inf");
    CHECK(p["m1"].is_null());
    CHECK(p["regime"] == "below_mstar");
}

TEST_CASE("tunnel-check command") {
    auto r = invoke({"tunnel-check", "--gamma", "2", "--alpha", "0", "--e-over-c", "1.5"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("tunnel=yes") != std::string::npos);
    CHECK(r.out.find("island=1") != std::string::npos);
    CHECK(r.out.find("dynamic_agrees=yes") != std::string::npos);

    r = invoke({"tunnel-check", "--gamma", "1.6", "--alpha", "0", "--e-over-c", "2.6"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("tunnel=no") != std::string::npos);
    CHECK(r.out.find("island=none") != std::string::npos);

    r = invoke({"tunnel-check", "--gamma", "1.5", "--alpha", "0.5", "--e-over-c", "3"});
    CHECK(r.out.find("tunnel=no") != std::string::npos);
}

TEST_CASE("phase-diagram command") {
    const auto dir = scratch("phase");
    SUBCASE("tiny grid and sidecar") {
        const auto csv = dir / "tiny.csv";
        REQUIRE(invoke({"phase-diagram", "--resolution", "2", "--out", csv.string()}).code == 0);
        const auto rows = lines(slurp(csv));
        REQUIRE(rows.size() == 5);
        CHECK(rows[0] == "gamma,e_over_c,island");
        const auto side = json::parse(slurp(gamma_n_sidecar(csv)));
        REQUIRE(side["gamma_n"].size() == 5);
        CHECK(side["gamma_n"][0]["gamma"].get<double>() == doctest::Approx(gamma_n(1)).epsilon(1e-15));
    }
    SUBCASE("islands only beyond the golden mean") {
        const auto csv = dir / "grid.csv";
        REQUIRE(invoke({"phase-diagram", "--resolution", "120", "--out", csv.string()}).code == 0);
        const auto rows = lines(slurp(csv));
        REQUIRE(rows.size() == 120 * 120 + 1);
        int island_cells = 0;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto f = split(rows[i]);
            REQUIRE(f.size() == 3);
            if (!f[2].empty()) {
                ++island_cells;
                CHECK(std::stod(f[0]) >= gamma_n(1));
            }
        }
        CHECK(island_cells > 0);
    }
    SUBCASE("empty below 1.6") {
        const auto csv = dir / "low.csv";
        REQUIRE(invoke({"phase-diagram", "--gamma-range", "1.0,1.6", "--eoc-range", "0,10", "--resolution",
                     "30", "--out", csv.string()})
                    .code == 0);
        const auto rows = lines(slurp(csv));
        for (std::size_t i = 1; i < rows.size(); ++i) CHECK(split(rows[i])[2].empty());
    }
    fs::remove_all(dir);
}

TEST_CASE("simulate command") {
    const auto dir = scratch("sim");
    auto doc = base_doc();
    doc["output"]["formats"] = {"csv", "json"};
    std::ofstream(dir / "c.json") << doc.dump();

    const auto r = invoke({"simulate", (dir / "c.json").string(), "--out-dir", (dir / "o").string()});
    REQUIRE(r.code == 0);
    const auto rows = lines(slurp(dir / "o" / "timeseries.csv"));
    REQUIRE(rows.size() == 5);  // header + t = 0..3
    CHECK(rows[0] ==
          "t,population,fertility,mean_wealth,frac_below_mstar,frac_mortal_fertile,frac_barrier,"
          "frac_immortal,profit");
    double prev_immortal = -1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = split(rows[i]);
        REQUIRE(f.size() == 9);
        const double frac_sum = std::stod(f[4]) + std::stod(f[5]) + std::stod(f[6]) + std::stod(f[7]);
        CHECK(frac_sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::stod(f[7]) >= prev_immortal - 1e-12);
        prev_immortal = std::stod(f[7]);
    }
    CHECK(fs::exists(dir / "o" / "hist_t0.csv"));
    CHECK(fs::exists(dir / "o" / "hist_t2.csv"));
    CHECK_FALSE(fs::exists(dir / "o" / "hist_t4.csv"));  // beyond the horizon
    CHECK(lines(slurp(dir / "o" / "hist_t0.csv")).size() == 101);
    const auto summary = json::parse(slurp(dir / "o" / "summary.json"));
    CHECK(summary["records"].size() == 4);

    SUBCASE("extinct lineage") {
        auto e = base_doc();
        e["initial"] = json{{"kind", "point"}, {"wealth", 0.5}};
        std::ofstream(dir / "e.json") << e.dump();
        const auto x = invoke({"simulate", (dir / "e.json").string(), "--out-dir", (dir / "e").string()});
        CHECK(x.code == 0);
        const auto t = lines(slurp(dir / "e" / "timeseries.csv"));
        REQUIRE(t.size() == 5);
        CHECK(split(t[2])[1] == "0");
    }
    fs::remove_all(dir);
}

TEST_CASE("fertility-sweep command") {
    const auto r = invoke({"fertility-sweep"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 42);
    CHECK(rows[0] == "gamma,k");
    int drops = 0;
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const int a = std::stoi(split(rows[i - 1])[1]);
        const int b = std::stoi(split(rows[i])[1]);
        if (b != a) {
            ++drops;
            CHECK(a == 3);
            CHECK(b == 2);
        }
    }
    CHECK(drops == 1);
}

TEST_CASE("outputs are byte-identical across runs and worker counts") {
    const auto dir = scratch("det");
    const auto cfg = (kConfigs / "profit.json").string();
    REQUIRE(invoke({"profit-sweep", cfg, "--e-step", "0.25", "--out-dir", (dir / "a").string(), "--workers", "1"}).code == 0);
    REQUIRE(invoke({"profit-sweep", cfg, "--e-step", "0.25", "--out-dir", (dir / "b").string(), "--workers", "8"}).code == 0);
    CHECK(slurp(dir / "a" / "profit.csv") == slurp(dir / "b" / "profit.csv"));
    CHECK(slurp(dir / "a" / "profit_argmax.json") == slurp(dir / "b" / "profit_argmax.json"));

    REQUIRE(invoke({"phase-diagram", "--resolution", "50", "--out", (dir / "p1.csv").string()}).code == 0);
    REQUIRE(invoke({"phase-diagram", "--resolution", "50", "--workers", "0", "--out", (dir / "p2.csv").string()}).code == 0);
    CHECK(slurp(dir / "p1.csv") == slurp(dir / "p2.csv"));
    fs::remove_all(dir);
}
