// End-to-end tests of the command-line driver: exit codes, output files,
// CSV schemas, and byte-level determinism. WICKSHIFT_CLI_PATH is injected by
// the build so the suite always runs the binary it was built with.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(WICKSHIFT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("wickshift_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    out << body;
}

std::string first_line(const std::string& body) {
    return body.substr(0, body.find('\n'));
}

}  // namespace

TEST_CASE("unknown command exits 1", "[cli]") {
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("") == 1);
}

TEST_CASE("invalid parameters exit 2", "[cli]") {
    auto dir = fresh_dir("invalid");
    write_file(dir / "bad_alpha.json",
               R"({"alpha": 1.0, "sigma": 0.5, "levels": [2, 4]})");
    CHECK(run_cli("wick-converge --config " + (dir / "bad_alpha.json").string() +
                  " --out " + (dir / "out").string()) == 2);

    write_file(dir / "broken.json", "{ not json");
    CHECK(run_cli("wick-converge --config " + (dir / "broken.json").string() + " --out " +
                  (dir / "out2").string()) == 2);

    write_file(dir / "bad_levels.json",
               R"({"alpha": 2.0, "sigma": 0.5, "levels": [4, 2]})");
    CHECK(run_cli("wick-converge --config " + (dir / "bad_levels.json").string() +
                  " --out " + (dir / "out3").string()) == 2);
}

TEST_CASE("wick-converge writes the report and manifest", "[cli]") {
    auto dir = fresh_dir("converge");
    write_file(dir / "cfg.json", R"({
        "alpha": 2.0, "sigma": 0.5, "levels": [2, 4], "t_samples": 16,
        "initial_data": {"type": "power_decay", "exponent": 0.6}
    })");
    REQUIRE(run_cli("wick-converge --config " + (dir / "cfg.json").string() + " --out " +
                    (dir / "out").string()) == 0);
    const auto csv = slurp(dir / "out" / "wick-converge.csv");
    CHECK(first_line(csv) == "N,t0_norm,sup_lower,sup_upper,gap_upper,rhs");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 levels

    auto manifest = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
    CHECK(manifest.at("command") == "wick-converge");
    CHECK(manifest.at("config").at("alpha") == 2.0);
    CHECK(manifest.contains("version"));
    CHECK(manifest.contains("wall_time_seconds"));
    CHECK(manifest.at("outputs")[0] == "wick-converge.csv");
}

TEST_CASE("wick-diverge is byte-deterministic", "[cli]") {
    auto dir = fresh_dir("diverge");
    write_file(dir / "cfg.json", R"({
        "kind": "time_regularity", "alpha": 2.0, "sigma": 0.5,
        "epsilon": 0.1, "s1": 0.8, "s2": 0.0, "levels": [2, 4, 8]
    })");
    REQUIRE(run_cli("wick-diverge --config " + (dir / "cfg.json").string() + " --out " +
                    (dir / "a").string()) == 0);
    REQUIRE(run_cli("wick-diverge --config " + (dir / "cfg.json").string() + " --out " +
                    (dir / "b").string()) == 0);
    const auto csv_a = slurp(dir / "a" / "wick-diverge.csv");
    const auto csv_b = slurp(dir / "b" / "wick-diverge.csv");
    CHECK(csv_a == csv_b);
    CHECK(first_line(csv_a) == "kind,N,value");
    CHECK(std::count(csv_a.begin(), csv_a.end(), '\n') == 4);
}

TEST_CASE("bilinear-probe respects the seed flag", "[cli]") {
    auto dir = fresh_dir("probe");
    write_file(dir / "cfg.json", R"({"alpha": 2.0, "sigma": 0.5, "trials": 5})");
    const std::string base = "bilinear-probe --config " + (dir / "cfg.json").string();
    REQUIRE(run_cli(base + " --seed 42 --out " + (dir / "a").string()) == 0);
    REQUIRE(run_cli(base + " --seed 42 --out " + (dir / "b").string()) == 0);
    REQUIRE(run_cli(base + " --seed 7 --out " + (dir / "c").string()) == 0);
    const auto a = slurp(dir / "a" / "bilinear-probe.csv");
    const auto b = slurp(dir / "b" / "bilinear-probe.csv");
    const auto c = slurp(dir / "c" / "bilinear-probe.csv");
    CHECK(a == b);
    CHECK(a != c);
    CHECK(first_line(a) == "seed,trial,ratio");
    CHECK(a.find("\n42,0,") != std::string::npos);

    auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(manifest.at("seed") == 42);
    CHECK(manifest.at("summary").contains("max_ratio"));
}

TEST_CASE("strichartz scan emits per-combination caps", "[cli]") {
    auto dir = fresh_dir("strichartz");
    write_file(dir / "cfg.json",
               R"({"alphas": [2.0], "T": 1.0, "max_modes": [4], "trials": 5})");
    REQUIRE(run_cli("strichartz --config " + (dir / "cfg.json").string() + " --seed 3 --out " +
                    (dir / "out").string()) == 0);
    const auto csv = slurp(dir / "out" / "strichartz.csv");
    CHECK(first_line(csv) == "alpha,T,maxmode,ratio_cap");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("observability command with default config", "[cli]") {
    auto dir = fresh_dir("obs");
    REQUIRE(run_cli("observability --out " + (dir / "out").string()) == 0);
    const auto csv = slurp(dir / "out" / "observability.csv");
    CHECK(first_line(csv) == "N,lambda_min,C");
    // default profile is uniform with T = 1: every lambda_min is exactly 1
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.find(",1,1") != std::string::npos);
        ++rows;
    }
    CHECK(rows >= 2);
}

TEST_CASE("ergodic command writes residuals against the bound", "[cli]") {
    auto dir = fresh_dir("ergodic");
    write_file(dir / "cfg.json", R"({
        "shift": 1.0, "n_max": 16,
        "modes": [[0, 1, 0], [1, 1, 0], [-1, 1, 0]]
    })");
    REQUIRE(run_cli("ergodic --config " + (dir / "cfg.json").string() + " --out " +
                    (dir / "out").string()) == 0);
    const auto csv = slurp(dir / "out" / "ergodic.csv");
    CHECK(first_line(csv) == "n,residual,bound");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
}
