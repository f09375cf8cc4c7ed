// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int status = -1;
    std::string out;
};

Outcome run_cli(const std::string& args) {
    const std::string cmd = std::string(BMSTAB_CLI) + " " + args + " 2>&1";
    Outcome o;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    while (std::fgets(buf, sizeof buf, p)) o.out += buf;
    const int raw = pclose(p);
    o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return o;
}

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path p = fs::path(BMSTAB_WORKDIR) / "cli_configs" / name;
    fs::create_directories(p.parent_path());
    std::ofstream(p) << body;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_timestamp(const std::string& s) {
    std::istringstream in(s);
    std::string line, out;
    while (std::getline(in, line))
        if (line.find("\"timestamp\"") == std::string::npos) out += line + "\n";
    return out;
}

const char* kScan = R"({
  "schema_version": 1, "n": 2, "resolution": 64,
  "measure": {"kind": "gaussian"}, "R": 1.0,
  "perturbation": {"kind": "additive", "expansion": {"constant": 1.0, "cos": [0, 0, 0.3]}},
  "epsilon_max": 0.05, "lambda_steps": 10, "epsilon_points": 2, "seed": 3,
  "checks": ["scan_dim_bm"]
})";

}  // namespace

TEST_CASE("list-checks prints every check id") {
    const Outcome o = run_cli("list-checks");
    CHECK(o.status == 0);
    for (const char* id : {"dim_bm_infinitesimal", "log_bm_infinitesimal", "B1_B2", "logbm_ball_form", "scan_dim_bm",
                           "scan_log_bm", "shift_counterexample", "cone_measure_form", "strengthened_minkowski",
                           "minkowski_second"})
        CHECK(o.out.find(id) != std::string::npos);
}

TEST_CASE("run: scan config produces lambda_steps + 1 rows per epsilon pair") {
    const fs::path cfg = write_config("scan.json", kScan);
    const fs::path out = fs::path(BMSTAB_WORKDIR) / "cli_out_scan";
    fs::remove_all(out);
    const Outcome o = run_cli("run --config " + cfg.string() + " --out " + out.string() + " --svg");
    CHECK(o.status == 0);
    std::istringstream csv(slurp(out / "report.csv"));
    std::string line;
    int rows = 0;
    std::getline(csv, line);
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 4 * 11);
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "margins.svg"));

    const fs::path out2 = fs::path(BMSTAB_WORKDIR) / "cli_out_scan2";
    CHECK(run_cli("run --config " + cfg.string() + " --out " + out2.string()).status == 0);
    CHECK(strip_timestamp(slurp(out / "report.json")) == strip_timestamp(slurp(out2 / "report.json")));
    CHECK(slurp(out / "report.csv") == slurp(out2 / "report.csv"));
}

TEST_CASE("run: shift counterexample is an expected failure") {
    const fs::path cfg = write_config("shift.json", R"({"schema_version": 1,
        "perturbation": {"expansion": {"constant": 1.0}}, "checks": ["shift_counterexample"]})");
    const fs::path out = fs::path(BMSTAB_WORKDIR) / "cli_out_shift";
    const Outcome o = run_cli("run --config " + cfg.string() + " --out " + out.string());
    CHECK(o.status == 0);
    const std::string csv = slurp(out / "report.csv");
    CHECK(csv.find("shift_counterexample,") != std::string::npos);
    CHECK(csv.find(",true,") != std::string::npos);
    CHECK(csv.substr(csv.size() - 5) == "true\n");
}

TEST_CASE("run: configuration errors exit with 1") {
    const fs::path bad_eps = write_config("bad_eps.json", R"({"schema_version": 1,
        "perturbation": {"expansion": {"cos": [0, 0, 1.0]}}, "epsilon_max": 0.9, "checks": ["scan_dim_bm"]})");
    Outcome o = run_cli("run --config " + bad_eps.string() + " --out " + (fs::path(BMSTAB_WORKDIR) / "cli_bad").string());
    CHECK(o.status == 1);
    CHECK(o.out.find("epsilon exceeds validity radius a=") != std::string::npos);

    const fs::path bad_key = write_config("bad_key.json", R"({"schema_version": 1,
        "perturbation": {"expansion": {"constant": 1.0}}, "measure": {"kind": "gaussian", "q": 2}})");
    o = run_cli("run --config " + bad_key.string());
    CHECK(o.status == 1);
    CHECK(o.out.find("measure.q") != std::string::npos);

    o = run_cli("run --config /nonexistent/config.json");
    CHECK(o.status == 1);
    o = run_cli("frobnicate");
    CHECK(o.status == 1);
}

TEST_CASE("run: a failing check exits with 2") {
    // A shift far below the polygon resolution cannot demonstrate the deficit.
    const fs::path cfg = write_config("fail.json", R"({"schema_version": 1,
        "perturbation": {"expansion": {"constant": 1.0}}, "shift": {"t": 0.001, "lambda": 0.5},
        "polygon_directions": 720, "checks": ["shift_counterexample"]})");
    const Outcome o = run_cli("run --config " + cfg.string() + " --out " + (fs::path(BMSTAB_WORKDIR) / "cli_fail").string());
    CHECK(o.status == 2);
}

TEST_CASE("verify-identities and demo-shift") {
    Outcome o = run_cli("verify-identities");
    CHECK(o.status == 0);
    CHECK(o.out.find("FAIL") == std::string::npos);
    o = run_cli("verify-identities --n 3 --resolution 24 --sweep");
    CHECK(o.status == 0);
    o = run_cli("demo-shift --t 0.3 --lambda 0.5");
    CHECK(o.status == 0);
    CHECK(o.out.find("expected failure demonstrated") != std::string::npos);
    o = run_cli("demo-shift --t 0");
    CHECK(o.status == 2);
}
