// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "runner.hpp"

using namespace bms;
using nlohmann::json;

namespace {

json base_config() {
    return json::parse(R"({
        "schema_version": 1, "n": 2, "resolution": 64,
        "measure": {"kind": "gaussian"}, "R": 1.0,
        "perturbation": {"kind": "additive", "expansion": {"constant": 1.0, "cos": [0, 0, 0.3]}},
        "epsilon_max": 0.05, "lambda_steps": 20, "epsilon_points": 2, "seed": 11
    })");
}

std::string config_error_message(const json& j) {
    try {
        parse_config(j);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
        return e.what();
    }
    return "";
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parsing and round trip") {
    json j = base_config();
    j["checks"] = {"scan_dim_bm", "B1_B2"};
    j["body"] = {{"constant", 1.0}, {"cos", {0, 0, 0.05}}};
    j["tolerances"] = {{"margin", 1e-9}};
    const RunConfig c = parse_config(j);
    CHECK(c.n == 2);
    CHECK(c.measure == MeasureKind::Gaussian);
    CHECK(c.checks.size() == 2);
    CHECK(c.has_body);
    CHECK(c.tolerances.margin == 1e-9);
    const std::string once = to_json(c).dump();
    const RunConfig back = parse_config(json::parse(once));
    CHECK(to_json(back).dump() == once);

    const RunConfig d = parse_config(base_config());
    CHECK(d.checks == all_checks());
}

TEST_CASE("config errors name the offending key") {
    json j = base_config();
    j["lambda_stepz"] = 3;
    CHECK(config_error_message(j).find("lambda_stepz") != std::string::npos);

    j = base_config();
    j["epsilon_max"] = -1.0;
    CHECK(config_error_message(j).find("epsilon_max") != std::string::npos);

    j = base_config();
    j["resolution"] = 100000;
    CHECK(config_error_message(j).find("resolution") != std::string::npos);

    j = base_config();
    j["checks"] = {"scan_dim_bm", "bogus"};
    CHECK(config_error_message(j).find("bogus") != std::string::npos);

    j = base_config();
    j["measure"] = {{"kind", "custom"}};
    CHECK(config_error_message(j).find("measure.kind") != std::string::npos);

    j = base_config();
    j["perturbation"]["expansion"]["monomials"] = {{{"coef", 1.0}, {"powers", {1, 2, 3}}}};
    CHECK(config_error_message(j).find("powers") != std::string::npos);

    j = base_config();
    j.erase("schema_version");
    CHECK(config_error_message(j).find("schema_version") != std::string::npos);
}

TEST_CASE("expansions") {
    ExpansionSpec e;
    e.constant = 1.0;
    e.cos = {0.0, 0.0, 0.5};
    const SphericalFunction f = build_expansion(e, 2);
    const double u[2] = {1.0, 0.0};
    CHECK(f(u) == doctest::Approx(1.5));
    CHECK_THROWS(build_expansion(e, 3));
    ExpansionSpec m;
    Monomial mono;
    mono.coef = 2.0;
    mono.pow = {0, 0, 2};
    m.monomials = {mono};
    const double v[3] = {0.0, 0.6, 0.8};
    CHECK(build_expansion(m, 3)(v) == doctest::Approx(1.28));
}

TEST_CASE("run writes reports") {
    json j = base_config();
    j["checks"] = {"scan_dim_bm", "shift_counterexample"};
    const RunConfig c = parse_config(j);
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "bmstab_runner_test";
    std::filesystem::remove_all(dir);
    const RunResult r = run(c, dir.string(), true, {});
    CHECK(r.exit_code == 0);
    CHECK(r.reports.size() == 4 * 21 + 1);
    const std::string csv = slurp(dir / "report.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "check,n,R,measure,eps1,eps2,lambda,margin,pass,oracle_diff,seed,expected_failure");
    int scan_rows = 0, shift_rows = 0;
    while (std::getline(lines, line)) {
        if (line.rfind("scan_dim_bm,", 0) == 0) ++scan_rows;
        if (line.rfind("shift_counterexample,", 0) == 0) {
            ++shift_rows;
            CHECK(line.find(",11,true") != std::string::npos);
        }
    }
    CHECK(scan_rows == 84);
    CHECK(shift_rows == 1);
    const json report = json::parse(slurp(dir / "report.json"));
    CHECK(report["reports"].size() == 85);
    CHECK(report["header"].contains("timestamp"));
    CHECK(report["summary"]["exit_code"] == 0);
    CHECK(std::filesystem::exists(dir / "margins.svg"));

    const std::filesystem::path dir2 = dir.string() + "_again";
    run(c, dir2.string(), false, {});
    json a = json::parse(slurp(dir / "report.json")), b = json::parse(slurp(dir2 / "report.json"));
    a["header"].erase("timestamp");
    b["header"].erase("timestamp");
    CHECK(a.dump() == b.dump());
    CHECK(slurp(dir / "report.csv") == slurp(dir2 / "report.csv"));
    std::filesystem::remove_all(dir);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("run rejects epsilon beyond the validity radius") {
    json j = base_config();
    j["perturbation"]["expansion"] = {{"cos", {0, 0, 1.0}}};
    j["epsilon_max"] = 0.5;
    j["checks"] = {"scan_dim_bm"};
    try {
        run(parse_config(j), (std::filesystem::temp_directory_path() / "bmstab_bad").string(), false, {});
        FAIL("expected OutsideValidity");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutsideValidity);
        CHECK(std::string(e.what()).find("epsilon exceeds validity radius a=") != std::string::npos);
    }
}

TEST_CASE("identity suite") {
    std::vector<IdentityRow> rows;
    IdentityOptions opt;
    CHECK(verify_identities(opt, {}, &rows) == 0);
    for (const IdentityRow& r : rows) CHECK(r.pass);

    IdentityOptions sweep;
    sweep.n = 3;
    sweep.sweep = true;
    CHECK(verify_identities(sweep, {}) == 0);

    IdentityOptions bad;
    bad.extra_measures.push_back(RadialMeasure::custom([](double r) { return std::exp(-r * r / 2); },
                                                       [](double r) { return -3.0 * r * std::exp(-r * r / 2); },
                                                       [](double r) { return (r * r - 1) * std::exp(-r * r / 2); },
                                                       "corrupted"));
    std::vector<IdentityRow> bad_rows;
    CHECK(verify_identities(bad, {}, &bad_rows) == 2);
    double worst = 0.0;
    for (const IdentityRow& r : bad_rows)
        if (r.name.find("corrupted") != std::string::npos) worst = std::max(worst, r.residual);
    CHECK(worst > 1e-3);
}

TEST_CASE("demo shift") {
    VerificationReport r;
    std::vector<std::string> lines;
    CHECK(demo_shift(0.3, 0.5, [&](const std::string& s) { lines.push_back(s); }, &r) == 0);
    CHECK(r.margin < 0.0);
    CHECK_FALSE(lines.empty());
    CHECK(list_checks().size() == 10);
}
