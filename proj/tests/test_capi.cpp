// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "bmstab/bmstab.h"

namespace {

double gauss_f(double r, void*) { return std::exp(-r * r / 2); }
double gauss_df(double r, void*) { return -r * std::exp(-r * r / 2); }
double gauss_d2f(double r, void*) { return (r * r - 1) * std::exp(-r * r / 2); }
double wrong_df(double r, void* scale) { return *static_cast<double*>(scale) * r * std::exp(-r * r / 2); }
double rising(double r, void*) { return std::exp(r); }

void collect(const char* line, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(line); }

}  // namespace

TEST_CASE("grid, function and body handles") {
    bms_grid* g = nullptr;
    REQUIRE(bms_grid_create(2, 64, &g) == BMS_OK);
    CHECK(bms_grid_size(g) == 64);

    bms_function* h = nullptr;
    REQUIRE(bms_function_constant(2, 1.0, &h) == BMS_OK);
    double area = 0.0;
    REQUIRE(bms_grid_integrate(g, h, &area) == BMS_OK);
    CHECK(area == doctest::Approx(2 * M_PI));

    bms_body* b = nullptr;
    REQUIRE(bms_body_create(h, g, &b) == BMS_OK);
    bms_measure* leb = nullptr;
    REQUIRE(bms_measure_lebesgue(&leb) == BMS_OK);
    double v = 0.0;
    REQUIRE(bms_body_measure(b, leb, &v) == BMS_OK);
    CHECK(v == doctest::Approx(M_PI).epsilon(1e-12));

    double q[3];
    REQUIRE(bms_body_quermassintegrals(b, q, 3) == BMS_OK);
    CHECK(q[1] == doctest::Approx(M_PI));
    CHECK(bms_body_quermassintegrals(b, q, 2) == BMS_ERR_INVALID_ARGUMENT);

    double mc = 0.0, se = 0.0;
    REQUIRE(bms_mc_measure(leb, b, 200000, 5, &mc, &se) == BMS_OK);
    CHECK(std::abs(mc - M_PI) < 4 * se);

    bms_body_destroy(b);
    bms_measure_destroy(leb);
    bms_function_destroy(h);
    bms_grid_destroy(g);
}

TEST_CASE("function algebra and evaluation") {
    const double c[3] = {0.0, 0.0, 1.0};
    bms_function *f = nullptr, *e = nullptr, *s = nullptr;
    REQUIRE(bms_function_trig(3, c, 0, nullptr, &f) == BMS_OK);
    REQUIRE(bms_function_scale(f, 0.5, &s) == BMS_OK);
    REQUIRE(bms_function_exp(s, &e) == BMS_OK);
    const double u[2] = {1.0, 0.0};
    double out = 0.0;
    REQUIRE(bms_function_eval(e, u, &out) == BMS_OK);
    CHECK(out == doctest::Approx(std::exp(0.5)));

    bms_grid* g = nullptr;
    REQUIRE(bms_grid_create(2, 64, &g) == BMS_OK);
    double ratio = 0.0;
    REQUIRE(bms_poincare_ratio(f, g, &ratio) == BMS_OK);
    CHECK(ratio == doctest::Approx(4.0));

    const double coef[2] = {1.0, 0.5};
    const int pw[6] = {0, 0, 2, 1, 1, 0};
    bms_function* p = nullptr;
    REQUIRE(bms_function_polynomial(3, 2, coef, pw, &p) == BMS_OK);
    const double v[3] = {0.6, 0.0, 0.8};
    REQUIRE(bms_function_eval(p, v, &out) == BMS_OK);
    CHECK(out == doctest::Approx(0.64));

    for (bms_function* x : {f, s, e, p}) bms_function_destroy(x);
    bms_grid_destroy(g);
}

TEST_CASE("errors map to status codes with witnesses") {
    bms_grid* g = nullptr;
    CHECK(bms_grid_create(9, 8, &g) == BMS_ERR_INVALID_ARGUMENT);
    CHECK(std::string(bms_last_error_message()).size() > 0);

    REQUIRE(bms_grid_create(2, 64, &g) == BMS_OK);
    const double c[3] = {1.0, 0.0, 0.5};
    bms_function* h = nullptr;
    REQUIRE(bms_function_trig(3, c, 0, nullptr, &h) == BMS_OK);
    bms_body* b = nullptr;
    CHECK(bms_body_create(h, g, &b) == BMS_ERR_NOT_CONVEX);
    CHECK(b == nullptr);
    CHECK(bms_last_error_node() >= 0);
    CHECK(std::string(bms_status_string(BMS_ERR_NOT_CONVEX)) == "not convex");

    CHECK(bms_body_measure(nullptr, nullptr, nullptr) == BMS_ERR_INVALID_ARGUMENT);

    bms_measure* m = nullptr;
    CHECK(bms_measure_custom(rising, rising, rising, nullptr, "rising", 1, &m) == BMS_ERR_INVALID_MEASURE);
    CHECK(std::isfinite(bms_last_error_value()));
    CHECK(bms_measure_exp_power(0.5, &m) == BMS_ERR_INVALID_MEASURE);

    bms_function_destroy(h);
    bms_grid_destroy(g);
}

TEST_CASE("custom measures through callbacks") {
    bms_measure* m = nullptr;
    REQUIRE(bms_measure_custom(gauss_f, gauss_df, gauss_d2f, nullptr, "gauss-cb", 1, &m) == BMS_OK);
    double mom[3];
    REQUIRE(bms_measure_moments(m, 1.0, 2, mom) == BMS_OK);
    CHECK(mom[0] == doctest::Approx(1 - std::exp(-0.5)).epsilon(1e-12));
    double r1 = 1, r2 = 1;
    REQUIRE(bms_measure_identity_residuals(m, 2.0, 3, &r1, &r2) == BMS_OK);
    CHECK(r1 < 1e-10);
    CHECK(r2 < 1e-10);

    double scale = -2.0;
    bms_measure* bad = nullptr;
    REQUIRE(bms_measure_custom(gauss_f, wrong_df, gauss_d2f, &scale, "corrupted", 0, &bad) == BMS_OK);
    const bms_measure* extra[1] = {bad};
    int code = -1;
    std::vector<std::string> lines;
    REQUIRE(bms_verify_identities(2, 0, 0, extra, 1, collect, &lines, &code) == BMS_OK);
    CHECK(code == 2);
    bool flagged = false;
    for (const std::string& l : lines) flagged = flagged || (l.rfind("FAIL", 0) == 0 && l.find("corrupted") != std::string::npos);
    CHECK(flagged);

    code = -1;
    REQUIRE(bms_verify_identities(2, 0, 0, nullptr, 0, nullptr, nullptr, &code) == BMS_OK);
    CHECK(code == 0);
    bms_measure_destroy(m);
    bms_measure_destroy(bad);
}

TEST_CASE("config and run entry points") {
    bms_config* c = nullptr;
    CHECK(bms_config_parse("{\"schema_version\": 1, \"nn\": 2}", &c) == BMS_ERR_CONFIG);
    CHECK(std::string(bms_last_error_message()).find("nn") != std::string::npos);
    CHECK(bms_config_parse("not json", &c) == BMS_ERR_CONFIG);

    const char* text = R"({"schema_version": 1, "perturbation": {"expansion": {"constant": 1.0}},
                           "checks": ["shift_counterexample", "minkowski_second"]})";
    REQUIRE(bms_config_parse(text, &c) == BMS_OK);
    const std::string js = bms_config_to_json(c);
    bms_config* c2 = nullptr;
    REQUIRE(bms_config_parse(js.c_str(), &c2) == BMS_OK);
    CHECK(std::string(bms_config_to_json(c2)) == js);

    int code = -1;
    std::vector<std::string> lines;
    REQUIRE(bms_run(c, "capi_run_out", 0, collect, &lines, &code) == BMS_OK);
    CHECK(code == 0);
    CHECK(lines.size() == 2);

    code = -1;
    REQUIRE(bms_demo_shift(0.3, 0.5, nullptr, nullptr, &code) == BMS_OK);
    CHECK(code == 0);
    CHECK(bms_demo_shift(1.5, 0.5, nullptr, nullptr, &code) == BMS_ERR_INVALID_ARGUMENT);

    CHECK(bms_check_count() == 10);
    CHECK(std::string(bms_check_name(0)) == "dim_bm_infinitesimal");
    CHECK(bms_check_name(10) == nullptr);
    bms_config_destroy(c);
    bms_config_destroy(c2);
}
