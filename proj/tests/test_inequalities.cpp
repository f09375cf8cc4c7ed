// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <set>

#include "bodies.hpp"
#include "errors.hpp"
#include "inequalities.hpp"
#include "oracle_util.hpp"

using namespace bms;

namespace {

SphericalFunction trig(std::vector<double> c, std::vector<double> s = {}) { return SphericalFunction::trig(c, s); }

}  // namespace

TEST_CASE("check ids round-trip through their names") {
    CHECK(all_checks().size() == 10);
    for (CheckId id : all_checks()) {
        REQUIRE(check_from_string(to_string(id)).has_value());
        CHECK(*check_from_string(to_string(id)) == id);
    }
    CHECK_FALSE(check_from_string("nope").has_value());
}

TEST_CASE("report finalization") {
    VerificationReport r;
    r.margin = -1e-11;
    r.tolerance = 1e-10;
    r.finalize();
    CHECK(r.pass);
    r.margin = -1e-3;
    r.finalize();
    CHECK_FALSE(r.pass);
    CHECK(r.counts_as_failure());
    r.expected_failure = true;
    r.finalize();
    CHECK(r.pass);
    r.expected_failure = false;
    r.exploratory = true;
    r.finalize();
    CHECK_FALSE(r.counts_as_failure());
    CHECK(std::isnan(r.detail("missing")));
}

TEST_CASE("dimensional BM, infinitesimal form") {
    const GridPtr g = build_grid(2, 64);
    const Body ball = body_from_support(SphericalFunction::constant(2, 1.0), g);
    const RadialMeasure leb = RadialMeasure::lebesgue(), gauss = RadialMeasure::gaussian();

    const VerificationReport eq = check_dim_bm_infinitesimal(make_family(FamilyKind::Additive, ball, SphericalFunction::constant(2, 1.0)), leb);
    CHECK(std::abs(eq.margin) <= 1e-10);
    CHECK(eq.pass);

    const VerificationReport z = check_dim_bm_infinitesimal(make_family(FamilyKind::Additive, ball, SphericalFunction::constant(2, 0.0)), gauss);
    CHECK(std::abs(z.margin) <= 1e-14);

    const VerificationReport p = check_dim_bm_infinitesimal(make_family(FamilyKind::Additive, ball, trig({1.0, 0.0, 0.2})), gauss);
    CHECK(p.margin > 0.0);
    CHECK(p.oracle_diff < 1e-5 * std::abs(p.detail("g0") * p.detail("g2")));

    const Body K = body_from_support(trig({1.0, 0.0, 0.05}), build_grid(2, 128));
    const VerificationReport k = check_dim_bm_infinitesimal(make_family(FamilyKind::Additive, K, trig({0.0, 0.0, 0.0, 0.0, 1.0})), gauss);
    CHECK(k.pass);
    CHECK(k.oracle_diff < 1e-4);
}

TEST_CASE("log-BM, infinitesimal form") {
    const GridPtr g = build_grid(2, 64);
    const Body ball = body_from_support(SphericalFunction::constant(2, 1.0), g);
    const RadialMeasure leb = RadialMeasure::lebesgue(), gauss = RadialMeasure::gaussian();
    const VerificationReport c = check_log_bm_infinitesimal(make_family(FamilyKind::Multiplicative, ball, SphericalFunction::constant(2, 1.5)), leb);
    CHECK(std::abs(c.margin) <= 1e-10);
    const VerificationReport one = check_log_bm_infinitesimal(make_family(FamilyKind::Multiplicative, ball, SphericalFunction::constant(2, 1.0)), gauss);
    CHECK(std::abs(one.margin) <= 1e-14);
    const VerificationReport e = check_log_bm_infinitesimal(make_family(FamilyKind::Multiplicative, ball, exp(trig({0, 0, 1}))), gauss);
    CHECK(e.margin >= 0.0);
    CHECK(e.oracle_diff < 1e-5);
    const VerificationReport odd = check_log_bm_infinitesimal(make_family(FamilyKind::Multiplicative, ball, exp(trig({0, 0.5}))), gauss);
    CHECK(odd.exploratory);
}

TEST_CASE("B1/B2 at the ball") {
    const GridPtr g = build_grid(2, 64);
    const RadialMeasure leb = RadialMeasure::lebesgue(), gauss = RadialMeasure::gaussian();
    const VerificationReport c1 = check_B1_B2(1.0, trig({0, 1}), leb, g);
    CHECK(std::abs(c1.detail("B1")) < 1e-14);
    CHECK(std::abs(c1.detail("B2")) < 1e-14);
    const VerificationReport c2 = check_B1_B2(1.0, trig({0, 0, 1}), gauss, g);
    CHECK(c2.detail("B1") < 0.0);
    CHECK(std::abs(c2.detail("B2")) < 1e-14);
    CHECK(c2.margin > 0.0);
    // (n-1) int psi^2 - int |psi'|^2 = pi - 4 pi; A f / |S| times that.
    const double A = 1 - std::exp(-0.5);
    const double expect = A * std::exp(-0.5) / (2 * M_PI) * (-3 * M_PI) + A * (-std::exp(-0.5)) / (2 * M_PI) * M_PI;
    CHECK(c2.detail("B1") == doctest::Approx(expect).epsilon(1e-12));
    const VerificationReport k = check_B1_B2(1.0, SphericalFunction::constant(2, 1.0), gauss, g);
    CHECK(k.margin >= 0.0);
    CHECK(k.detail("decomposition_holds") == 1.0);
    CHECK(c2.oracle_diff < 1e-6);
}

TEST_CASE("log-BM ball form") {
    const GridPtr g = build_grid(2, 64);
    const RadialMeasure gauss = RadialMeasure::gaussian();
    const VerificationReport r = check_logbm_ball_form(1.0, trig({0, 0, 1}), gauss, g);
    CHECK(r.margin > 0.0);
    CHECK(r.detail("case1_chain_holds") == 1.0);
    CHECK(r.detail("poincare_ratio_psi1") == doctest::Approx(4.0));
    CHECK(r.oracle_diff < 1e-6);
    CHECK(check_logbm_ball_form(1.0, SphericalFunction::constant(2, 0.7), gauss, g).margin >= 0.0);
    const VerificationReport odd = check_logbm_ball_form(1.0, trig({0, 1}), gauss, g);
    CHECK(odd.exploratory);
    CHECK_FALSE(odd.notes.empty());
}

TEST_CASE("scans") {
    const GridPtr g = build_grid(2, 64);
    const RadialMeasure gauss = RadialMeasure::gaussian();
    const ScanSpec spec{0.05, 20, 3};
    const std::vector<VerificationReport> rows = scan_dim_bm(gauss, 1.0, trig({1.0, 0.0, 0.3}), spec, g);
    CHECK(rows.size() == 9 * 21);
    std::set<std::pair<double, double>> pairs;
    for (const VerificationReport& r : rows) {
        pairs.insert({r.eps1, r.eps2});
        CHECK(r.margin >= -1e-10);
        if (r.eps1 == r.eps2) CHECK(std::abs(r.margin) < 1e-13);
    }
    CHECK(pairs.size() == 9);

    // Classical BM: Lebesgue margins are nonnegative for any direction.
    for (const VerificationReport& r : scan_dim_bm(RadialMeasure::lebesgue(), 1.0, trig({0.0, 0.5, 1.0}, {0.0, 0.0, 0.4}), spec, g))
        CHECK(r.margin >= -1e-12);

    for (const VerificationReport& r : scan_log_bm(gauss, 1.0, exp(trig({0, 0, 0.3})), spec, g)) CHECK(r.margin >= -1e-10);
    CHECK_THROWS_AS(scan_log_bm(gauss, 1.0, exp(trig({0, 0.3})), spec, g), Error);

    try {
        scan_dim_bm(gauss, 1.0, trig({0, 0, 1}), ScanSpec{0.5, 4, 2}, g);
        FAIL("scan beyond the validity radius accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutsideValidity);
        CHECK(std::string(e.what()).rfind("epsilon exceeds validity radius a=", 0) == 0);
    }
}

TEST_CASE("shifted disks") {
    const GridPtr g = build_grid(2, 256);
    const VerificationReport r0 = shift_counterexample(1.0, 0.0, 0.5, g);
    CHECK(std::abs(r0.margin) < 1e-5);
    CHECK_FALSE(r0.expected_failure);
    const VerificationReport r3 = shift_counterexample(1.0, 0.3, 0.5, g);
    CHECK(r3.expected_failure);
    CHECK(r3.margin < 0.0);
    CHECK(r3.pass);
    CHECK(r3.oracle_diff < 1e-4);
    // Independent value: area (1/2) int (h^2 - h'^2) of h = sqrt(1 + 0.3 cos t).
    const double ref = 0.5 * testref::periodic([](double t) {
        const double h = std::sqrt(1 + 0.3 * std::cos(t)), hp = -0.15 * std::sin(t) / h;
        return h * h - hp * hp;
    });
    CHECK(r3.lhs == doctest::Approx(ref).epsilon(1e-5));
    const VerificationReport r6 = shift_counterexample(1.0, 0.6, 0.5, g);
    CHECK(r6.margin < r3.margin);
    CHECK_THROWS(shift_counterexample(1.0, 0.3, 0.5, build_grid(3, 8)));
}

TEST_CASE("cone-measure form") {
    const GridPtr g = build_grid(2, 64);
    const Body disk = body_from_support(SphericalFunction::constant(2, 1.0), g);
    const VerificationReport c = check_cone_measure_form(disk, SphericalFunction::constant(2, 0.8));
    CHECK(std::abs(c.lhs) < 1e-12);
    CHECK(std::abs(c.margin) < 1e-12);
    const VerificationReport e = check_cone_measure_form(disk, trig({0, 0, 1}));
    CHECK(e.lhs == doctest::Approx(1.0));
    CHECK(e.rhs == doctest::Approx(2.0));
    CHECK(e.margin == doctest::Approx(1.0));
    CHECK(e.detail("cone_weight_sum") == doctest::Approx(1.0).epsilon(1e-13));
    const VerificationReport o = check_cone_measure_form(disk, trig({0, 1}));
    CHECK(o.lhs == doctest::Approx(1.0));
    CHECK(o.rhs == doctest::Approx(0.5));
    CHECK(o.margin == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(o.exploratory);
    CHECK_FALSE(o.counts_as_failure());

    const Body K = body_from_support(trig({1.0, 0.0, 0.05}), build_grid(2, 128));
    const VerificationReport k = check_cone_measure_form(K, trig({0.1, 0.0, 0.3}));
    CHECK(k.pass);
    CHECK(k.oracle_diff < 1e-5);
}

TEST_CASE("strengthened Minkowski and Minkowski's second inequality") {
    const GridPtr g = build_grid(2, 128);
    const Body disk = body_from_support(SphericalFunction::constant(2, 1.0), g);
    const VerificationReport d = check_strengthened_minkowski(disk);
    CHECK(std::abs(d.margin) < 1e-10);
    CHECK(d.detail("literal_margin") == doctest::Approx(M_PI * M_PI - M_PI * (1 + 2 * M_PI)));
    const VerificationReport k = check_strengthened_minkowski(body_from_support(trig({1.0, 0.0, 0.05}), g));
    CHECK(k.margin >= 0.0);
    CHECK(k.oracle_diff < 1e-4);

    const VerificationReport m = check_minkowski_second(disk);
    CHECK(std::abs(m.margin) < 1e-12);
    const VerificationReport m3 = check_minkowski_second(body_from_support(SphericalFunction::constant(3, 1.0), build_grid(3, 32)));
    CHECK(std::abs(m3.margin) < 1e-12);
    CHECK(check_minkowski_second(body_from_support(trig({1.0, 0.0, 0.1}), g)).margin > 0.0);
}
