// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "measures.hpp"
#include "oracle_util.hpp"

using namespace bms;

TEST_CASE("densities and names") {
    const RadialMeasure g = RadialMeasure::gaussian();
    CHECK(g.f(1.0) == doctest::Approx(std::exp(-0.5)));
    CHECK(g.df(1.0) == doctest::Approx(-std::exp(-0.5)));
    CHECK(g.name() == "gaussian");
    const RadialMeasure l = RadialMeasure::lebesgue();
    CHECK(l.f(3.0) == 1.0);
    CHECK(l.df(3.0) == 0.0);
    CHECK(l.d2f(3.0) == 0.0);
    CHECK(RadialMeasure::exp_power(3.0).name() == "exp_power(3)");
    const RadialMeasure e3 = RadialMeasure::exp_power(3.0);
    CHECK(e3.d2f(0.7) == doctest::Approx((9 * std::pow(0.7, 4) - 6 * 0.7) * std::exp(-std::pow(0.7, 3))));
}

TEST_CASE("admissibility validation") {
    MeasureSpec s;
    s.kind = MeasureKind::Custom;
    s.f = [](double r) { return std::exp(r); };
    s.df = [](double r) { return std::exp(r); };
    s.d2f = [](double r) { return std::exp(r); };
    try {
        make_measure(s);
        FAIL("increasing density accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidMeasure);
        CHECK(std::string(e.what()).find("increasing") != std::string::npos);
        CHECK(std::isfinite(e.witness_value()));
    }

    // Non-increasing but log-convex: f = exp(-sqrt r).
    s.f = [](double r) { return std::exp(-std::sqrt(r)); };
    s.df = [](double r) { return r > 0 ? -0.5 / std::sqrt(r) * std::exp(-std::sqrt(r)) : 0.0; };
    s.d2f = [](double r) { return r > 0 ? (0.25 / r + 0.25 / std::pow(r, 1.5)) * std::exp(-std::sqrt(r)) : 0.0; };
    CHECK_THROWS_AS(make_measure(s), Error);

    MeasureSpec p;
    p.kind = MeasureKind::ExpPower;
    p.p = 0.5;
    CHECK_THROWS_AS(make_measure(p), Error);
    p.p = 2.0;
    CHECK_NOTHROW(make_measure(p));
}

TEST_CASE("moments against one-dimensional closed forms") {
    const MomentTriple leb = moments(RadialMeasure::lebesgue(), 1.7, 2);
    CHECK(leb.A == doctest::Approx(0.5));
    CHECK(leb.B == 0.0);
    CHECK(leb.C == 0.0);

    // int_0^1 t e^{-t} dt = 1 - 2/e.
    CHECK(moments(RadialMeasure::exp_power(1.0), 1.0, 2).A == doctest::Approx(1 - 2 * std::exp(-1.0)).epsilon(1e-12));
    // int_0^1 t e^{-t^2/2} dt = 1 - e^{-1/2}.
    CHECK(moments(RadialMeasure::gaussian(), 1.0, 2).A == doctest::Approx(1 - std::exp(-0.5)).epsilon(1e-12));

    // B and C against Simpson at D = 1.3, n = 3.
    const RadialMeasure g = RadialMeasure::gaussian();
    const double D = 1.3;
    const MomentTriple m = moments(g, D, 3);
    const double B = testref::simpson([&](double t) { return t * t * t * g.df(t * D); }, 0, 1);
    const double C = testref::simpson([&](double t) { return std::pow(t, 4) * g.d2f(t * D); }, 0, 1);
    CHECK(m.B == doctest::Approx(B).epsilon(1e-11));
    CHECK(m.C == doctest::Approx(C).epsilon(1e-11));
    CHECK(moment_a(g, D, 3) == doctest::Approx(m.A).epsilon(1e-14));
}

TEST_CASE("moment identities") {
    const auto [a, b] = moment_identities(RadialMeasure::lebesgue(), 1.0, 3);
    CHECK(a == 0.0);
    CHECK(b == 0.0);
    const auto [g1, g2] = moment_identities(RadialMeasure::gaussian(), 1.0, 2);
    CHECK(g1 < 1e-10);
    CHECK(g2 < 1e-10);
    const auto [e1, e2] = moment_identities(RadialMeasure::exp_power(1.0), 2.0, 3);
    CHECK(e1 < 1e-10);
    CHECK(e2 < 1e-10);
}

TEST_CASE("corrupted derivative breaks the identities") {
    const RadialMeasure bad = RadialMeasure::custom([](double r) { return std::exp(-r * r / 2); },
                                                    [](double r) { return -2.0 * r * std::exp(-r * r / 2); },
                                                    [](double r) { return (r * r - 1) * std::exp(-r * r / 2); });
    const auto [a, b] = moment_identities(bad, 1.0, 2);
    CHECK(std::max(a, b) > 1e-3);
}

TEST_CASE("adaptive integration") {
    CHECK(adaptive_integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-11));
    CHECK(adaptive_integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) == doctest::Approx(2.0));
}
