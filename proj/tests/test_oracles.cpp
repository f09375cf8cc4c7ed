// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "bodies.hpp"
#include "oracle_util.hpp"
#include "oracles.hpp"

using namespace bms;

TEST_CASE("finite differences") {
    CHECK(finite_diff([](double s) { return s * s; }, 0.3, 2, 1e-3) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(finite_diff([](double s) { return M_PI * (1 + s) * (1 + s); }, 0.0, 1, 1e-3) ==
          doctest::Approx(2 * M_PI).epsilon(1e-12));
    auto g = [](double s) { return 2 * M_PI * (1 - std::exp(-(1 + s) * (1 + s) / 2)); };
    CHECK(finite_diff(g, 0.0, 1, 1e-3) == doctest::Approx(2 * M_PI * std::exp(-0.5)).epsilon(1e-6));
    CHECK(finite_diff(g, 0.0, 1, 1e-2, true) == doctest::Approx(2 * M_PI * std::exp(-0.5)).epsilon(1e-8));
}

TEST_CASE("Wulff polygon of the unit disk") {
    for (int N : {720, 1024, 4096}) {
        const PlanarBody p = wulff_polygon([](double) { return 1.0; }, N);
        CHECK(p.vertices.size() == static_cast<std::size_t>(N));
        // Circumscribed regular N-gon.
        CHECK(p.area() == doctest::Approx(N * std::tan(M_PI / N)).epsilon(1e-13));
    }
    CHECK(wulff_polygon([](double) { return 1.0; }, 1024).area() - M_PI < 1e-5);
}

TEST_CASE("Wulff polygon of a shifted disk and a square") {
    const PlanarBody p = wulff_polygon([](double t) { return 1.0 + 0.3 * std::cos(t); }, 4096);
    CHECK(std::abs(p.area() - M_PI) < 1e-5);
    // Support function of [-1,1]^2 sampled at 4k directions is exact.
    const PlanarBody sq = wulff_polygon([](double t) { return std::abs(std::cos(t)) + std::abs(std::sin(t)); }, 720);
    CHECK(sq.area() == doctest::Approx(4.0).epsilon(1e-12));
    // Geometric mean of two shifted disks has area below pi.
    const PlanarBody gm = wulff_polygon([](double t) { return std::sqrt(1 - 0.09 * std::cos(t) * std::cos(t)); }, 4096);
    CHECK(gm.area() < M_PI);
    const double ref = 0.5 * testref::periodic([](double t) {
        const double c = std::cos(t), h = std::sqrt(1 - 0.09 * c * c), hp = 0.09 * c * std::sin(t) / h;
        return h * h - hp * hp;
    });
    CHECK(std::abs(gm.area() - ref) < 1e-5);
}

TEST_CASE("counter-based uniforms") {
    CHECK(uniform01(5, 17) == uniform01(5, 17));
    CHECK(uniform01(5, 17) != uniform01(6, 17));
    double mean = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = uniform01(9, static_cast<std::uint64_t>(i));
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        mean += u;
    }
    CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("support membership") {
    const Body ball = body_from_support(SphericalFunction::constant(3, 2.0), build_grid(3, 16));
    const SupportMembership m(ball);
    const double r3 = 1.0 / std::sqrt(3.0);
    const double in[3] = {1.98 * r3, 1.98 * r3, 1.98 * r3}, out[3] = {2.01 * r3, 2.01 * r3, 2.01 * r3};
    const double far[3] = {3.0, 0.0, 0.0};
    CHECK(m.contains(in));
    CHECK_FALSE(m.contains(out));
    CHECK_FALSE(m.contains(far));
    CHECK(m.gap(in) == doctest::Approx(-0.02).epsilon(1e-6));
    // Outside points keep the coarse value, a lower bound for the true gap.
    CHECK(m.gap(out) > 0.0);
    CHECK(m.gap(out) <= 0.01 + 1e-12);
    CHECK(m.covering_radius() > 0.0);

    const Body shifted = body_from_support(SphericalFunction::trig({1.0, 0.3}), build_grid(2, 128));
    const SupportMembership s(shifted);
    const double a[2] = {1.25, 0.0}, b[2] = {-0.65, 0.0}, c[2] = {1.31, 0.0}, d[2] = {-0.75, 0.0};
    CHECK(s.contains(a));
    CHECK(s.contains(b));
    CHECK_FALSE(s.contains(c));
    CHECK_FALSE(s.contains(d));
}

TEST_CASE("Monte Carlo measure") {
    const Body disk = body_from_support(SphericalFunction::constant(2, 1.0), build_grid(2, 64));
    const McEstimate leb = mc_measure(RadialMeasure::lebesgue(), disk, 1000000, 42);
    CHECK(std::abs(leb.value - M_PI) < 4 * leb.standard_error);
    const McEstimate gau = mc_measure(RadialMeasure::gaussian(), disk, 1000000, 42);
    CHECK(std::abs(gau.value - 2 * M_PI * (1 - std::exp(-0.5))) < 4 * gau.standard_error);
    const McEstimate again = mc_measure(RadialMeasure::gaussian(), disk, 1000000, 42);
    CHECK(again.value == gau.value);
    CHECK(again.standard_error == gau.standard_error);
}

TEST_CASE("Monte Carlo estimate does not depend on the thread count") {
    const Body K = body_from_support(SphericalFunction::trig({1.0, 0.0, 0.1}), build_grid(2, 64));
    setenv("BM_STABILITY_THREADS", "1", 1);
    const McEstimate one = mc_measure(RadialMeasure::gaussian(), K, 50000, 3);
    setenv("BM_STABILITY_THREADS", "3", 1);
    const McEstimate three = mc_measure(RadialMeasure::gaussian(), K, 50000, 3);
    unsetenv("BM_STABILITY_THREADS");
    CHECK(one.value == three.value);
    CHECK(one.standard_error == three.standard_error);
}
