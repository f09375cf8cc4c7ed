// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "bodies.hpp"
#include "oracle_util.hpp"
#include "oracles.hpp"
#include "variation.hpp"

using namespace bms;

namespace {

Monomial mono(double c, std::initializer_list<std::pair<int, int>> pw) {
    Monomial m;
    m.coef = c;
    for (auto [k, p] : pw) m.pow[static_cast<std::size_t>(k)] += p;
    return m;
}

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int N) {
    std::uniform_real_distribution<double> U(-1, 1);
    Eigen::MatrixXd M(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) M(i, j) = M(j, i) = U(rng);
    return M;
}

}  // namespace

TEST_CASE("cofactor matrix of small matrices") {
    Eigen::MatrixXd M(2, 2);
    M << 2.0, 0.5, 0.5, 3.0;
    const Eigen::MatrixXd C = cofactor_matrix(M);
    CHECK(C(0, 0) == 3.0);
    CHECK(C(0, 1) == -0.5);
    CHECK(C(1, 0) == -0.5);
    CHECK(C(1, 1) == 2.0);

    const CofactorData I = cofactor(Eigen::MatrixXd::Identity(3, 3));
    CHECK((I.c - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);
    CHECK(I.homog1_residual() < 1e-15);
}

TEST_CASE("cofactor matrix equals det times inverse") {
    std::mt19937_64 rng(3);
    for (int N = 2; N <= 6; ++N) {
        const Eigen::MatrixXd M = random_symmetric(rng, N);
        const Eigen::MatrixXd ref = M.determinant() * M.inverse();
        CHECK((cofactor_matrix(M) - ref).norm() < 1e-11 * (1 + ref.norm()));
    }
    Eigen::MatrixXd A(2, 2);
    A << 1.0, 2.0, 0.0, 1.0;
    CHECK_THROWS(cofactor(A));
}

TEST_CASE("second cofactors match finite differences of the determinant") {
    std::mt19937_64 rng(11);
    const int N = 4;
    const Eigen::MatrixXd M = random_symmetric(rng, N);
    const CofactorData cd = cofactor(M);
    const double h = 1e-4;
    double worst = 0.0, worst_h2 = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) {
                    auto det_at = [&](double a, double b) {
                        Eigen::MatrixXd P = M;
                        P(i, j) += a;
                        P(k, l) += b;
                        return P.determinant();
                    };
                    double fd;
                    if (i == k && j == l)
                        fd = 0.0;  // det is affine in each single entry
                    else
                        fd = (det_at(h, h) - det_at(h, -h) - det_at(-h, h) + det_at(-h, -h)) / (4 * h * h);
                    worst = std::max(worst, std::abs(fd - cd.second(i, j, k, l)));
                }
    CHECK(worst < 1e-6);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double s = 0.0;
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) s += cd.second(i, j, k, l) * M(k, l);
            worst_h2 = std::max(worst_h2, std::abs(s - (N - 1) * cd.c(i, j)));
        }
    CHECK(worst_h2 < 1e-12 * cd.scale());
}

TEST_CASE("Cheng-Yau residual") {
    CHECK(cheng_yau_residual(SphericalFunction::constant(3, 2.0), *build_grid(3, 16)) < 1e-13);
    CHECK(cheng_yau_residual(SphericalFunction::trig({1.0, 0.0, 0.1}), *build_grid(2, 32)) == 0.0);
    const SphericalFunction h = SphericalFunction::polynomial(3, {mono(0.1, {{2, 2}})}) + 1.0;
    CHECK(cheng_yau_residual(h, *build_grid(3, 48)) <= 1e-6);
    const SphericalFunction h4 = SphericalFunction::polynomial(4, {mono(0.1, {{0, 2}, {3, 2}}), mono(0.05, {{1, 1}, {2, 1}})}) + 1.0;
    CHECK(cheng_yau_residual(h4, *build_grid(4, 8)) <= 1e-6);
}

TEST_CASE("integration by parts") {
    const GridPtr g3 = build_grid(3, 24);
    const SphericalFunction h = SphericalFunction::polynomial(3, {mono(0.05, {{0, 2}})}) + 1.0;
    const SphericalFunction psi = SphericalFunction::polynomial(3, {mono(1, {{1, 2}})});
    const SphericalFunction phi = SphericalFunction::polynomial(3, {mono(1, {{2, 2}})});
    const auto [same1, same2] = ibp_residuals(h, psi, psi, *g3);
    CHECK(same1 < 1e-14);
    CHECK(same2 < 1e-14);
    const auto [r1, r2] = ibp_residuals(h, psi, phi, *g3);
    CHECK(r1 < 1e-8);
    CHECK(r2 < 1e-8);

    // n = 2, h = 1, psi = cos 2t, phi = 1: int (psi'' + psi) = -3 int cos 2t = 0 = int psi.
    const auto [p1, p2] = ibp_residuals(SphericalFunction::constant(2, 1.0), SphericalFunction::trig({0, 0, 1}),
                                        SphericalFunction::constant(2, 1.0), *build_grid(2, 64));
    CHECK(p1 < 1e-10);
    CHECK(p2 < 1e-10);
}

TEST_CASE("g along ball families") {
    const GridPtr g = build_grid(2, 64);
    const Body ball = body_from_support(SphericalFunction::constant(2, 1.0), g);
    const PerturbationFamily fam = make_family(FamilyKind::Additive, ball, SphericalFunction::constant(2, 1.0));
    CHECK(g_eval(fam, RadialMeasure::lebesgue(), 0.0) == doctest::Approx(M_PI));
    CHECK(g_eval(fam, RadialMeasure::lebesgue(), 0.5) == doctest::Approx(2.25 * M_PI));
    CHECK(g_eval(fam, RadialMeasure::gaussian(), 0.2) == doctest::Approx(2 * M_PI * (1 - std::exp(-0.72))).epsilon(1e-10));
}

TEST_CASE("first variation against finite differences") {
    const GridPtr g = build_grid(2, 128);
    const RadialMeasure gauss = RadialMeasure::gaussian();
    const Body K = body_from_support(SphericalFunction::trig({1.0, 0.0, 0.1}), g);
    const SphericalFunction psi = SphericalFunction::trig({0.0, 0.0, 1.0});
    const PerturbationFamily fam = make_family(FamilyKind::Additive, K, psi);
    const double fd = finite_diff([&](double s) { return g_eval(fam, gauss, s); }, 0.0, 1, 1e-3);
    CHECK(testref::rel(first_variation(K, psi, gauss), fd) < 1e-5);
    CHECK(first_variation(K, SphericalFunction::constant(2, 0.0), gauss) == 0.0);

    const Body ball = body_from_support(SphericalFunction::constant(2, 1.3), g);
    const SphericalFunction q = SphericalFunction::trig({0.5, 0.2, 0.3});
    CHECK(first_variation(ball, q, gauss) == doctest::Approx(g_prime_ball(1.3, q, gauss, *g)).epsilon(1e-12));
}

TEST_CASE("variation at the ball: closed forms") {
    const GridPtr g = build_grid(2, 64);
    const RadialMeasure leb = RadialMeasure::lebesgue(), gauss = RadialMeasure::gaussian();
    const SphericalFunction one = SphericalFunction::constant(2, 1.0), c1 = SphericalFunction::trig({0, 1});
    CHECK(g_prime_ball(1.0, one, leb, *g) == doctest::Approx(2 * M_PI));
    CHECK(std::abs(g_prime_ball(1.0, c1, leb, *g)) < 1e-14);
    CHECK(g_prime_ball(1.0, one, gauss, *g) == doctest::Approx(2 * M_PI * std::exp(-0.5)));
    CHECK(g_second_ball(1.0, one, leb, *g) == doctest::Approx(2 * M_PI));
    CHECK(std::abs(g_second_ball(1.0, c1, leb, *g)) < 1e-13);
    CHECK(g_second_ball(1.0, c1, gauss, *g) == doctest::Approx(-M_PI * std::exp(-0.5)));
    CHECK(g_second_ball_moments(1.0, c1, gauss, *g) == doctest::Approx(-M_PI * std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("variation at the ball against finite differences") {
    for (int n : {2, 3}) {
        const GridPtr g = build_grid(n, n == 2 ? 64 : 32);
        const SphericalFunction psi =
            n == 2 ? SphericalFunction::trig({0.3, 0.0, 1.0}, {0.0, 0.5})
                   : SphericalFunction::polynomial(3, {mono(1, {{0, 1}, {1, 1}}), mono(0.4, {{2, 1}})}) + 0.3;
        for (double R : {0.7, 1.5}) {
            const Body ball = body_from_support(SphericalFunction::constant(n, R), g);
            const PerturbationFamily fam = make_family(FamilyKind::Additive, ball, psi);
            const RadialMeasure gam = RadialMeasure::exp_power(1.0);
            const VariationAtBall v = variation_at_ball(R, psi, gam, *g);
            auto gs = [&](double s) { return g_eval(fam, gam, s); };
            CHECK(std::abs(v.gprime - finite_diff(gs, 0, 1, 1e-3)) / v.g0 < 1e-5);
            CHECK(std::abs(v.gsecond - finite_diff(gs, 0, 2, 1e-3)) / v.g0 < 1e-5);
            CHECK(std::abs(v.gsecond - v.gsecond_moments) < 1e-10 * v.g0);
        }
    }
}

TEST_CASE("correction term for multiplicative families") {
    const GridPtr g = build_grid(2, 64);
    const RadialMeasure gauss = RadialMeasure::gaussian();
    const Body ball = body_from_support(SphericalFunction::constant(2, 1.0), g);
    CHECK(log_correction(ball, SphericalFunction::constant(2, 1.0), gauss) ==
          doctest::Approx(2 * M_PI * std::exp(-0.5)));
    CHECK(log_correction(ball, SphericalFunction::constant(2, 0.0), gauss) == 0.0);

    // g''_mult - g''_add equals the correction, both sides by finite differences.
    auto check_body = [&](const Body& K, const SphericalFunction& phi) {
        const PerturbationFamily mult = make_family(FamilyKind::Multiplicative, K, phi);
        const SphericalFunction psi = K.support() * log(phi);
        const PerturbationFamily add = make_family(FamilyKind::Additive, K, psi);
        const double diff = g_second_fd(mult, gauss, 0, 1e-3) - g_second_fd(add, gauss, 0, 1e-3);
        CHECK(testref::rel(log_correction(K, psi, gauss), diff) < 1e-4);
    };
    check_body(body_from_support(SphericalFunction::trig({1.0, 0.0, 0.1}), g), exp(SphericalFunction::trig({0.2, 0.0, 0.5})));
    const GridPtr g3 = build_grid(3, 32);
    check_body(body_from_support(SphericalFunction::constant(3, 2.0), g3),
               exp(SphericalFunction::polynomial(3, {mono(0.5, {{2, 2}})}) + 0.1));
}
