// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "bodies.hpp"
#include "measures.hpp"

namespace bms {

inline constexpr int kMaxCofactorSize = 8;

/// Cofactor matrix c_ij = d det / d m_ij and the second-derivative tensor
/// c_ij,kl = d^2 det / d m_ij d m_kl of a symmetric matrix.
struct CofactorData {
    Eigen::MatrixXd m;
    Eigen::MatrixXd c;
    std::vector<double> tensor;  ///< N^4 entries, index ((i*N + j)*N + k)*N + l

    int size() const { return static_cast<int>(m.rows()); }
    double second(int i, int j, int k, int l) const;
    /// |sum c_ij m_ij - N det M|.
    double homog1_residual() const;
    /// max_ij |sum_kl c_ij,kl m_kl - (N - 1) c_ij|.
    double homog2_residual() const;
    /// Largest |entry| of M raised to N - 1, the scale of the cofactors.
    double scale() const;
};

/// Throws InvalidArgument for non-symmetric input (tolerance 1e-12 relative) or N > 8.
CofactorData cofactor(const Eigen::MatrixXd& m);
/// Cofactor matrix only.
Eigen::MatrixXd cofactor_matrix(const Eigen::MatrixXd& m);

/// max over nodes and columns j of |sum_i (c_ij(h))_i|, using exact third
/// derivatives of h. Throws Unsupported for black-box support functions.
double cheng_yau_residual(const SphericalFunction& h, const SphereGrid& grid);

/// Residuals of the two integration-by-parts identities:
///   int phi c_ij(h) Q(psi)_ij = int psi c_ij(h) Q(phi)_ij,
///   int psi c_ij,kl(h) Q(w)_ij Q(phi)_kl = int phi c_ij,kl(h) Q(w)_ij Q(psi)_kl,
/// with w = psi unless given.
std::pair<double, double> ibp_residuals(const SphericalFunction& h, const SphericalFunction& psi,
                                        const SphericalFunction& phi, const SphereGrid& grid,
                                        const SphericalFunction* w = nullptr);

/// g(s) = gamma(K_s).
double g_eval(const PerturbationFamily& family, const RadialMeasure& gamma, double s);

/// First variation F(h, psi) = d/ds gamma(h + s psi) at s = 0, from the
/// three-term formula with the moments A, B at D(u).
double first_variation(const Body& K, const SphericalFunction& psi, const RadialMeasure& gamma);

/// Lebesgue second variation int psi c_ij(h) Q(psi)_ij; exact because the
/// volume is a polynomial in s along h + s psi.
double g_second_volume(const Body& K, const SphericalFunction& psi);

/// g'(s) of an additive family (re-based at s). Throws Unsupported for
/// multiplicative families.
double g_prime_general(const PerturbationFamily& family, const RadialMeasure& gamma, double s = 0.0);

/// Central second difference of g at s with the given step.
double g_second_fd(const PerturbationFamily& family, const RadialMeasure& gamma, double s = 0.0,
                   double step = 1e-3);

/// g'(0) = R^{n-1} f(R) int psi.
double g_prime_ball(double R, const SphericalFunction& psi, const RadialMeasure& gamma, const SphereGrid& grid);
/// g''(0) = R^{n-2} f(R) ((n-1) int psi^2 - int |grad psi|^2) + R^{n-1} f'(R) int psi^2.
double g_second_ball(double R, const SphericalFunction& psi, const RadialMeasure& gamma, const SphereGrid& grid);
/// g''(0) = R^{n-2}(A n(n-1) + 2nRB + R^2 C) int psi^2 - R^{n-2}(nA + RB) int |grad psi|^2.
double g_second_ball_moments(double R, const SphericalFunction& psi, const RadialMeasure& gamma,
                             const SphereGrid& grid);

struct VariationAtBall {
    double R = 0.0;
    int n = 0;
    MomentTriple moments;
    double g0 = 0.0;       ///< |S^{n-1}| R^n A
    double gprime = 0.0;
    double gsecond = 0.0;  ///< f-form
    double gsecond_moments = 0.0;
};
VariationAtBall variation_at_ball(double R, const SphericalFunction& psi, const RadialMeasure& gamma,
                                  const SphereGrid& grid);

/// Correction A(h, psi) with g''_mult(0) = g''_add(0) + A(h, psi), where
/// psi = h log phi. Closed form R^{n-2} f(R) int psi^2 when h == R; otherwise
/// F(h, psi^2 / h), the derivative in s of F(h, psi + s psi^2 / h).
double log_correction(const Body& K, const SphericalFunction& psi, const RadialMeasure& gamma);
/// The same derivative taken by a central difference in s.
double log_correction_fd(const Body& K, const SphericalFunction& psi, const RadialMeasure& gamma,
                         double step = 1e-3);

}  // namespace bms
