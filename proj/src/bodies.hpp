// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "measures.hpp"
#include "sphere_function.hpp"
#include "sphere_grid.hpp"
#include "sphere_ops.hpp"

namespace bms {

/// Convex body of class C^{2,+} given by its support function, validated on a
/// grid: h > 0 and Q(h; u) positive definite at every node.
class Body {
public:
    const SphericalFunction& support() const { return h_; }
    const SphereGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    int dim() const { return grid_->dim(); }
    std::size_t size() const { return jets_.size(); }

    const Jet2<double>& jet(std::size_t k) const { return jets_[k]; }
    const std::vector<Jet2<double>>& jets() const { return jets_; }
    double h(std::size_t k) const { return jets_[k].v; }
    /// |grad H(u)| = sqrt(h^2 + |grad_sigma h|^2).
    double radius(std::size_t k) const { return radius_[k]; }
    const CurvatureField& curvature() const { return q_; }
    double min_eigenvalue() const { return min_eig_; }
    std::size_t min_eigenvalue_node() const { return min_node_; }
    /// h(u) = h(-u) at every antipodal node pair (tolerance 1e-12).
    bool symmetric() const { return symmetric_; }

private:
    friend Body body_from_jets(SphericalFunction h, GridPtr grid, std::vector<Jet2<double>> jets);

    SphericalFunction h_;
    GridPtr grid_;
    std::vector<Jet2<double>> jets_;
    std::vector<double> radius_;
    CurvatureField q_;
    double min_eig_ = 0.0;
    std::size_t min_node_ = 0;
    bool symmetric_ = false;
};

/// Throws NonPositiveSupport or NotConvex, with the witness node.
Body body_from_support(const SphericalFunction& h, const GridPtr& grid);
/// Same validation, with node jets already available (they must be the jets of h).
Body body_from_jets(SphericalFunction h, GridPtr grid, std::vector<Jet2<double>> jets);

/// lambda h_K + (1 - lambda) h_L.
Body minkowski_combine(const Body& K, const Body& L, double lambda);
/// h_K^lambda h_L^(1 - lambda), validated; NotConvex when it is not a support function.
Body log_combine(const Body& K, const Body& L, double lambda);

/// gamma(K) = int h det Q A(D) du with A(D) = int_0^1 t^{n-1} f(tD) dt.
double measure_of_body(const RadialMeasure& gamma, const Body& K);

/// Intrinsic volumes V_0 .. V_n.
std::vector<double> quermassintegrals(const Body& K);
/// Calibration constants c_j with V_j = c_j int e_j(Q) du, j = 0 .. n-1.
std::vector<double> quermass_constants(int n);
/// Intrinsic volumes of the unit ball: C(n, j) kappa_n / kappa_{n-j}.
std::vector<double> ball_intrinsic_volumes(int n);
/// Volume of the unit ball in R^m.
double unit_ball_volume(int m);

/// int det Q / h du, the boundary integral of 1 / <y, nu(y)>.
double boundary_inverse_height(const Body& K);

enum class FamilyKind { Additive, Multiplicative };
const char* to_string(FamilyKind k);

struct BisectionStep {
    double s = 0.0;
    bool valid = false;
};

/// h_s = h + s psi (additive) or h_s = h phi^s (multiplicative), s in [-a, a].
class PerturbationFamily {
public:
    FamilyKind kind() const { return kind_; }
    const Body& base() const { return base_; }
    /// psi for additive families, phi for multiplicative ones.
    const SphericalFunction& direction() const { return dir_; }
    /// Direction of the additive family with the same first-order behaviour:
    /// psi itself, or h log phi.
    SphericalFunction additive_direction() const;
    double radius() const { return a_; }
    int dim() const { return base_.dim(); }
    const std::vector<BisectionStep>& trace() const { return trace_; }

    /// Support function of K_s as an expression.
    SphericalFunction support_at(double s) const;
    /// Validated body K_s, composed from node jets. Throws OutsideValidity for |s| > a.
    Body at(double s) const;
    /// Unchecked node jets of h_s.
    std::vector<Jet2<double>> jets_at(double s) const;

private:
    friend PerturbationFamily make_family(FamilyKind, const Body&, const SphericalFunction&, double);

    FamilyKind kind_ = FamilyKind::Additive;
    Body base_;
    SphericalFunction dir_;
    std::vector<Jet2<double>> dir_jets_;  // psi, or log phi
    double a_ = 0.0;
    std::vector<BisectionStep> trace_;
};

inline constexpr double kValidityFloor = 0.05;
inline constexpr int kValiditySteps = 40;
inline constexpr double kDefaultMaxRadius = 0.5;

/// Validity radius: the largest a <= a_max (40 bisection steps) such that for
/// |s| <= a the smallest curvature eigenvalue stays >= 0.05 * base minimum and
/// h_s > 0. Throws DegenerateFamily when s = 1e-6 is already invalid.
PerturbationFamily make_family(FamilyKind kind, const Body& base, const SphericalFunction& direction,
                               double a_max = kDefaultMaxRadius);

}  // namespace bms
