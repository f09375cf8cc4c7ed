// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "jet.hpp"
#include "sphere_function.hpp"
#include "sphere_grid.hpp"

namespace bms {

using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

/// First and second order data of a spherical function at one node, computed
/// from the jet of any ambient extension F:
///   grad_sigma = (I - u u^T) grad F,
///   Q_ij = e_i^T D^2F e_j + (F - <u, grad F>) delta_ij   (tangent frame e),
///   lap_sigma = tr(D^2F) - u^T D^2F u - (n - 1) <u, grad F>.
struct LocalDerivatives {
    double value = 0.0;
    SmallVec grad;  ///< ambient spherical gradient, orthogonal to u
    SmallMat q;     ///< (n-1) x (n-1) matrix psi_ij + psi delta_ij in the frame
    double laplacian = 0.0;
};

LocalDerivatives local_derivatives(const Jet2<double>& jet, std::span<const double> u,
                                   std::span<const double> frame);

/// Jet of f at every grid node.
std::vector<Jet2<double>> node_jets(const SphericalFunction& f, const SphereGrid& grid);

/// Spherical gradient as an ambient vector tangent at u.
SmallVec spherical_gradient(const SphericalFunction& psi, std::span<const double> u);

/// Per-node curvature matrix Q(h;u) in the tangent frame of each node.
class CurvatureField {
public:
    CurvatureField() = default;
    CurvatureField(int n, std::vector<double> entries, std::vector<double> frames);

    int dim() const { return n_; }
    std::size_t size() const { return det_.size(); }
    /// (n-1) x (n-1) matrix at node k.
    SmallMat matrix(std::size_t k) const;
    std::span<const double> frame(std::size_t k) const;
    double det(std::size_t k) const { return det_[k]; }
    double min_eigenvalue(std::size_t k) const { return min_eig_[k]; }
    double trace(std::size_t k) const { return trace_[k]; }
    /// Smallest eigenvalue over the grid and the node where it is attained.
    std::pair<double, std::size_t> global_min() const;

private:
    int n_ = 0;
    std::vector<double> q_;
    std::vector<double> frames_;
    std::vector<double> det_, min_eig_, trace_;
};

CurvatureField curvature_matrix(const SphericalFunction& h, const SphereGrid& grid);
/// Same, but in caller-supplied frames (n*(n-1) doubles per node, column-major).
CurvatureField curvature_matrix(const SphericalFunction& h, const SphereGrid& grid,
                                std::span<const double> frames);

/// Determinant and smallest eigenvalue of a small symmetric matrix.
double small_det(const SmallMat& m);
double small_min_eigenvalue(const SmallMat& m);
/// All eigenvalues, ascending.
SmallVec small_eigenvalues(const SmallMat& m);

/// Laplace-Beltrami operator as a function (evaluated from exact second
/// derivatives of psi), and its samples on a grid.
SphericalFunction laplace_beltrami(const SphericalFunction& psi);
std::vector<double> laplace_beltrami_values(const SphericalFunction& psi, const SphereGrid& grid);

struct MeanSplit {
    double mean = 0.0;
    SphericalFunction centered;
};

/// psi = mean + centered, with the centered part integrating to zero.
MeanSplit split_mean(const SphericalFunction& psi, const SphereGrid& grid);

/// int |grad_sigma psi|^2 / int psi^2 for zero-mean psi.
double poincare_ratio(const SphericalFunction& psi, const SphereGrid& grid, double mean_tolerance = 1e-10);

/// Quadratic functionals used throughout: int psi, int psi^2, int |grad psi|^2.
struct DirichletData {
    double integral = 0.0;
    double l2 = 0.0;
    double dirichlet = 0.0;
};
DirichletData dirichlet_data(const SphericalFunction& psi, const SphereGrid& grid);

/// Parity detected from samples at antipodal node pairs.
Parity detect_parity(const SphericalFunction& f, const SphereGrid& grid, double tol = 1e-12);
/// max over antipodal pairs of |f(u) - f(-u)| / 2.
double odd_component(const SphericalFunction& f, const SphereGrid& grid);

}  // namespace bms
