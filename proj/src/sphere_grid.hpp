// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "sphere_function.hpp"

namespace bms {

enum class GridFamily { Periodic, GaussLegendreAzimuth, ProductHyperspherical };

/// Quadrature nodes and weights on S^{n-1}, with one orthonormal tangent frame
/// per node.
///
/// Families:
///  - n = 2: `resolution` equally spaced angles (exact for degree < resolution);
///  - n = 3: Gauss-Legendre in the polar cosine x 2*resolution azimuth angles;
///  - n >= 4: nested product rule, Gauss-Jacobi in each polar cosine.
/// For n >= 3 the declared exactness degree is 2*resolution - 1.
class SphereGrid {
public:
    int dim() const { return n_; }
    int resolution() const { return resolution_; }
    GridFamily family() const { return family_; }
    std::size_t size() const { return weights_.size(); }
    int exactness_degree() const { return degree_; }
    /// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
    double surface_measure() const { return area_; }

    std::span<const double> node(std::size_t k) const {
        return {nodes_.data() + k * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }
    double weight(std::size_t k) const { return weights_[k]; }
    std::span<const double> weights() const { return weights_; }
    /// Tangent frame at node k: n-1 columns of length n, stored column-major.
    std::span<const double> frame(std::size_t k) const {
        const std::size_t m = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ - 1);
        return {frames_.data() + k * m, m};
    }
    /// Index of the node at -u, or -1 when the grid has no antipodal partner.
    std::ptrdiff_t antipode(std::size_t k) const { return antipodes_[k]; }

private:
    friend std::shared_ptr<const SphereGrid> build_grid(int n, int resolution);

    int n_ = 0;
    int resolution_ = 0;
    int degree_ = 0;
    GridFamily family_ = GridFamily::Periodic;
    double area_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> frames_;
    std::vector<std::ptrdiff_t> antipodes_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

/// Smallest resolution accepted for any dimension.
inline constexpr int kMinResolution = 4;
int max_resolution(int n);

GridPtr build_grid(int n, int resolution);

double sphere_area(int n);

/// Deterministic orthonormal tangent frame at a unit vector (Householder
/// reflection about the dominant axis). Writes n*(n-1) doubles column-major.
void tangent_frame(std::span<const double> u, std::span<double> out);

/// Gauss-Jacobi rule on [-1, 1] for weight (1 - t^2)^alpha (Golub-Welsch).
void gauss_jacobi(int count, double alpha, std::vector<double>& nodes, std::vector<double>& weights);

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Sum_k w_k v_k, compensated.
double quadrature(const SphereGrid& grid, std::span<const double> values);

/// Sum_k w_k f(u_k).
double integrate(const SphericalFunction& f, const SphereGrid& grid);

/// f evaluated at every node.
std::vector<double> sample(const SphericalFunction& f, const SphereGrid& grid);

}  // namespace bms
