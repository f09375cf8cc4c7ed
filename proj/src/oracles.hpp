// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bodies.hpp"
#include "measures.hpp"

namespace bms {

/// Central difference of order 1 or 2 at s0. With richardson = true the
/// step-h and step-2h estimates are combined to cancel the h^2 term.
double finite_diff(const std::function<double(double)>& fn, double s0, int order, double step,
                   bool richardson = false);

struct PlanarBody {
    std::vector<std::array<double, 2>> vertices;  ///< counterclockwise
    double area() const;
};

/// Intersection of the half-planes {x : <x, (cos t_i, sin t_i)> <= h_i} for
/// equally spaced angles t_i = 2 pi i / N. Orientation tests are exact: the
/// lines are rounded to integers on a 2^30 scale and evaluated in 128-bit
/// arithmetic. Needs N >= 720 and h > 0.
PlanarBody wulff_polygon(std::span<const double> h);
/// Samples f at N equally spaced angles and builds the polygon.
PlanarBody wulff_polygon(const std::function<double(double)>& h_of_angle, int directions);

struct McEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// SplitMix64 output for a 64-bit counter: a stateless counter-based generator.
std::uint64_t splitmix64(std::uint64_t x);
/// Uniform double in [0, 1) for stream (seed, index).
double uniform01(std::uint64_t seed, std::uint64_t index);

/// Monte Carlo estimate of gamma(K): uniform samples in the ball of radius
/// 1.05 * max h * sqrt(1 + max |grad h / h|^2), membership x in K iff
/// max_u <x, u> - h(u) <= 0, decided on a coarse direction set with a
/// covering-radius certificate and refined by Riemannian Newton steps.
/// The estimate is independent of the thread count.
McEstimate mc_measure(const RadialMeasure& gamma, const Body& K, std::uint64_t samples, std::uint64_t seed);

/// Membership oracle used by mc_measure, exposed for testing.
class SupportMembership {
public:
    explicit SupportMembership(const Body& K);
    /// max_u <x, u> - h(u) (exact up to the refinement tolerance when near 0).
    double gap(std::span<const double> x) const;
    bool contains(std::span<const double> x) const { return gap(x) <= 0.0; }
    double covering_radius() const { return delta_; }
    double band() const { return tau_; }

private:
    double refine(std::span<const double> x, std::span<const double> u0) const;

    SphericalFunction h_;
    int n_;
    std::vector<double> dirs_;
    std::vector<double> hv_;
    double delta_ = 0.0;
    double tau_ = 0.0;
};

}  // namespace bms
