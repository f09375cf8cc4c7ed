// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "jet.hpp"

namespace bms {

enum class Parity { Even, Odd, Neither };

const char* to_string(Parity p);

struct Monomial {
    double coef = 0.0;
    std::array<int, kMaxDim> pow{};
};

namespace detail {
class FunctionNode;
}

/// A smooth scalar field on S^{n-1}, stored as an expression over an ambient
/// extension to R^n. Polynomials and their compositions with exp/log/pow are
/// differentiated exactly (forward mode); black-box evaluators fall back to
/// central differences of their 0-homogeneous extension.
///
/// Values are immutable and cheap to copy (shared expression graph).
class SphericalFunction {
public:
    SphericalFunction() = default;

    static SphericalFunction constant(int n, double c);
    static SphericalFunction coordinate(int n, int k);
    static SphericalFunction polynomial(int n, std::vector<Monomial> terms);
    /// n = 2 trigonometric polynomial sum_k a_k cos(k t) + b_k sin(k t), with
    /// u = (cos t, sin t); converted to an ambient polynomial.
    static SphericalFunction trig(std::vector<double> cos_coef, std::vector<double> sin_coef = {});
    /// Black-box evaluator on unit vectors. Off-sphere points are projected
    /// radially before evaluation.
    static SphericalFunction black_box(int n, std::function<double(std::span<const double>)> f,
                                       Parity declared = Parity::Neither, std::string label = "black_box");
    /// Spherical Laplacian of f, evaluated from f's exact second derivatives.
    static SphericalFunction laplacian_of(const SphericalFunction& f);

    explicit operator bool() const { return static_cast<bool>(node_); }

    int dim() const;
    Parity parity() const;
    /// True when no black-box node is present, i.e. all derivatives are exact
    /// and third derivatives (via Jet2<Dual>) are available.
    bool is_analytic() const;
    /// True for a constant expression; value() then returns it.
    bool is_constant() const;
    double constant_value() const;
    /// Human-readable expression, used in report parameter records.
    std::string describe() const;

    double operator()(std::span<const double> x) const;
    Jet2<double> jet(std::span<const double> x) const;
    Jet2<Dual> jet(std::span<const Dual> x) const;

    friend SphericalFunction operator+(const SphericalFunction& a, const SphericalFunction& b);
    friend SphericalFunction operator-(const SphericalFunction& a, const SphericalFunction& b);
    friend SphericalFunction operator*(const SphericalFunction& a, const SphericalFunction& b);
    friend SphericalFunction operator*(double s, const SphericalFunction& a);
    friend SphericalFunction operator+(const SphericalFunction& a, double c);
    friend SphericalFunction exp(const SphericalFunction& a);
    friend SphericalFunction log(const SphericalFunction& a);
    friend SphericalFunction pow(const SphericalFunction& a, double p);

private:
    explicit SphericalFunction(std::shared_ptr<const detail::FunctionNode> node) : node_(std::move(node)) {}
    const detail::FunctionNode& node() const;

    std::shared_ptr<const detail::FunctionNode> node_;
};

SphericalFunction operator-(const SphericalFunction& a);

}  // namespace bms
