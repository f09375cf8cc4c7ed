// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <utility>

namespace bms {

enum class MeasureKind { Gaussian, ExpPower, Lebesgue, Custom };

using RadialFn = std::function<double(double)>;

/// Rotation-invariant density F(x) = f(|x|). Densities are unnormalized.
class RadialMeasure {
public:
    /// f(r) = exp(-r^2 / 2).
    static RadialMeasure gaussian();
    /// f(r) = exp(-r^p), p >= 1.
    static RadialMeasure exp_power(double p);
    /// f == 1.
    static RadialMeasure lebesgue();
    /// User density with analytic first and second derivatives.
    static RadialMeasure custom(RadialFn f, RadialFn df, RadialFn d2f, std::string label = "custom");

    MeasureKind kind() const { return kind_; }
    double exponent() const { return p_; }
    /// "gaussian", "exp_power(3)", "lebesgue" or the custom label.
    std::string name() const;

    double f(double r) const;
    double df(double r) const;
    double d2f(double r) const;

private:
    MeasureKind kind_ = MeasureKind::Lebesgue;
    double p_ = 0.0;
    std::string label_;
    RadialFn f_, df_, d2f_;
};

struct MeasureSpec {
    MeasureKind kind = MeasureKind::Gaussian;
    double p = 1.0;
    RadialFn f, df, d2f;
    std::string label = "custom";
};

/// Builds and validates a measure. Throws Error(InvalidMeasure) naming the
/// offending radius (also stored as the error's witness value).
RadialMeasure make_measure(const MeasureSpec& spec);

/// Sampled admissibility checks on a log-spaced grid of [0, 100]:
/// f >= 0, f' <= 1e-12 and (log f)'' <= 1e-10 where f > 0.
void validate_measure(const RadialMeasure& m);

/// A = int_0^1 t^{n-1} f(tD) dt, B = int_0^1 t^n f'(tD) dt,
/// C = int_0^1 t^{n+1} f''(tD) dt.
struct MomentTriple {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double D = 0.0;
    int n = 0;
};

inline constexpr double kMomentTolerance = 1e-12;

MomentTriple moments(const RadialMeasure& m, double D, int n, double tol = kMomentTolerance);
/// Only A, for volume-type integrals evaluated at many nodes.
double moment_a(const RadialMeasure& m, double D, int n, double tol = kMomentTolerance);
/// A and B together.
std::pair<double, double> moment_ab(const RadialMeasure& m, double D, int n, double tol = kMomentTolerance);

/// (|f(R) - (nA + RB)|, |f'(R) - ((n+1)B + RC)|).
std::pair<double, double> moment_identities(const RadialMeasure& m, double R, int n);

/// Adaptive Gauss-Kronrod (10-point Gauss / 21-point Kronrod) integration
/// with interval bisection to an absolute tolerance. Throws QuadratureFailure
/// when the subdivision budget is exhausted.
double adaptive_integrate(const std::function<double(double)>& fn, double a, double b, double tol,
                          int max_depth = 30);

}  // namespace bms
