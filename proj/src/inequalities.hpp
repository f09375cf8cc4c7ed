// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bodies.hpp"
#include "measures.hpp"
#include "variation.hpp"

namespace bms {

enum class CheckId {
    DimBmInfinitesimal,
    LogBmInfinitesimal,
    B1B2,
    LogBmBallForm,
    ScanDimBm,
    ScanLogBm,
    ShiftCounterexample,
    ConeMeasureForm,
    StrengthenedMinkowski,
    MinkowskiSecond,
};

const char* to_string(CheckId id);
std::optional<CheckId> check_from_string(const std::string& s);
const std::vector<CheckId>& all_checks();
const char* describe(CheckId id);

struct Detail {
    std::string name;
    double value = 0.0;
};

/// Outcome of one inequality evaluation. margin >= 0 means the inequality
/// holds. For expected-failure rows (negative demonstrations) `pass` means the
/// failure was demonstrated, i.e. margin < -tolerance. Exploratory rows are
/// evaluated outside the hypotheses of the corresponding theorem and do not
/// count towards a run's exit status.
struct VerificationReport {
    static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

    CheckId id = CheckId::DimBmInfinitesimal;
    int n = 0;
    int resolution = 0;
    double R = kNaN;
    std::string measure;
    std::string family;
    std::string direction;
    std::string parity;
    double eps1 = kNaN;
    double eps2 = kNaN;
    double lambda = kNaN;
    std::uint64_t seed = 0;

    double lhs = kNaN;
    double rhs = kNaN;
    double margin = kNaN;
    double tolerance = 1e-10;
    bool expected_failure = false;
    bool exploratory = false;
    bool pass = false;

    std::string oracle;
    double oracle_value = kNaN;
    double oracle_diff = kNaN;

    std::vector<Detail> details;
    std::vector<std::string> notes;

    /// Sets `pass` from margin, tolerance and expected_failure.
    void finalize();
    /// Value of a named detail, NaN when absent.
    double detail(const std::string& name) const;
    /// True when this row makes a run fail.
    bool counts_as_failure() const { return !pass && !exploratory; }
};

struct CheckOptions {
    double tolerance = 1e-10;
    double fd_step = 1e-3;
    int polygon_directions = 4096;
    bool oracle = true;
};

/// margin = ((n-1)/n) g'(0)^2 - g''(0) g(0) for an additive family.
VerificationReport check_dim_bm_infinitesimal(const PerturbationFamily& family, const RadialMeasure& gamma,
                                              const CheckOptions& opt = {});
/// margin = -(g''(0) g(0) - g'(0)^2) / g(0)^2 for a multiplicative family,
/// with g'' = g''_add + log_correction.
VerificationReport check_log_bm_infinitesimal(const PerturbationFamily& family, const RadialMeasure& gamma,
                                              const CheckOptions& opt = {});
/// margin = B2(psi) - B1(psi), plus the mean/centered decomposition.
VerificationReport check_B1_B2(double R, const SphericalFunction& psi, const RadialMeasure& gamma,
                               const GridPtr& grid, const CheckOptions& opt = {});
/// margin = RHS - LHS of the log-BM ball inequality, plus the Case-1 chain.
VerificationReport check_logbm_ball_form(double R, const SphericalFunction& psi, const RadialMeasure& gamma,
                                         const GridPtr& grid, const CheckOptions& opt = {});

struct ScanSpec {
    double eps_max = 0.05;
    int lambda_steps = 20;
    int eps_points = 5;
};

/// Rows over (eps1, eps2) in {eps_max k / P}^2 and lambda in {0, 1/steps, .., 1}:
/// gamma(comb)^{1/n} - lambda gamma(K1)^{1/n} - (1-lambda) gamma(K2)^{1/n}
/// with h_i = R + eps_i psi. Throws OutsideValidity when eps_max exceeds the
/// family's validity radius.
std::vector<VerificationReport> scan_dim_bm(const RadialMeasure& gamma, double R, const SphericalFunction& psi,
                                            const ScanSpec& scan, const GridPtr& grid, const CheckOptions& opt = {});
/// Same with h_i = R phi^{eps_i}, geometric combination and log gamma margins.
/// Throws InvalidArgument for a phi that is not even.
std::vector<VerificationReport> scan_log_bm(const RadialMeasure& gamma, double R, const SphericalFunction& phi,
                                            const ScanSpec& scan, const GridPtr& grid, const CheckOptions& opt = {});

/// n = 2: K = disk of radius R shifted by (t, 0), L = disk of radius R;
/// margin = |K^lambda L^{1-lambda}| - pi R^2 from the exact polygon.
VerificationReport shift_counterexample(double R, double t, double lambda, const GridPtr& grid,
                                        const CheckOptions& opt = {});

/// margin = RHS - LHS of the cone-measure form of the infinitesimal log-BM
/// inequality; also the weaker Brunn-Minkowski form and the Cauchy-Schwarz gap.
VerificationReport check_cone_measure_form(const Body& K, const SphericalFunction& psi, const CheckOptions& opt = {});

/// Calibrated form 4 V_{n-1}^2 - V_n (2 pi V_{n-2} + int det Q / h), equality on
/// balls; the literal printed form is reported as a detail.
VerificationReport check_strengthened_minkowski(const Body& K, bool unconditional = false,
                                                const CheckOptions& opt = {});

/// Sharp Minkowski second inequality in intrinsic-volume normalization,
/// V_n V_{n-2} <= 2(n-1)/(n pi) V_{n-1}^2; the (n-1)/n form is a detail.
VerificationReport check_minkowski_second(const Body& K, const CheckOptions& opt = {});

}  // namespace bms
