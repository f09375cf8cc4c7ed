// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "inequalities.hpp"
#include "measures.hpp"
#include "sphere_function.hpp"

namespace bms {

inline constexpr int kSchemaVersion = 1;

/// Expansion of a spherical function: constant + sum_k cos[k] cos(k t) +
/// sin[k] sin(k t) (n = 2 only) + ambient monomials restricted to the sphere.
struct ExpansionSpec {
    double constant = 0.0;
    std::vector<double> cos;
    std::vector<double> sin;
    std::vector<Monomial> monomials;
};

SphericalFunction build_expansion(const ExpansionSpec& e, int n);

struct Tolerances {
    double margin = 1e-10;
    double identity = 1e-8;
    double fd_step = 1e-3;
};

struct RunConfig {
    int schema_version = kSchemaVersion;
    int n = 2;
    int resolution = 64;
    MeasureKind measure = MeasureKind::Gaussian;
    double measure_p = 1.0;
    double R = 1.0;
    /// "additive": the expansion is psi. "multiplicative": the expansion is log phi.
    FamilyKind perturbation_kind = FamilyKind::Additive;
    ExpansionSpec expansion;
    /// Support function of the body used by body-level checks; absent means the ball of radius R.
    bool has_body = false;
    ExpansionSpec body;
    bool unconditional = false;
    double epsilon_max = 0.05;
    int lambda_steps = 20;
    int epsilon_points = 5;
    double shift_t = 0.3;
    double shift_lambda = 0.5;
    int polygon_directions = 4096;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    std::vector<CheckId> checks;
    Tolerances tolerances;
};

/// Throws Error(Config) whose message names the offending key.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::ordered_json to_json(const RunConfig& c);

RadialMeasure config_measure(const RunConfig& c);

using LineSink = std::function<void(const std::string&)>;

struct RunResult {
    int exit_code = 0;  ///< 0 all pass, 2 some check failed
    std::vector<VerificationReport> reports;
    std::string output_dir;
};

/// Runs the configured checks and writes report.csv, report.json and,
/// optionally, margins.svg. Throws Error(Config / OutsideValidity / Io) for
/// conditions that map to exit status 1.
RunResult run(const RunConfig& config, const std::string& out_override, bool svg, const LineSink& log);

/// Deterministic report serialization (no timestamp).
nlohmann::ordered_json reports_to_json(const std::vector<VerificationReport>& reports);
std::string reports_to_csv(const std::vector<VerificationReport>& reports, std::uint64_t seed);
std::string margins_svg(const std::vector<VerificationReport>& reports);

struct IdentityRow {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct IdentityOptions {
    int n = 2;
    int resolution = 0;  ///< 0: dimension default
    bool sweep = false;  ///< add the {24, 48, 96} refinement check
    std::vector<RadialMeasure> extra_measures;
    double tolerance = 1e-8;
};

/// Structural identity suite. Returns 0 when every residual is below its
/// tolerance and 2 otherwise; prints a table through `log`.
int verify_identities(const IdentityOptions& opt, const LineSink& log, std::vector<IdentityRow>* rows = nullptr);

/// Shifted-disk negative demonstration; 0 when the failure is demonstrated.
int demo_shift(double t, double lambda, const LineSink& log, VerificationReport* out = nullptr);

/// One line per check id with its description.
std::vector<std::string> list_checks();

}  // namespace bms
