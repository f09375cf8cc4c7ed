// SPDX-License-Identifier: Apache-2.0
// Command-line front end; talks to the library only through the C API.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "bmstab/bmstab.h"

namespace {

void print_line(const char* line, void*) { std::printf("%s\n", line); }

int report_error(bms_status s) {
    std::fprintf(stderr, "error (%s): %s\n", bms_status_string(s), bms_last_error_message());
    return 1;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool svg) {
    bms_config* cfg = nullptr;
    bms_status s = bms_config_load(config_path.c_str(), &cfg);
    if (s != BMS_OK) return report_error(s);
    int code = 1;
    s = bms_run(cfg, out_dir.empty() ? nullptr : out_dir.c_str(), svg ? 1 : 0, print_line, nullptr, &code);
    bms_config_destroy(cfg);
    if (s != BMS_OK) return report_error(s);
    return code;
}

int cmd_identities(int n, int resolution, bool sweep) {
    int code = 1;
    const bms_status s = bms_verify_identities(n, resolution, sweep ? 1 : 0, nullptr, 0, print_line, nullptr, &code);
    if (s != BMS_OK) return report_error(s);
    return code;
}

int cmd_shift(double t, double lambda) {
    int code = 1;
    const bms_status s = bms_demo_shift(t, lambda, print_line, nullptr, &code);
    if (s != BMS_OK) return report_error(s);
    return code;
}

int cmd_list() {
    for (size_t i = 0; i < bms_check_count(); ++i) std::printf("%-24s %s\n", bms_check_name(i), bms_check_description(i));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical stability checks for Brunn-Minkowski type inequalities"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(bms_version()));

    std::string config_path, out_dir;
    bool svg = false;
    auto* run = app.add_subcommand("run", "Run the checks listed in a JSON config");
    run->add_option("--config", config_path, "Config file")->required();
    run->add_option("--out", out_dir, "Output directory (overrides the config)");
    run->add_flag("--svg", svg, "Also write margins.svg");

    int n = 2, resolution = 0;
    bool sweep = false;
    auto* ident = app.add_subcommand("verify-identities", "Structural identity suite");
    ident->add_option("--n", n, "Dimension")->check(CLI::Range(2, 6));
    ident->add_option("--resolution", resolution, "Grid resolution (0 = default for n)");
    ident->add_flag("--sweep", sweep, "Also check convergence over resolutions 24, 48, 96");

    double t = 0.3, lambda = 0.5;
    auto* shift = app.add_subcommand("demo-shift", "Shifted-disk log-BM counterexample");
    shift->add_option("--t", t, "Shift of the first disk")->check(CLI::Range(0.0, 0.999999));
    shift->add_option("--lambda", lambda, "Interpolation weight")->check(CLI::Range(0.0, 1.0));

    auto* list = app.add_subcommand("list-checks", "List check ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (*run) return cmd_run(config_path, out_dir, svg);
    if (*ident) return cmd_identities(n, resolution, sweep);
    if (*shift) return cmd_shift(t, lambda);
    if (*list) return cmd_list();
    return 1;
}
