// SPDX-License-Identifier: Apache-2.0
#include "bmstab/bmstab.h"

#include <cmath>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "bodies.hpp"
#include "errors.hpp"
#include "measures.hpp"
#include "oracles.hpp"
#include "runner.hpp"
#include "sphere_grid.hpp"
#include "sphere_ops.hpp"

struct bms_grid {
    bms::GridPtr grid;
};
struct bms_function {
    bms::SphericalFunction f;
};
struct bms_measure {
    bms::RadialMeasure m;
};
struct bms_body {
    bms::Body body;
};
struct bms_config {
    bms::RunConfig config;
};

namespace {

struct LastError {
    std::string message;
    ptrdiff_t node = -1;
    double value = std::nan("");
};

thread_local LastError g_error;
thread_local std::string g_scratch;

void clear_error() { g_error = LastError{}; }

bms_status set_error(bms_status s, std::string msg, ptrdiff_t node = -1, double value = std::nan("")) {
    g_error.message = std::move(msg);
    g_error.node = node;
    g_error.value = value;
    return s;
}

template <class F>
bms_status guarded(F&& fn) {
    clear_error();
    try {
        fn();
        return BMS_OK;
    } catch (const bms::Error& e) {
        return set_error(-static_cast<int>(e.code()), e.what(), e.witness_node(), e.witness_value());
    } catch (const std::bad_alloc&) {
        return set_error(BMS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(BMS_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(BMS_ERR_INTERNAL, "unknown exception");
    }
}

void need(const void* p, const char* what) {
    if (!p) throw bms::Error(bms::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

bms::LineSink sink(bms_line_fn log, void* user) {
    if (!log) return {};
    return [log, user](const std::string& s) { log(s.c_str(), user); };
}

template <class T, class... A>
void emit(T** out, A&&... args) {
    need(out, "output handle");
    *out = new T{std::forward<A>(args)...};
}

}  // namespace

extern "C" {

const char* bms_version(void) { return "1.0.0"; }

const char* bms_status_string(bms_status s) {
    switch (s) {
    case BMS_OK: return "ok";
    case BMS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BMS_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case BMS_ERR_NON_POSITIVE_SUPPORT: return "non-positive support function";
    case BMS_ERR_NOT_CONVEX: return "not convex";
    case BMS_ERR_INVALID_MEASURE: return "invalid measure";
    case BMS_ERR_QUADRATURE_FAILURE: return "quadrature failure";
    case BMS_ERR_OUTSIDE_VALIDITY: return "outside validity radius";
    case BMS_ERR_DEGENERATE_FAMILY: return "degenerate family";
    case BMS_ERR_UNSUPPORTED: return "unsupported";
    case BMS_ERR_CONFIG: return "configuration error";
    case BMS_ERR_IO: return "i/o error";
    case BMS_ERR_INTERNAL: return "internal error";
    default: return "unknown status";
    }
}

const char* bms_last_error_message(void) { return g_error.message.c_str(); }
ptrdiff_t bms_last_error_node(void) { return g_error.node; }
double bms_last_error_value(void) { return g_error.value; }

// ---- grids

bms_status bms_grid_create(int n, int resolution, bms_grid** out) {
    return guarded([&] { emit(out, bms::build_grid(n, resolution)); });
}
void bms_grid_destroy(bms_grid* g) { delete g; }
size_t bms_grid_size(const bms_grid* g) { return g ? g->grid->size() : 0; }
int bms_grid_max_resolution(int n) {
    int r = 0;
    guarded([&] { r = bms::max_resolution(n); });
    return r;
}
bms_status bms_grid_integrate(const bms_grid* g, const bms_function* f, double* out) {
    return guarded([&] {
        need(g, "grid");
        need(f, "function");
        need(out, "out");
        *out = bms::integrate(f->f, *g->grid);
    });
}

// ---- functions

bms_status bms_function_constant(int n, double c, bms_function** out) {
    return guarded([&] { emit(out, bms::SphericalFunction::constant(n, c)); });
}
bms_status bms_function_coordinate(int n, int k, bms_function** out) {
    return guarded([&] { emit(out, bms::SphericalFunction::coordinate(n, k)); });
}
bms_status bms_function_polynomial(int n, size_t count, const double* coefs, const int* powers, bms_function** out) {
    return guarded([&] {
        if (count) {
            need(coefs, "coefs");
            need(powers, "powers");
        }
        if (n < 2 || n > bms::kMaxDim) throw bms::Error(bms::ErrorCode::InvalidArgument, "n must lie in [2, 6]");
        std::vector<bms::Monomial> terms(count);
        for (size_t i = 0; i < count; ++i) {
            terms[i].coef = coefs[i];
            for (int k = 0; k < n; ++k) terms[i].pow[static_cast<size_t>(k)] = powers[i * static_cast<size_t>(n) + k];
        }
        emit(out, bms::SphericalFunction::polynomial(n, std::move(terms)));
    });
}
bms_status bms_function_trig(size_t ncos, const double* cos_coef, size_t nsin, const double* sin_coef,
                             bms_function** out) {
    return guarded([&] {
        if (ncos) need(cos_coef, "cos_coef");
        if (nsin) need(sin_coef, "sin_coef");
        emit(out, bms::SphericalFunction::trig(std::vector<double>(cos_coef, cos_coef + ncos),
                                               std::vector<double>(sin_coef, sin_coef + nsin)));
    });
}
bms_status bms_function_add(const bms_function* a, const bms_function* b, bms_function** out) {
    return guarded([&] {
        need(a, "a");
        need(b, "b");
        emit(out, a->f + b->f);
    });
}
bms_status bms_function_mul(const bms_function* a, const bms_function* b, bms_function** out) {
    return guarded([&] {
        need(a, "a");
        need(b, "b");
        emit(out, a->f * b->f);
    });
}
bms_status bms_function_scale(const bms_function* a, double s, bms_function** out) {
    return guarded([&] {
        need(a, "a");
        emit(out, s * a->f);
    });
}
bms_status bms_function_exp(const bms_function* a, bms_function** out) {
    return guarded([&] {
        need(a, "a");
        emit(out, exp(a->f));
    });
}
void bms_function_destroy(bms_function* f) { delete f; }
bms_status bms_function_eval(const bms_function* f, const double* u, double* out) {
    return guarded([&] {
        need(f, "function");
        need(u, "u");
        need(out, "out");
        *out = f->f(std::span<const double>(u, static_cast<size_t>(f->f.dim())));
    });
}
bms_status bms_poincare_ratio(const bms_function* f, const bms_grid* g, double* out) {
    return guarded([&] {
        need(f, "function");
        need(g, "grid");
        need(out, "out");
        *out = bms::poincare_ratio(f->f, *g->grid);
    });
}

// ---- measures

bms_status bms_measure_gaussian(bms_measure** out) {
    return guarded([&] { emit(out, bms::RadialMeasure::gaussian()); });
}
bms_status bms_measure_exp_power(double p, bms_measure** out) {
    return guarded([&] {
        bms::MeasureSpec s;
        s.kind = bms::MeasureKind::ExpPower;
        s.p = p;
        emit(out, bms::make_measure(s));
    });
}
bms_status bms_measure_lebesgue(bms_measure** out) {
    return guarded([&] { emit(out, bms::RadialMeasure::lebesgue()); });
}
bms_status bms_measure_custom(bms_radial_fn f, bms_radial_fn df, bms_radial_fn d2f, void* user, const char* label,
                              int validate, bms_measure** out) {
    return guarded([&] {
        need(reinterpret_cast<const void*>(f), "f");
        need(reinterpret_cast<const void*>(df), "df");
        need(reinterpret_cast<const void*>(d2f), "d2f");
        auto wrap = [user](bms_radial_fn fn) { return [fn, user](double r) { return fn(r, user); }; };
        bms::RadialMeasure m =
            bms::RadialMeasure::custom(wrap(f), wrap(df), wrap(d2f), label ? std::string(label) : "custom");
        if (validate) bms::validate_measure(m);
        emit(out, std::move(m));
    });
}
void bms_measure_destroy(bms_measure* m) { delete m; }
bms_status bms_measure_density(const bms_measure* m, double r, double* out) {
    return guarded([&] {
        need(m, "measure");
        need(out, "out");
        *out = m->m.f(r);
    });
}
bms_status bms_measure_moments(const bms_measure* m, double D, int n, double out[3]) {
    return guarded([&] {
        need(m, "measure");
        need(out, "out");
        const bms::MomentTriple t = bms::moments(m->m, D, n);
        out[0] = t.A;
        out[1] = t.B;
        out[2] = t.C;
    });
}
bms_status bms_measure_identity_residuals(const bms_measure* m, double R, int n, double* r1, double* r2) {
    return guarded([&] {
        need(m, "measure");
        need(r1, "r1");
        need(r2, "r2");
        const auto [a, b] = bms::moment_identities(m->m, R, n);
        *r1 = a;
        *r2 = b;
    });
}

// ---- bodies

bms_status bms_body_create(const bms_function* h, const bms_grid* g, bms_body** out) {
    return guarded([&] {
        need(h, "support function");
        need(g, "grid");
        emit(out, bms::body_from_support(h->f, g->grid));
    });
}
void bms_body_destroy(bms_body* b) { delete b; }
bms_status bms_body_measure(const bms_body* b, const bms_measure* m, double* out) {
    return guarded([&] {
        need(b, "body");
        need(m, "measure");
        need(out, "out");
        *out = bms::measure_of_body(m->m, b->body);
    });
}
bms_status bms_body_quermassintegrals(const bms_body* b, double* out, size_t capacity) {
    return guarded([&] {
        need(b, "body");
        need(out, "out");
        const std::vector<double> v = bms::quermassintegrals(b->body);
        if (capacity < v.size()) throw bms::Error(bms::ErrorCode::InvalidArgument, "capacity must be at least n + 1");
        for (size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    });
}
bms_status bms_body_min_eigenvalue(const bms_body* b, double* out) {
    return guarded([&] {
        need(b, "body");
        need(out, "out");
        *out = b->body.min_eigenvalue();
    });
}
bms_status bms_mc_measure(const bms_measure* m, const bms_body* b, uint64_t samples, uint64_t seed, double* value,
                          double* standard_error) {
    return guarded([&] {
        need(m, "measure");
        need(b, "body");
        need(value, "value");
        const bms::McEstimate e = bms::mc_measure(m->m, b->body, samples, seed);
        *value = e.value;
        if (standard_error) *standard_error = e.standard_error;
    });
}

// ---- runner

bms_status bms_config_load(const char* path, bms_config** out) {
    return guarded([&] {
        need(path, "path");
        emit(out, bms::load_config(path));
    });
}
bms_status bms_config_parse(const char* json_text, bms_config** out) {
    return guarded([&] {
        need(json_text, "json_text");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::exception& e) {
            throw bms::Error(bms::ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
        }
        emit(out, bms::parse_config(j));
    });
}
void bms_config_destroy(bms_config* c) { delete c; }
const char* bms_config_to_json(const bms_config* c) {
    g_scratch.clear();
    guarded([&] {
        need(c, "config");
        g_scratch = bms::to_json(c->config).dump(2);
    });
    return g_scratch.c_str();
}
bms_status bms_run(const bms_config* c, const char* out_dir, int svg, bms_line_fn log, void* user, int* exit_code) {
    return guarded([&] {
        need(c, "config");
        need(exit_code, "exit_code");
        const bms::RunResult r = bms::run(c->config, out_dir ? out_dir : "", svg != 0, sink(log, user));
        *exit_code = r.exit_code;
    });
}
bms_status bms_verify_identities(int n, int resolution, int sweep, const bms_measure* const* extra,
                                 size_t extra_count, bms_line_fn log, void* user, int* exit_code) {
    return guarded([&] {
        need(exit_code, "exit_code");
        bms::IdentityOptions opt;
        opt.n = n;
        opt.resolution = resolution;
        opt.sweep = sweep != 0;
        for (size_t i = 0; i < extra_count; ++i) {
            need(extra[i], "extra measure");
            opt.extra_measures.push_back(extra[i]->m);
        }
        *exit_code = bms::verify_identities(opt, sink(log, user));
    });
}
bms_status bms_demo_shift(double t, double lambda, bms_line_fn log, void* user, int* exit_code) {
    return guarded([&] {
        need(exit_code, "exit_code");
        *exit_code = bms::demo_shift(t, lambda, sink(log, user));
    });
}

size_t bms_check_count(void) { return bms::all_checks().size(); }
const char* bms_check_name(size_t i) {
    const auto& all = bms::all_checks();
    return i < all.size() ? bms::to_string(all[i]) : nullptr;
}
const char* bms_check_description(size_t i) {
    const auto& all = bms::all_checks();
    return i < all.size() ? bms::describe(all[i]) : nullptr;
}

}  // extern "C"
