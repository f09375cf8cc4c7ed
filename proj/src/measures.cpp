// SPDX-License-Identifier: Apache-2.0
#include "measures.hpp"

#include <algorithm>
#include <vector>
#include <cmath>
#include <sstream>
#include <tuple>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "errors.hpp"

namespace bms {

RadialMeasure RadialMeasure::gaussian() {
    RadialMeasure m;
    m.kind_ = MeasureKind::Gaussian;
    return m;
}

RadialMeasure RadialMeasure::exp_power(double p) {
    require(std::isfinite(p) && p >= 1.0, ErrorCode::InvalidMeasure, "exp_power needs p >= 1");
    RadialMeasure m;
    m.kind_ = MeasureKind::ExpPower;
    m.p_ = p;
    return m;
}

RadialMeasure RadialMeasure::lebesgue() { return RadialMeasure{}; }

RadialMeasure RadialMeasure::custom(RadialFn f, RadialFn df, RadialFn d2f, std::string label) {
    require(f && df && d2f, ErrorCode::InvalidMeasure, "custom measure needs f, f' and f''");
    RadialMeasure m;
    m.kind_ = MeasureKind::Custom;
    m.f_ = std::move(f);
    m.df_ = std::move(df);
    m.d2f_ = std::move(d2f);
    m.label_ = std::move(label);
    return m;
}

std::string RadialMeasure::name() const {
    switch (kind_) {
    case MeasureKind::Gaussian: return "gaussian";
    case MeasureKind::Lebesgue: return "lebesgue";
    case MeasureKind::ExpPower: {
        std::ostringstream os;
        os << "exp_power(" << p_ << ")";
        return os.str();
    }
    case MeasureKind::Custom: return label_;
    }
    return "unknown";
}

double RadialMeasure::f(double r) const {
    switch (kind_) {
    case MeasureKind::Gaussian: return std::exp(-0.5 * r * r);
    case MeasureKind::ExpPower: return std::exp(-std::pow(r, p_));
    case MeasureKind::Lebesgue: return 1.0;
    case MeasureKind::Custom: return f_(r);
    }
    return 0.0;
}

double RadialMeasure::df(double r) const {
    switch (kind_) {
    case MeasureKind::Gaussian: return -r * std::exp(-0.5 * r * r);
    case MeasureKind::ExpPower:
        return p_ == 1.0 ? -std::exp(-r) : -p_ * std::pow(r, p_ - 1.0) * std::exp(-std::pow(r, p_));
    case MeasureKind::Lebesgue: return 0.0;
    case MeasureKind::Custom: return df_(r);
    }
    return 0.0;
}

double RadialMeasure::d2f(double r) const {
    switch (kind_) {
    case MeasureKind::Gaussian: return (r * r - 1.0) * std::exp(-0.5 * r * r);
    case MeasureKind::ExpPower: {
        if (p_ == 1.0) return std::exp(-r);
        const double rp = std::pow(r, p_);
        return (p_ * p_ * std::pow(r, 2.0 * p_ - 2.0) - p_ * (p_ - 1.0) * std::pow(r, p_ - 2.0)) * std::exp(-rp);
    }
    case MeasureKind::Lebesgue: return 0.0;
    case MeasureKind::Custom: return d2f_(r);
    }
    return 0.0;
}

namespace {

[[noreturn]] void reject(const std::string& what, double r) {
    std::ostringstream os;
    os.precision(6);
    os << what << " at r=" << r;
    throw Error(ErrorCode::InvalidMeasure, os.str(), -1, r);
}

}  // namespace

void validate_measure(const RadialMeasure& m) {
    constexpr int kSamples = 401;
    constexpr double kLo = -6.0, kHi = 2.0;  // log10 range, plus r = 0
    for (int i = -1; i < kSamples; ++i) {
        const double r = i < 0 ? 0.0 : std::pow(10.0, kLo + (kHi - kLo) * i / (kSamples - 1));
        const double f = m.f(r), df = m.df(r), d2f = m.d2f(r);
        if (!std::isfinite(f)) reject("density is not finite", r);
        if (f < 0.0) reject("density is negative", r);
        if (std::isnan(df) || df > 1e-12) reject("density increasing", r);
        if (f > 1e-250) {
            const double q = df / f;
            const double ll = d2f / f - q * q;
            if (std::isnan(ll) || ll > 1e-10) reject("density is not log-concave", r);
        }
    }
}

RadialMeasure make_measure(const MeasureSpec& spec) {
    RadialMeasure m;
    switch (spec.kind) {
    case MeasureKind::Gaussian: m = RadialMeasure::gaussian(); break;
    case MeasureKind::ExpPower: m = RadialMeasure::exp_power(spec.p); break;
    case MeasureKind::Lebesgue: m = RadialMeasure::lebesgue(); break;
    case MeasureKind::Custom: m = RadialMeasure::custom(spec.f, spec.df, spec.d2f, spec.label); break;
    }
    validate_measure(m);
    return m;
}

double adaptive_integrate(const std::function<double(double)>& fn, double a, double b, double tol, int max_depth) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    struct Piece {
        double a, b, value, err;
        int depth;
        bool operator<(const Piece& o) const { return err < o.err; }
    };
    auto eval = [&](double lo, double hi, int depth) {
        Piece p{lo, hi, 0.0, 0.0, depth};
        p.value = GK::integrate(fn, lo, hi, 0, 0.0, &p.err);
        p.err *= 0.5 * (hi - lo);  // boost reports the error on the reference interval [-1, 1]
        if (!std::isfinite(p.value)) throw Error(ErrorCode::QuadratureFailure, "integrand is not finite");
        return p;
    };
    const Piece first = eval(a, b, 0);
    if (first.err <= tol) return first.value;

    // Global refinement: always bisect the piece with the largest error.
    constexpr std::size_t kMaxPieces = 4096;
    std::vector<Piece> heap{first};
    double err_total = first.err;
    while (err_total > tol) {
        std::pop_heap(heap.begin(), heap.end());
        const Piece p = heap.back();
        heap.pop_back();
        if (p.depth >= max_depth || heap.size() + 2 > kMaxPieces)
            throw Error(ErrorCode::QuadratureFailure, "adaptive quadrature did not converge");
        const double mid = 0.5 * (p.a + p.b);
        const Piece l = eval(p.a, mid, p.depth + 1), r = eval(mid, p.b, p.depth + 1);
        err_total += l.err + r.err - p.err;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end());
        if (err_total <= tol) {
            // Recompute the sum to avoid drift from the running update.
            err_total = 0.0;
            for (const Piece& q : heap) err_total += q.err;
        }
    }
    std::sort(heap.begin(), heap.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
    double total = 0.0, comp = 0.0;
    for (const Piece& q : heap) {
        const double t = total + q.value;  // Neumaier step
        comp += std::abs(total) >= std::abs(q.value) ? (total - t) + q.value : (q.value - t) + total;
        total = t;
    }
    return total + comp;
}

double moment_a(const RadialMeasure& m, double D, int n, double tol) {
    require(D > 0.0 && std::isfinite(D), ErrorCode::InvalidArgument, "moment radius must be positive");
    if (m.kind() == MeasureKind::Lebesgue) return 1.0 / n;
    return adaptive_integrate([&](double t) { return std::pow(t, n - 1) * m.f(t * D); }, 0.0, 1.0, tol);
}

std::pair<double, double> moment_ab(const RadialMeasure& m, double D, int n, double tol) {
    require(D > 0.0 && std::isfinite(D), ErrorCode::InvalidArgument, "moment radius must be positive");
    if (m.kind() == MeasureKind::Lebesgue) return {1.0 / n, 0.0};
    const double a = adaptive_integrate([&](double t) { return std::pow(t, n - 1) * m.f(t * D); }, 0.0, 1.0, tol);
    const double b = adaptive_integrate([&](double t) { return std::pow(t, n) * m.df(t * D); }, 0.0, 1.0, tol);
    return {a, b};
}

MomentTriple moments(const RadialMeasure& m, double D, int n, double tol) {
    MomentTriple out;
    out.D = D;
    out.n = n;
    std::tie(out.A, out.B) = moment_ab(m, D, n, tol);
    if (m.kind() != MeasureKind::Lebesgue)
        out.C = adaptive_integrate([&](double t) { return std::pow(t, n + 1) * m.d2f(t * D); }, 0.0, 1.0, tol);
    return out;
}

std::pair<double, double> moment_identities(const RadialMeasure& m, double R, int n) {
    const MomentTriple t = moments(m, R, n);
    return {std::abs(m.f(R) - (n * t.A + R * t.B)), std::abs(m.df(R) - ((n + 1) * t.B + R * t.C))};
}

}  // namespace bms
