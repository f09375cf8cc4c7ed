// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <Eigen/Cholesky>

#include "errors.hpp"
#include "parallel.hpp"

namespace bms {

double finite_diff(const std::function<double(double)>& fn, double s0, int order, double step, bool richardson) {
    require(step > 0.0, ErrorCode::InvalidArgument, "finite-difference step must be positive");
    require(order == 1 || order == 2, ErrorCode::InvalidArgument, "finite-difference order must be 1 or 2");
    auto central = [&](double h) {
        if (order == 1) return (fn(s0 + h) - fn(s0 - h)) / (2.0 * h);
        return (fn(s0 + h) - 2.0 * fn(s0) + fn(s0 - h)) / (h * h);
    };
    const double d1 = central(step);
    if (!richardson) return d1;
    return (4.0 * d1 - central(2.0 * step)) / 3.0;
}

// ---------------------------------------------------------------- polygons

double PlanarBody::area() const {
    double s = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = vertices[i];
        const auto& b = vertices[(i + 1) % n];
        s += a[0] * b[1] - a[1] * b[0];
    }
    return 0.5 * s;
}

namespace {

using i128 = __int128;

// Integer coefficients decide the combinatorics exactly; vertices are
// computed from the unrounded lines.
struct Line {
    std::int64_t a, b, c;  // a x + b y <= c
    double x, y, h;        // x cos t + y sin t <= h
};

constexpr double kScale = 1073741824.0;  // 2^30

// Sign of (a_k x + b_k y - c_k) at the intersection of lines i and j,
// assuming det(i, j) > 0.
int side(const Line& i, const Line& j, const Line& k) {
    const i128 det = i128(i.a) * j.b - i128(j.a) * i.b;
    const i128 xn = i128(i.c) * j.b - i128(j.c) * i.b;
    const i128 yn = i128(i.a) * j.c - i128(j.a) * i.c;
    const i128 v = i128(k.a) * xn + i128(k.b) * yn - i128(k.c) * det;
    const int sd = det > 0 ? 1 : (det < 0 ? -1 : 0);
    const int sv = v > 0 ? 1 : (v < 0 ? -1 : 0);
    return sd * sv;
}

std::array<double, 2> meet(const Line& i, const Line& j) {
    const double det = i.x * j.y - j.x * i.y;
    return {(i.h * j.y - j.h * i.y) / det, (i.x * j.h - j.x * i.h) / det};
}

}  // namespace

PlanarBody wulff_polygon(std::span<const double> h) {
    const std::size_t N = h.size();
    require(N >= 720, ErrorCode::InvalidArgument, "wulff_polygon needs at least 720 directions");
    double hmax = 0.0;
    for (double v : h) {
        require(v > 0.0 && std::isfinite(v), ErrorCode::NonPositiveSupport, "wulff_polygon needs h > 0");
        hmax = std::max(hmax, v);
    }
    // Offsets are scaled by 1 / hmax so that every coefficient stays below 2^31.
    std::vector<Line> lines(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(N);
        const double c = std::cos(t), sn = std::sin(t);
        lines[i] = {std::llround(c * kScale), std::llround(sn * kScale), std::llround(h[i] / hmax * kScale), c, sn, h[i]};
    }
    std::deque<Line> dq;
    for (const Line& L : lines) {
        while (dq.size() >= 2 && side(dq[dq.size() - 2], dq.back(), L) >= 0) dq.pop_back();
        while (dq.size() >= 2 && side(dq[0], dq[1], L) >= 0) dq.pop_front();
        dq.push_back(L);
    }
    while (dq.size() >= 3 && side(dq[dq.size() - 2], dq.back(), dq.front()) >= 0) dq.pop_back();
    while (dq.size() >= 3 && side(dq[0], dq[1], dq.back()) >= 0) dq.pop_front();
    require(dq.size() >= 3, ErrorCode::InvalidArgument, "half-plane intersection is empty");

    PlanarBody out;
    for (std::size_t i = 0; i < dq.size(); ++i) out.vertices.push_back(meet(dq[i], dq[(i + 1) % dq.size()]));
    return out;
}

PlanarBody wulff_polygon(const std::function<double(double)>& h_of_angle, int directions) {
    std::vector<double> h(static_cast<std::size_t>(directions));
    for (int i = 0; i < directions; ++i) h[static_cast<std::size_t>(i)] = h_of_angle(2.0 * M_PI * i / directions);
    return wulff_polygon(h);
}

// ------------------------------------------------------------- Monte Carlo

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t z = splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL));
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

namespace {

int coarse_resolution(int n) {
    switch (n) {
    case 2: return 256;
    case 3: return 24;
    case 4: return 10;
    case 5: return 6;
    default: return 4;
    }
}

}  // namespace

SupportMembership::SupportMembership(const Body& K) : h_(K.support()), n_(K.dim()) {
    const GridPtr coarse = build_grid(n_, coarse_resolution(n_));
    dirs_.resize(coarse->size() * static_cast<std::size_t>(n_));
    hv_.resize(coarse->size());
    for (std::size_t k = 0; k < coarse->size(); ++k) {
        const auto u = coarse->node(k);
        std::copy(u.begin(), u.end(), dirs_.begin() + static_cast<std::ptrdiff_t>(k * n_));
        hv_[k] = h_(u);
    }
    if (n_ == 2) {
        delta_ = M_PI / static_cast<double>(coarse->size());
    } else {
        // Empirical covering radius over deterministic probes, with a safety factor.
        constexpr int kProbes = 20000;
        double worst = 0.0;
        std::array<double, kMaxDim> p{};
        for (int s = 0; s < kProbes; ++s) {
            double nrm = 0.0;
            for (int i = 0; i < n_; i += 2) {
                const double u1 = std::max(uniform01(0xC0FFEEULL, 8ULL * s + i), 1e-300);
                const double u2 = uniform01(0xC0FFEEULL, 8ULL * s + i + 1);
                const double r = std::sqrt(-2.0 * std::log(u1));
                p[i] = r * std::cos(2.0 * M_PI * u2);
                if (i + 1 < n_) p[i + 1] = r * std::sin(2.0 * M_PI * u2);
            }
            for (int i = 0; i < n_; ++i) nrm += p[i] * p[i];
            nrm = std::sqrt(nrm);
            double best = -2.0;
            for (std::size_t k = 0; k < hv_.size(); ++k) {
                double d = 0.0;
                for (int i = 0; i < n_; ++i) d += p[i] * dirs_[k * n_ + i];
                best = std::max(best, d / nrm);
            }
            worst = std::max(worst, std::acos(std::min(1.0, best)));
        }
        delta_ = 1.3 * worst;
    }
    double qmax = 0.0;
    for (std::size_t k = 0; k < K.size(); ++k) {
        const SmallVec ev = small_eigenvalues(K.curvature().matrix(k));
        qmax = std::max(qmax, ev[ev.size() - 1]);
    }
    tau_ = 0.75 * 1.1 * qmax * delta_ * delta_;
}

double SupportMembership::refine(std::span<const double> x, std::span<const double> u0) const {
    const int n = n_, m = n - 1;
    std::array<double, kMaxDim> u{};
    std::array<double, kMaxDim * kMaxDim> frame{};
    std::copy(u0.begin(), u0.end(), u.begin());
    auto value = [&](const std::array<double, kMaxDim>& v) {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d += x[i] * v[i];
        return d - h_(std::span<const double>(v.data(), static_cast<std::size_t>(n)));
    };
    double g = value(u);
    for (int it = 0; it < 50; ++it) {
        const std::span<const double> us(u.data(), static_cast<std::size_t>(n));
        tangent_frame(us, std::span<double>(frame.data(), static_cast<std::size_t>(n * m)));
        const LocalDerivatives d = local_derivatives(h_.jet(us), us, std::span<const double>(frame.data(), static_cast<std::size_t>(n * m)));
        double xu = 0.0;
        for (int i = 0; i < n; ++i) xu += x[i] * u[i];
        SmallVec grad(m);
        for (int c = 0; c < m; ++c) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += frame[c * n + i] * (x[i] - d.grad[i]);
            grad[c] = s;
        }
        if (grad.norm() < 1e-13 * (1.0 + std::abs(xu))) break;
        // Spherical Hessian of g is (h - <x,u>) I - Q.
        SmallMat negh = d.q;
        for (int c = 0; c < m; ++c) negh(c, c) += xu - d.value;
        SmallVec step(m);
        Eigen::LLT<SmallMat> llt(negh);
        if (llt.info() == Eigen::Success && small_min_eigenvalue(negh) > 1e-12) {
            step = llt.solve(grad);
        } else {
            step = grad / (1.0 + negh.cwiseAbs().maxCoeff());
        }
        const double len = step.norm();
        if (len > 0.5) step *= 0.5 / len;
        double t = 1.0;
        bool moved = false;
        for (int back = 0; back < 30; ++back, t *= 0.5) {
            std::array<double, kMaxDim> cand{};
            double nrm = 0.0;
            for (int i = 0; i < n; ++i) {
                double s = u[i];
                for (int c = 0; c < m; ++c) s += t * step[c] * frame[c * n + i];
                cand[i] = s;
                nrm += s * s;
            }
            nrm = std::sqrt(nrm);
            for (int i = 0; i < n; ++i) cand[i] /= nrm;
            const double gc = value(cand);
            if (gc >= g) {
                moved = gc > g;
                u = cand;
                g = gc;
                break;
            }
        }
        if (!moved) break;
    }
    return g;
}

double SupportMembership::gap(std::span<const double> x) const {
    const int n = n_;
    const std::size_t count = hv_.size();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < count; ++k) {
        double d = -hv_[k];
        for (int i = 0; i < n; ++i) d += x[i] * dirs_[k * n + i];
        best = std::max(best, d);
        if (d > 0.0) return d;
    }
    if (best < -tau_) return best;
    // Near the boundary: refine from the best few coarse directions.
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t k = 0; k < count; ++k) {
        double d = -hv_[k];
        for (int i = 0; i < n; ++i) d += x[i] * dirs_[k * n + i];
        if (d >= best - tau_) cand.emplace_back(d, k);
    }
    std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    if (cand.size() > 8) cand.resize(8);
    for (const auto& [d, k] : cand) {
        const double r = refine(x, std::span<const double>(dirs_.data() + k * n, static_cast<std::size_t>(n)));
        best = std::max(best, r);
        if (best > 0.0) break;
    }
    return best;
}

McEstimate mc_measure(const RadialMeasure& gamma, const Body& K, std::uint64_t samples, std::uint64_t seed) {
    require(samples >= 2, ErrorCode::InvalidArgument, "mc_measure needs at least two samples");
    const int n = K.dim();
    double hmax = 0.0, ratio = 0.0;
    for (std::size_t k = 0; k < K.size(); ++k) {
        const double h = K.h(k);
        hmax = std::max(hmax, h);
        const double r2 = (K.radius(k) * K.radius(k) - h * h) / (h * h);
        ratio = std::max(ratio, r2);
    }
    const double rho = 1.05 * hmax * std::sqrt(1.0 + ratio);
    const double vol = unit_ball_volume(n) * std::pow(rho, n);
    const SupportMembership member(K);

    constexpr std::uint64_t kChunk = 4096;
    const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
    std::vector<double> s1(chunks), s2(chunks);
    parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t b, std::size_t e) {
        std::array<double, kMaxDim> x{};
        for (std::size_t c = b; c < e; ++c) {
            CompensatedSum a1, a2;
            const std::uint64_t lo = c * kChunk, hi = std::min<std::uint64_t>(samples, lo + kChunk);
            for (std::uint64_t i = lo; i < hi; ++i) {
                const std::uint64_t base = 8 * i;
                double nrm = 0.0;
                for (int d = 0; d < n; d += 2) {
                    const double u1 = std::max(uniform01(seed, base + d), 1e-300);
                    const double u2 = uniform01(seed, base + d + 1);
                    const double r = std::sqrt(-2.0 * std::log(u1));
                    x[d] = r * std::cos(2.0 * M_PI * u2);
                    if (d + 1 < n) x[d + 1] = r * std::sin(2.0 * M_PI * u2);
                }
                for (int d = 0; d < n; ++d) nrm += x[d] * x[d];
                const double rad = rho * std::pow(uniform01(seed, base + 7), 1.0 / n);
                const double scale = rad / std::sqrt(nrm);
                for (int d = 0; d < n; ++d) x[d] *= scale;
                double v = 0.0;
                if (member.contains(std::span<const double>(x.data(), static_cast<std::size_t>(n)))) v = gamma.f(rad);
                a1.add(v);
                a2.add(v * v);
            }
            s1[c] = a1.value();
            s2[c] = a2.value();
        }
    }, 1);
    CompensatedSum t1, t2;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        t1.add(s1[c]);
        t2.add(s2[c]);
    }
    const double N = static_cast<double>(samples);
    const double mean = t1.value() / N;
    const double var = std::max(0.0, (t2.value() - N * mean * mean) / (N - 1.0));
    return {vol * mean, vol * std::sqrt(var / N), samples, seed};
}

}  // namespace bms
