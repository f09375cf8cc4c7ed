// SPDX-License-Identifier: Apache-2.0
#include "sphere_grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "errors.hpp"
#include "parallel.hpp"

namespace bms {

double sphere_area(int n) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

int max_resolution(int n) {
    switch (n) {
    case 2: return 1 << 16;
    case 3: return 512;
    case 4: return 64;
    case 5: return 24;
    default: return 12;
    }
}

void tangent_frame(std::span<const double> u, std::span<double> out) {
    const int n = static_cast<int>(u.size());
    int m = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(u[i]) > std::abs(u[m])) m = i;
    const double s = u[m] >= 0.0 ? 1.0 : -1.0;
    std::array<double, kMaxDim> v{};
    for (int i = 0; i < n; ++i) v[i] = u[i];
    v[m] += s;
    double vv = 0.0;
    for (int i = 0; i < n; ++i) vv += v[i] * v[i];
    int col = 0;
    for (int j = 0; j < n; ++j) {
        if (j == m) continue;
        for (int i = 0; i < n; ++i)
            out[static_cast<std::size_t>(col * n + i)] = (i == j ? 1.0 : 0.0) - 2.0 * v[i] * v[j] / vv;
        ++col;
    }
}

void gauss_jacobi(int count, double alpha, std::vector<double>& nodes, std::vector<double>& weights) {
    require(count >= 1, ErrorCode::InvalidArgument, "gauss_jacobi needs at least one node");
    const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(alpha + 1.0) / std::tgamma(alpha + 1.5);
    // Orthonormal recurrence t p_k = b_{k+1} p_{k+1} + b_k p_{k-1}.
    std::vector<double> b(static_cast<std::size_t>(count) + 1, 0.0);
    for (int k = 1; k <= count; ++k) {
        const double kk = k, a2 = 2.0 * alpha;
        b[k] = std::sqrt(kk * (kk + a2) / ((2.0 * kk + a2 + 1.0) * (2.0 * kk + a2 - 1.0)));
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(count);
    Eigen::VectorXd sub(std::max(count - 1, 0));
    for (int k = 0; k + 1 < count; ++k) sub[k] = b[k + 1];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    nodes.assign(es.eigenvalues().data(), es.eigenvalues().data() + count);

    auto eval = [&](double t, double& p, double& dp, double& christoffel) {
        double pm = 0.0, dpm = 0.0;
        p = 1.0 / std::sqrt(mu0);
        dp = 0.0;
        christoffel = p * p;
        for (int k = 0; k < count; ++k) {
            const double pn = (t * p - b[k] * pm) / b[k + 1];
            const double dpn = (p + t * dp - b[k] * dpm) / b[k + 1];
            pm = p;
            dpm = dp;
            p = pn;
            dp = dpn;
            if (k + 1 < count) christoffel += p * p;
        }
    };
    weights.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        double t = nodes[i], p = 0, dp = 0, c = 0;
        for (int it = 0; it < 8; ++it) {
            eval(t, p, dp, c);
            const double dt = p / dp;
            t -= dt;
            if (std::abs(dt) < 1e-17) break;
        }
        eval(t, p, dp, c);
        nodes[i] = t;
        weights[i] = 1.0 / c;
    }
    // Enforce exact symmetry of the rule.
    for (int i = 0; i < count / 2; ++i) {
        const int j = count - 1 - i;
        const double t = 0.5 * (nodes[j] - nodes[i]);
        const double w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -t;
        nodes[j] = t;
        weights[i] = weights[j] = w;
    }
    if (count % 2 == 1) nodes[count / 2] = 0.0;
}

GridPtr build_grid(int n, int resolution) {
    require(n >= 2 && n <= kMaxDim, ErrorCode::InvalidArgument,
            "sphere dimension n must be in [2, " + std::to_string(kMaxDim) + "], got " + std::to_string(n));
    require(resolution >= kMinResolution, ErrorCode::InvalidArgument,
            "resolution must be at least " + std::to_string(kMinResolution) + " for degree-2 exactness");
    require(resolution <= max_resolution(n), ErrorCode::InvalidArgument,
            "resolution " + std::to_string(resolution) + " exceeds the supported maximum " +
                std::to_string(max_resolution(n)) + " for n=" + std::to_string(n));

    auto grid = std::make_shared<SphereGrid>();
    grid->n_ = n;
    grid->resolution_ = resolution;
    grid->area_ = sphere_area(n);

    // Circle rule, then lift one dimension at a time.
    const int circle = n == 2 ? resolution : 2 * resolution;
    std::vector<double> nodes, weights;
    for (int j = 0; j < circle; ++j) {
        const double t = 2.0 * std::numbers::pi * j / circle;
        nodes.push_back(std::cos(t));
        nodes.push_back(std::sin(t));
        weights.push_back(2.0 * std::numbers::pi / circle);
    }
    for (int m = 3; m <= n; ++m) {
        std::vector<double> t, wt;
        gauss_jacobi(resolution, 0.5 * (m - 3), t, wt);
        std::vector<double> next_nodes, next_weights;
        const std::size_t prev = weights.size();
        next_nodes.reserve(prev * t.size() * static_cast<std::size_t>(m));
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double r = std::sqrt(std::max(0.0, 1.0 - t[i] * t[i]));
            for (std::size_t k = 0; k < prev; ++k) {
                for (int c = 0; c < m - 1; ++c) next_nodes.push_back(r * nodes[k * (m - 1) + c]);
                next_nodes.push_back(t[i]);
                next_weights.push_back(wt[i] * weights[k]);
            }
        }
        nodes.swap(next_nodes);
        weights.swap(next_weights);
    }
    grid->family_ = n == 2 ? GridFamily::Periodic
                           : (n == 3 ? GridFamily::GaussLegendreAzimuth : GridFamily::ProductHyperspherical);
    grid->degree_ = n == 2 ? resolution - 1 : 2 * resolution - 1;

    const std::size_t count = weights.size();
    const std::size_t un = static_cast<std::size_t>(n);
    for (std::size_t k = 0; k < count; ++k) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < un; ++i) r2 += nodes[k * un + i] * nodes[k * un + i];
        const double r = std::sqrt(r2);
        for (std::size_t i = 0; i < un; ++i) nodes[k * un + i] /= r;
    }
    grid->nodes_ = std::move(nodes);
    grid->weights_ = std::move(weights);

    const std::size_t fsize = un * (un - 1);
    grid->frames_.resize(count * fsize);
    for (std::size_t k = 0; k < count; ++k)
        tangent_frame(grid->node(k), std::span<double>(grid->frames_.data() + k * fsize, fsize));

    // Antipodal partners via quantized coordinates.
    using Key = std::array<long long, kMaxDim>;
    auto key_of = [&](std::span<const double> u, double sign) {
        Key key{};
        for (std::size_t i = 0; i < un; ++i) key[i] = std::llround(sign * u[i] * 1e9);
        return key;
    };
    std::vector<std::pair<Key, std::size_t>> index(count);
    for (std::size_t k = 0; k < count; ++k) index[k] = {key_of(grid->node(k), 1.0), k};
    std::sort(index.begin(), index.end());
    grid->antipodes_.assign(count, -1);
    for (std::size_t k = 0; k < count; ++k) {
        const Key target = key_of(grid->node(k), -1.0);
        auto it = std::lower_bound(index.begin(), index.end(), std::make_pair(target, std::size_t{0}));
        if (it != index.end() && it->first == target) grid->antipodes_[k] = static_cast<std::ptrdiff_t>(it->second);
    }
    return grid;
}

double quadrature(const SphereGrid& grid, std::span<const double> values) {
    require(values.size() == grid.size(), ErrorCode::DimensionMismatch, "value count does not match grid size");
    CompensatedSum s;
    for (std::size_t k = 0; k < values.size(); ++k) s.add(grid.weight(k) * values[k]);
    return s.value();
}

std::vector<double> sample(const SphericalFunction& f, const SphereGrid& grid) {
    require(f.dim() == grid.dim(), ErrorCode::DimensionMismatch,
            "function dimension " + std::to_string(f.dim()) + " does not match grid dimension " +
                std::to_string(grid.dim()));
    std::vector<double> v(grid.size());
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) v[k] = f(grid.node(k));
    });
    return v;
}

double integrate(const SphericalFunction& f, const SphereGrid& grid) {
    return quadrature(grid, sample(f, grid));
}

}  // namespace bms
