// SPDX-License-Identifier: Apache-2.0
#include "sphere_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "errors.hpp"
#include "parallel.hpp"

namespace bms {

LocalDerivatives local_derivatives(const Jet2<double>& jet, std::span<const double> u,
                                   std::span<const double> frame) {
    const int n = jet.n;
    const int m = n - 1;
    LocalDerivatives out;
    out.value = jet.v;
    double ug = 0.0;
    for (int i = 0; i < n; ++i) ug += u[i] * jet.g[i];
    out.grad.resize(n);
    for (int i = 0; i < n; ++i) out.grad[i] = jet.g[i] - ug * u[i];

    // E^T H E, with E the frame columns.
    SmallMat he(n, m);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < m; ++c) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += jet.H(i, k) * frame[static_cast<std::size_t>(c * n + k)];
            he(i, c) = s;
        }
    out.q.resize(m, m);
    double tr = 0.0;
    for (int a = 0; a < m; ++a)
        for (int c = a; c < m; ++c) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += frame[static_cast<std::size_t>(a * n + i)] * he(i, c);
            out.q(a, c) = s;
            out.q(c, a) = s;
        }
    for (int a = 0; a < m; ++a) {
        tr += out.q(a, a);
        out.q(a, a) += jet.v - ug;
    }
    out.laplacian = tr - double(m) * ug;
    return out;
}

std::vector<Jet2<double>> node_jets(const SphericalFunction& f, const SphereGrid& grid) {
    require(f.dim() == grid.dim(), ErrorCode::DimensionMismatch, "function and grid dimensions differ");
    std::vector<Jet2<double>> jets(grid.size());
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) jets[k] = f.jet(grid.node(k));
    });
    return jets;
}

SmallVec spherical_gradient(const SphericalFunction& psi, std::span<const double> u) {
    require(static_cast<int>(u.size()) == psi.dim(), ErrorCode::DimensionMismatch, "point dimension mismatch");
    const Jet2<double> j = psi.jet(u);
    const int n = psi.dim();
    double ug = 0.0;
    for (int i = 0; i < n; ++i) ug += u[i] * j.g[i];
    SmallVec g(n);
    for (int i = 0; i < n; ++i) g[i] = j.g[i] - ug * u[i];
    return g;
}

double small_det(const SmallMat& m) {
    switch (m.rows()) {
    case 0: return 1.0;
    case 1: return m(0, 0);
    case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    default: return m.partialPivLu().determinant();
    }
}

double small_min_eigenvalue(const SmallMat& m) {
    switch (m.rows()) {
    case 1: return m(0, 0);
    case 2: {
        const double mid = 0.5 * (m(0, 0) + m(1, 1));
        const double half = 0.5 * (m(0, 0) - m(1, 1));
        return mid - std::hypot(half, m(0, 1));
    }
    default: return small_eigenvalues(m)[0];
    }
}

SmallVec small_eigenvalues(const SmallMat& m) {
    Eigen::SelfAdjointEigenSolver<SmallMat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

CurvatureField::CurvatureField(int n, std::vector<double> entries, std::vector<double> frames)
    : n_(n), q_(std::move(entries)), frames_(std::move(frames)) {
    const std::size_t mm = static_cast<std::size_t>((n - 1) * (n - 1));
    const std::size_t count = q_.size() / mm;
    det_.resize(count);
    min_eig_.resize(count);
    trace_.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        const SmallMat q = matrix(k);
        det_[k] = small_det(q);
        min_eig_[k] = small_min_eigenvalue(q);
        trace_[k] = q.trace();
    }
}

SmallMat CurvatureField::matrix(std::size_t k) const {
    const int m = n_ - 1;
    SmallMat q(m, m);
    const std::size_t base = k * static_cast<std::size_t>(m * m);
    for (int a = 0; a < m; ++a)
        for (int c = 0; c < m; ++c) q(a, c) = q_[base + static_cast<std::size_t>(a * m + c)];
    return q;
}

std::span<const double> CurvatureField::frame(std::size_t k) const {
    const std::size_t fs = static_cast<std::size_t>(n_ * (n_ - 1));
    return {frames_.data() + k * fs, fs};
}

std::pair<double, std::size_t> CurvatureField::global_min() const {
    std::size_t arg = 0;
    for (std::size_t k = 1; k < min_eig_.size(); ++k)
        if (min_eig_[k] < min_eig_[arg]) arg = k;
    return {min_eig_.empty() ? std::numeric_limits<double>::quiet_NaN() : min_eig_[arg], arg};
}

CurvatureField curvature_matrix(const SphericalFunction& h, const SphereGrid& grid, std::span<const double> frames) {
    require(h.dim() == grid.dim(), ErrorCode::DimensionMismatch, "function and grid dimensions differ");
    const int n = grid.dim(), m = n - 1;
    const std::size_t fs = static_cast<std::size_t>(n * m);
    require(frames.size() == fs * grid.size(), ErrorCode::DimensionMismatch, "frame array has the wrong size");
    std::vector<double> entries(grid.size() * static_cast<std::size_t>(m * m));
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const auto u = grid.node(k);
            const LocalDerivatives d = local_derivatives(h.jet(u), u, frames.subspan(k * fs, fs));
            for (int a = 0; a < m; ++a)
                for (int c = 0; c < m; ++c) entries[k * static_cast<std::size_t>(m * m) + a * m + c] = d.q(a, c);
        }
    });
    return CurvatureField(n, std::move(entries), std::vector<double>(frames.begin(), frames.end()));
}

CurvatureField curvature_matrix(const SphericalFunction& h, const SphereGrid& grid) {
    std::vector<double> frames;
    const std::size_t fs = static_cast<std::size_t>(grid.dim() * (grid.dim() - 1));
    frames.reserve(fs * grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto f = grid.frame(k);
        frames.insert(frames.end(), f.begin(), f.end());
    }
    return curvature_matrix(h, grid, frames);
}

SphericalFunction laplace_beltrami(const SphericalFunction& psi) { return SphericalFunction::laplacian_of(psi); }

std::vector<double> laplace_beltrami_values(const SphericalFunction& psi, const SphereGrid& grid) {
    require(psi.dim() == grid.dim(), ErrorCode::DimensionMismatch, "function and grid dimensions differ");
    std::vector<double> v(grid.size());
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const auto u = grid.node(k);
            v[k] = local_derivatives(psi.jet(u), u, grid.frame(k)).laplacian;
        }
    });
    return v;
}

MeanSplit split_mean(const SphericalFunction& psi, const SphereGrid& grid) {
    const double mean = integrate(psi, grid) / grid.surface_measure();
    return {mean, psi + (-mean)};
}

DirichletData dirichlet_data(const SphericalFunction& psi, const SphereGrid& grid) {
    require(psi.dim() == grid.dim(), ErrorCode::DimensionMismatch, "function and grid dimensions differ");
    std::vector<double> v(grid.size()), v2(grid.size()), g2(grid.size());
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const auto u = grid.node(k);
            const Jet2<double> j = psi.jet(u);
            double ug = 0.0, gg = 0.0;
            for (int i = 0; i < j.n; ++i) ug += u[i] * j.g[i];
            for (int i = 0; i < j.n; ++i) {
                const double t = j.g[i] - ug * u[i];
                gg += t * t;
            }
            v[k] = j.v;
            v2[k] = j.v * j.v;
            g2[k] = gg;
        }
    });
    return {quadrature(grid, v), quadrature(grid, v2), quadrature(grid, g2)};
}

double poincare_ratio(const SphericalFunction& psi, const SphereGrid& grid, double mean_tolerance) {
    const DirichletData d = dirichlet_data(psi, grid);
    require(std::abs(d.integral) <= mean_tolerance, ErrorCode::InvalidArgument,
            "poincare_ratio needs a zero-mean function (integral = " + std::to_string(d.integral) + ")");
    require(d.l2 > 0.0, ErrorCode::InvalidArgument, "poincare_ratio of the zero function is undefined");
    return d.dirichlet / d.l2;
}

double odd_component(const SphericalFunction& f, const SphereGrid& grid) {
    const std::vector<double> v = sample(f, grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const std::ptrdiff_t a = grid.antipode(k);
        if (a >= 0) worst = std::max(worst, 0.5 * std::abs(v[k] - v[static_cast<std::size_t>(a)]));
    }
    return worst;
}

Parity detect_parity(const SphericalFunction& f, const SphereGrid& grid, double tol) {
    const std::vector<double> v = sample(f, grid);
    bool even = true, odd = true, paired = false;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const std::ptrdiff_t a = grid.antipode(k);
        if (a < 0) continue;
        paired = true;
        const double w = v[static_cast<std::size_t>(a)];
        if (std::abs(v[k] - w) > tol) even = false;
        if (std::abs(v[k] + w) > tol) odd = false;
    }
    if (!paired) return Parity::Neither;
    if (even) return Parity::Even;
    if (odd) return Parity::Odd;
    return Parity::Neither;
}

}  // namespace bms
