// SPDX-License-Identifier: Apache-2.0
#include "variation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/LU>

#include "errors.hpp"
#include "parallel.hpp"

namespace bms {

namespace {

// Determinant of m with the listed rows and columns removed.
double minor_det(const Eigen::MatrixXd& m, std::array<int, 2> rows, int nrows, std::array<int, 2> cols, int ncols) {
    const int n = static_cast<int>(m.rows());
    const int k = n - nrows;
    if (k == 0) return 1.0;
    Eigen::MatrixXd sub(k, k);
    for (int i = 0, si = 0; i < n; ++i) {
        if (std::find(rows.begin(), rows.begin() + nrows, i) != rows.begin() + nrows) continue;
        for (int j = 0, sj = 0; j < n; ++j) {
            if (std::find(cols.begin(), cols.begin() + ncols, j) != cols.begin() + ncols) continue;
            sub(si, sj++) = m(i, j);
        }
        ++si;
    }
    return sub.determinant();
}

void check_square_symmetric(const Eigen::MatrixXd& m) {
    require(m.rows() == m.cols() && m.rows() >= 1, ErrorCode::InvalidArgument, "cofactor needs a square matrix");
    require(m.rows() <= kMaxCofactorSize, ErrorCode::InvalidArgument, "cofactor supports N <= 8");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i + 1; j < m.cols(); ++j)
            require(std::abs(m(i, j) - m(j, i)) <= 1e-12 * scale, ErrorCode::InvalidArgument,
                    "cofactor needs a symmetric matrix");
}

SmallMat adjugate(const SmallMat& q) {
    const int m = static_cast<int>(q.rows());
    SmallMat c(m, m);
    if (m == 1) {
        c(0, 0) = 1.0;
    } else if (m == 2) {
        c << q(1, 1), -q(1, 0), -q(0, 1), q(0, 0);
    } else {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                SmallMat sub(m - 1, m - 1);
                for (int a = 0, sa = 0; a < m; ++a) {
                    if (a == i) continue;
                    for (int b = 0, sb = 0; b < m; ++b) {
                        if (b == j) continue;
                        sub(sa, sb++) = q(a, b);
                    }
                    ++sa;
                }
                c(i, j) = ((i + j) % 2 ? -1.0 : 1.0) * small_det(sub);
            }
    }
    return c;
}

// Determinant and adjugate of a small matrix over any field-like scalar
// (Gauss-Jordan with partial pivoting on the value part).
template <class T>
T det_adjugate(std::array<T, kMaxDim * kMaxDim> a, int n, std::array<T, kMaxDim * kMaxDim>& adj) {
    std::array<T, kMaxDim * kMaxDim> inv{};
    for (int i = 0; i < n; ++i) inv[i * kMaxDim + i] = T(1.0);
    T det(1.0);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(value_of(a[r * kMaxDim + col])) > std::abs(value_of(a[piv * kMaxDim + col]))) piv = r;
        if (piv != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(a[piv * kMaxDim + c], a[col * kMaxDim + c]);
                std::swap(inv[piv * kMaxDim + c], inv[col * kMaxDim + c]);
            }
            det = -det;
        }
        const T p = a[col * kMaxDim + col];
        det *= p;
        for (int c = 0; c < n; ++c) {
            a[col * kMaxDim + c] /= p;
            inv[col * kMaxDim + c] /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const T f = a[r * kMaxDim + col];
            for (int c = 0; c < n; ++c) {
                a[r * kMaxDim + c] -= f * a[col * kMaxDim + c];
                inv[r * kMaxDim + c] -= f * inv[col * kMaxDim + c];
            }
        }
    }
    for (int i = 0; i < n * kMaxDim; ++i) adj[i] = det * inv[i];
    return det;
}

}  // namespace

double CofactorData::second(int i, int j, int k, int l) const {
    const int n = size();
    return tensor[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)];
}

double CofactorData::homog1_residual() const {
    return std::abs((c.array() * m.array()).sum() - size() * m.determinant());
}

double CofactorData::homog2_residual() const {
    const int n = size();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) s += second(i, j, k, l) * m(k, l);
            worst = std::max(worst, std::abs(s - (n - 1) * c(i, j)));
        }
    return worst;
}

double CofactorData::scale() const {
    return std::pow(std::max(1e-300, m.cwiseAbs().maxCoeff()), size() - 1);
}

Eigen::MatrixXd cofactor_matrix(const Eigen::MatrixXd& m) {
    check_square_symmetric(m);
    const int n = static_cast<int>(m.rows());
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = ((i + j) % 2 ? -1.0 : 1.0) * minor_det(m, {i, 0}, 1, {j, 0}, 1);
    return c;
}

CofactorData cofactor(const Eigen::MatrixXd& m) {
    CofactorData out;
    out.m = m;
    out.c = cofactor_matrix(m);
    const int n = static_cast<int>(m.rows());
    out.tensor.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (k == i) continue;
                for (int l = 0; l < n; ++l) {
                    if (l == j) continue;
                    // Position of m_kl inside the (i, j) minor.
                    const int kk = k - (k > i ? 1 : 0), ll = l - (l > j ? 1 : 0);
                    const double sign = ((i + j + kk + ll) % 2 ? -1.0 : 1.0);
                    const std::array<int, 2> rows{std::min(i, k), std::max(i, k)};
                    const std::array<int, 2> cols{std::min(j, l), std::max(j, l)};
                    out.tensor[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)] =
                        sign * minor_det(m, rows, 2, cols, 2);
                }
            }
    return out;
}

double cheng_yau_residual(const SphericalFunction& h, const SphereGrid& grid) {
    require(h.dim() == grid.dim(), ErrorCode::DimensionMismatch, "function and grid dimensions differ");
    require(h.is_analytic(), ErrorCode::Unsupported,
            "cheng_yau_residual needs third derivatives; black-box support functions are not accepted");
    const int n = grid.dim(), m = n - 1;
    if (n == 2) return 0.0;
    std::vector<double> worst(grid.size(), 0.0);
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        std::array<Dual, kMaxDim> y{};
        std::array<Dual, kMaxDim * kMaxDim> mat{}, adj{};
        for (std::size_t node = b; node < e; ++node) {
            const auto u = grid.node(node);
            std::array<double, kMaxDim> w{};  // sum_k d_k C_{k,l}
            for (int k = 0; k < n; ++k) {
                // u(x) = x / |x| differentiated along e_k at x = u.
                for (int i = 0; i < n; ++i) y[i] = Dual(u[i], (i == k ? 1.0 : 0.0) - u[i] * u[k]);
                const Jet2<Dual> j = h.jet(std::span<const Dual>(y.data(), static_cast<std::size_t>(n)));
                Dual yg(0.0);
                for (int i = 0; i < n; ++i) yg += y[i] * j.g[i];
                const Dual shift = j.v - yg;
                // Q-hat = P H P + shift P with P = I - y y^T; then add y y^T.
                std::array<Dual, kMaxDim * kMaxDim> hp{};
                for (int i = 0; i < n; ++i)
                    for (int c = 0; c < n; ++c) {
                        Dual s(0.0);
                        for (int t = 0; t < n; ++t) s += j.H(i, t) * ((t == c ? Dual(1.0) : Dual(0.0)) - y[t] * y[c]);
                        hp[i * kMaxDim + c] = s;
                    }
                for (int i = 0; i < n; ++i)
                    for (int c = 0; c < n; ++c) {
                        Dual s(0.0);
                        for (int t = 0; t < n; ++t) s += ((i == t ? Dual(1.0) : Dual(0.0)) - y[i] * y[t]) * hp[t * kMaxDim + c];
                        const Dual p = (i == c ? Dual(1.0) : Dual(0.0)) - y[i] * y[c];
                        mat[i * kMaxDim + c] = s + shift * p + y[i] * y[c];
                    }
                const Dual det = det_adjugate(mat, n, adj);
                for (int l = 0; l < n; ++l) {
                    const Dual chat = adj[k * kMaxDim + l] - det * y[k] * y[l];
                    w[l] += chat.d;
                }
            }
            double uw = 0.0;
            for (int i = 0; i < n; ++i) uw += u[i] * w[i];
            const auto frame = grid.frame(node);
            double r = 0.0;
            for (int c = 0; c < m; ++c) {
                double s = 0.0;
                for (int i = 0; i < n; ++i) s += frame[static_cast<std::size_t>(c * n + i)] * (w[i] - uw * u[i]);
                r = std::max(r, std::abs(s));
            }
            worst[node] = r;
        }
    }, 64);
    return *std::max_element(worst.begin(), worst.end());
}

std::pair<double, double> ibp_residuals(const SphericalFunction& h, const SphericalFunction& psi,
                                        const SphericalFunction& phi, const SphereGrid& grid,
                                        const SphericalFunction* w) {
    for (const SphericalFunction* f : {&h, &psi, &phi})
        require(f->dim() == grid.dim(), ErrorCode::DimensionMismatch, "function and grid dimensions differ");
    const SphericalFunction& wf = w ? *w : psi;
    const std::size_t count = grid.size();
    std::vector<double> l1(count), r1(count), l2(count), r2(count);
    parallel_for(count, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const auto u = grid.node(k);
            const auto fr = grid.frame(k);
            const LocalDerivatives dh = local_derivatives(h.jet(u), u, fr);
            const LocalDerivatives dp = local_derivatives(psi.jet(u), u, fr);
            const LocalDerivatives df = local_derivatives(phi.jet(u), u, fr);
            const LocalDerivatives dw = local_derivatives(wf.jet(u), u, fr);
            const CofactorData cd = cofactor(Eigen::MatrixXd(dh.q));
            const int m = cd.size();
            double c_p = 0.0, c_f = 0.0, t_wf = 0.0, t_wp = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    c_p += cd.c(i, j) * dp.q(i, j);
                    c_f += cd.c(i, j) * df.q(i, j);
                    for (int s = 0; s < m; ++s)
                        for (int t = 0; t < m; ++t) {
                            const double cc = cd.second(i, j, s, t) * dw.q(i, j);
                            t_wf += cc * df.q(s, t);
                            t_wp += cc * dp.q(s, t);
                        }
                }
            l1[k] = df.value * c_p;
            r1[k] = dp.value * c_f;
            l2[k] = dp.value * t_wf;
            r2[k] = df.value * t_wp;
        }
    }, 64);
    return {std::abs(quadrature(grid, l1) - quadrature(grid, r1)), std::abs(quadrature(grid, l2) - quadrature(grid, r2))};
}

double g_eval(const PerturbationFamily& family, const RadialMeasure& gamma, double s) {
    return measure_of_body(gamma, family.at(s));
}

double first_variation(const Body& K, const SphericalFunction& psi, const RadialMeasure& gamma) {
    require(psi.dim() == K.dim(), ErrorCode::DimensionMismatch, "direction and body dimensions differ");
    const SphereGrid& grid = K.grid();
    const int n = K.dim();
    std::vector<double> v(K.size());
    parallel_for(K.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const auto u = grid.node(k);
            const auto fr = grid.frame(k);
            const LocalDerivatives dh = local_derivatives(K.jet(k), u, fr);
            const LocalDerivatives dp = local_derivatives(psi.jet(u), u, fr);
            const SmallMat c = adjugate(dh.q);
            const double det = K.curvature().det(k);
            const double D = K.radius(k);
            const auto [A, B] = moment_ab(gamma, D, n);
            const double cq = (c.array() * dp.q.array()).sum();
            const double hp = dh.value * dp.value + dh.grad.dot(dp.grad);
            v[k] = dp.value * det * A + dh.value * cq * A + dh.value * det * B * hp / D;
        }
    }, 64);
    return quadrature(grid, v);
}

double g_second_volume(const Body& K, const SphericalFunction& psi) {
    require(psi.dim() == K.dim(), ErrorCode::DimensionMismatch, "direction and body dimensions differ");
    const SphereGrid& grid = K.grid();
    std::vector<double> v(K.size());
    parallel_for(K.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const auto u = grid.node(k);
            const auto fr = grid.frame(k);
            const LocalDerivatives dh = local_derivatives(K.jet(k), u, fr);
            const LocalDerivatives dp = local_derivatives(psi.jet(u), u, fr);
            v[k] = dp.value * (adjugate(dh.q).array() * dp.q.array()).sum();
        }
    }, 64);
    return quadrature(grid, v);
}

double g_prime_general(const PerturbationFamily& family, const RadialMeasure& gamma, double s) {
    require(family.kind() == FamilyKind::Additive, ErrorCode::Unsupported,
            "g_prime_general needs an additive family; reduce multiplicative families with psi = h log phi");
    return first_variation(family.at(s), family.direction(), gamma);
}

double g_second_fd(const PerturbationFamily& family, const RadialMeasure& gamma, double s, double step) {
    require(step > 0.0, ErrorCode::InvalidArgument, "finite-difference step must be positive");
    const double gp = g_eval(family, gamma, s + step);
    const double g0 = g_eval(family, gamma, s);
    const double gm = g_eval(family, gamma, s - step);
    return (gp - 2.0 * g0 + gm) / (step * step);
}

double g_prime_ball(double R, const SphericalFunction& psi, const RadialMeasure& gamma, const SphereGrid& grid) {
    require(R > 0.0, ErrorCode::InvalidArgument, "R must be positive");
    const int n = grid.dim();
    return std::pow(R, n - 1) * gamma.f(R) * integrate(psi, grid);
}

double g_second_ball(double R, const SphericalFunction& psi, const RadialMeasure& gamma, const SphereGrid& grid) {
    require(R > 0.0, ErrorCode::InvalidArgument, "R must be positive");
    const int n = grid.dim();
    const DirichletData d = dirichlet_data(psi, grid);
    return std::pow(R, n - 2) * gamma.f(R) * ((n - 1) * d.l2 - d.dirichlet) + std::pow(R, n - 1) * gamma.df(R) * d.l2;
}

double g_second_ball_moments(double R, const SphericalFunction& psi, const RadialMeasure& gamma,
                             const SphereGrid& grid) {
    require(R > 0.0, ErrorCode::InvalidArgument, "R must be positive");
    const int n = grid.dim();
    const DirichletData d = dirichlet_data(psi, grid);
    const MomentTriple t = moments(gamma, R, n);
    const double rn2 = std::pow(R, n - 2);
    return rn2 * (t.A * n * (n - 1) + 2.0 * n * R * t.B + R * R * t.C) * d.l2 - rn2 * (n * t.A + R * t.B) * d.dirichlet;
}

VariationAtBall variation_at_ball(double R, const SphericalFunction& psi, const RadialMeasure& gamma,
                                  const SphereGrid& grid) {
    VariationAtBall v;
    v.R = R;
    v.n = grid.dim();
    v.moments = moments(gamma, R, v.n);
    v.g0 = grid.surface_measure() * std::pow(R, v.n) * v.moments.A;
    v.gprime = g_prime_ball(R, psi, gamma, grid);
    v.gsecond = g_second_ball(R, psi, gamma, grid);
    v.gsecond_moments = g_second_ball_moments(R, psi, gamma, grid);
    return v;
}

double log_correction(const Body& K, const SphericalFunction& psi, const RadialMeasure& gamma) {
    const int n = K.dim();
    if (K.support().is_constant()) {
        const double R = K.support().constant_value();
        return std::pow(R, n - 2) * gamma.f(R) * dirichlet_data(psi, K.grid()).l2;
    }
    return first_variation(K, psi * psi * pow(K.support(), -1.0), gamma);
}

double log_correction_fd(const Body& K, const SphericalFunction& psi, const RadialMeasure& gamma, double step) {
    require(step > 0.0, ErrorCode::InvalidArgument, "finite-difference step must be positive");
    const SphericalFunction q = psi * psi * pow(K.support(), -1.0);
    const double fp = first_variation(K, psi + step * q, gamma);
    const double fm = first_variation(K, psi - step * q, gamma);
    return (fp - fm) / (2.0 * step);
}

}  // namespace bms
