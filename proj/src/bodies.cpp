// SPDX-License-Identifier: Apache-2.0
#include "bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"
#include "parallel.hpp"

namespace bms {

namespace {

std::string node_text(const SphereGrid& g, std::size_t k) {
    std::ostringstream os;
    os.precision(6);
    os << "node " << k << " (";
    const auto u = g.node(k);
    for (std::size_t i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u[i];
    os << ")";
    return os.str();
}

struct NodeScan {
    double min_h = std::numeric_limits<double>::infinity();
    double min_eig = std::numeric_limits<double>::infinity();
};

// Smallest support value and curvature eigenvalue of a jet field.
NodeScan scan_jets(const SphereGrid& g, const std::vector<Jet2<double>>& jets) {
    std::vector<double> hv(jets.size()), ev(jets.size());
    parallel_for(jets.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            hv[k] = jets[k].v;
            ev[k] = small_min_eigenvalue(local_derivatives(jets[k], g.node(k), g.frame(k)).q);
        }
    });
    NodeScan out;
    for (std::size_t k = 0; k < jets.size(); ++k) {
        out.min_h = std::min(out.min_h, hv[k]);
        out.min_eig = std::min(out.min_eig, ev[k]);
    }
    return out;
}

}  // namespace

Body body_from_jets(SphericalFunction h, GridPtr grid, std::vector<Jet2<double>> jets) {
    require(grid != nullptr, ErrorCode::InvalidArgument, "body needs a grid");
    require(h.dim() == grid->dim(), ErrorCode::DimensionMismatch, "support function and grid dimensions differ");
    require(jets.size() == grid->size(), ErrorCode::DimensionMismatch, "jet count does not match the grid");
    const SphereGrid& g = *grid;
    const int n = g.dim(), m = n - 1;

    for (std::size_t k = 0; k < jets.size(); ++k)
        if (!(jets[k].v > 0.0))
            throw Error(ErrorCode::NonPositiveSupport, "support function is not positive at " + node_text(g, k),
                        static_cast<std::ptrdiff_t>(k), jets[k].v);

    Body b;
    b.radius_.resize(jets.size());
    std::vector<double> entries(jets.size() * static_cast<std::size_t>(m * m));
    parallel_for(jets.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const LocalDerivatives d = local_derivatives(jets[k], g.node(k), g.frame(k));
            b.radius_[k] = std::sqrt(d.value * d.value + d.grad.squaredNorm());
            for (int a = 0; a < m; ++a)
                for (int c = 0; c < m; ++c) entries[k * static_cast<std::size_t>(m * m) + a * m + c] = d.q(a, c);
        }
    });
    std::vector<double> frames;
    frames.reserve(jets.size() * static_cast<std::size_t>(n * m));
    for (std::size_t k = 0; k < jets.size(); ++k) {
        const auto f = g.frame(k);
        frames.insert(frames.end(), f.begin(), f.end());
    }
    b.q_ = CurvatureField(n, std::move(entries), std::move(frames));
    std::tie(b.min_eig_, b.min_node_) = b.q_.global_min();
    if (!(b.min_eig_ > 0.0))
        throw Error(ErrorCode::NotConvex,
                    "curvature matrix is not positive definite at " + node_text(g, b.min_node_) +
                        ", smallest eigenvalue " + std::to_string(b.min_eig_),
                    static_cast<std::ptrdiff_t>(b.min_node_), b.min_eig_);

    b.symmetric_ = true;
    for (std::size_t k = 0; k < jets.size() && b.symmetric_; ++k) {
        const std::ptrdiff_t a = g.antipode(k);
        if (a < 0 || std::abs(jets[k].v - jets[static_cast<std::size_t>(a)].v) > 1e-12) b.symmetric_ = false;
    }
    b.h_ = std::move(h);
    b.grid_ = std::move(grid);
    b.jets_ = std::move(jets);
    return b;
}

Body body_from_support(const SphericalFunction& h, const GridPtr& grid) {
    require(grid != nullptr, ErrorCode::InvalidArgument, "body needs a grid");
    return body_from_jets(h, grid, node_jets(h, *grid));
}

namespace {

void check_pair(const Body& K, const Body& L, double lambda) {
    require(K.dim() == L.dim(), ErrorCode::DimensionMismatch, "bodies live in different dimensions");
    require(K.grid_ptr() == L.grid_ptr() || K.size() == L.size(), ErrorCode::DimensionMismatch,
            "bodies are sampled on different grids");
    require(lambda >= 0.0 && lambda <= 1.0, ErrorCode::InvalidArgument, "lambda must lie in [0, 1]");
}

}  // namespace

Body minkowski_combine(const Body& K, const Body& L, double lambda) {
    check_pair(K, L, lambda);
    if (lambda == 1.0) return K;
    if (lambda == 0.0) return L;
    std::vector<Jet2<double>> jets(K.size());
    for (std::size_t k = 0; k < jets.size(); ++k) jets[k] = lambda * K.jet(k) + (1.0 - lambda) * L.jet(k);
    return body_from_jets(lambda * K.support() + (1.0 - lambda) * L.support(), K.grid_ptr(), std::move(jets));
}

Body log_combine(const Body& K, const Body& L, double lambda) {
    check_pair(K, L, lambda);
    if (lambda == 1.0) return K;
    if (lambda == 0.0) return L;
    std::vector<Jet2<double>> jets(K.size());
    for (std::size_t k = 0; k < jets.size(); ++k)
        jets[k] = exp(lambda * log(K.jet(k)) + (1.0 - lambda) * log(L.jet(k)));
    return body_from_jets(exp(lambda * log(K.support()) + (1.0 - lambda) * log(L.support())), K.grid_ptr(),
                          std::move(jets));
}

double measure_of_body(const RadialMeasure& gamma, const Body& K) {
    const int n = K.dim();
    std::vector<double> v(K.size());
    parallel_for(K.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) v[k] = K.h(k) * K.curvature().det(k) * moment_a(gamma, K.radius(k), n);
    }, 64);
    return quadrature(K.grid(), v);
}

double unit_ball_volume(int m) { return std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m + 1.0); }

std::vector<double> ball_intrinsic_volumes(int n) {
    std::vector<double> v(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) {
        double binom = 1.0;
        for (int i = 1; i <= j; ++i) binom = binom * (n - j + i) / i;
        v[static_cast<std::size_t>(j)] = binom * unit_ball_volume(n) / unit_ball_volume(n - j);
    }
    return v;
}

std::vector<double> quermass_constants(int n) {
    // On the unit ball Q = I, so int e_j(Q) du = C(n-1, j) |S^{n-1}|.
    const std::vector<double> ball = ball_intrinsic_volumes(n);
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double binom = 1.0;
        for (int i = 1; i <= j; ++i) binom = binom * (n - 1 - j + i) / i;
        c[static_cast<std::size_t>(j)] = ball[static_cast<std::size_t>(j)] / (binom * sphere_area(n));
    }
    return c;
}

std::vector<double> quermassintegrals(const Body& K) {
    const int n = K.dim(), m = n - 1;
    const std::size_t count = K.size();
    // e_j(Q) per node, j = 0..m, from the eigenvalues.
    std::vector<double> e(count * static_cast<std::size_t>(m + 1));
    parallel_for(count, [&](std::size_t b, std::size_t end) {
        for (std::size_t k = b; k < end; ++k) {
            const SmallVec lam = small_eigenvalues(K.curvature().matrix(k));
            std::array<double, kMaxDim> es{};
            es[0] = 1.0;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j >= 1; --j) es[static_cast<std::size_t>(j)] += lam[i] * es[static_cast<std::size_t>(j - 1)];
            for (int j = 0; j <= m; ++j) e[k * static_cast<std::size_t>(m + 1) + j] = es[static_cast<std::size_t>(j)];
        }
    });
    const std::vector<double> c = quermass_constants(n);
    std::vector<double> out(static_cast<std::size_t>(n + 1));
    std::vector<double> col(count);
    for (int j = 0; j <= m; ++j) {
        for (std::size_t k = 0; k < count; ++k) col[k] = e[k * static_cast<std::size_t>(m + 1) + j];
        out[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)] * quadrature(K.grid(), col);
    }
    for (std::size_t k = 0; k < count; ++k) col[k] = K.h(k) * K.curvature().det(k);
    out[static_cast<std::size_t>(n)] = quadrature(K.grid(), col) / n;
    return out;
}

double boundary_inverse_height(const Body& K) {
    std::vector<double> v(K.size());
    for (std::size_t k = 0; k < K.size(); ++k) v[k] = K.curvature().det(k) / K.h(k);
    return quadrature(K.grid(), v);
}

const char* to_string(FamilyKind k) { return k == FamilyKind::Additive ? "additive" : "multiplicative"; }

SphericalFunction PerturbationFamily::additive_direction() const {
    if (kind_ == FamilyKind::Additive) return dir_;
    return base_.support() * log(dir_);
}

SphericalFunction PerturbationFamily::support_at(double s) const {
    if (kind_ == FamilyKind::Additive) return base_.support() + s * dir_;
    return base_.support() * exp(s * log(dir_));
}

std::vector<Jet2<double>> PerturbationFamily::jets_at(double s) const {
    std::vector<Jet2<double>> jets(base_.size());
    if (kind_ == FamilyKind::Additive) {
        for (std::size_t k = 0; k < jets.size(); ++k) jets[k] = base_.jet(k) + s * dir_jets_[k];
    } else {
        for (std::size_t k = 0; k < jets.size(); ++k) jets[k] = base_.jet(k) * exp(s * dir_jets_[k]);
    }
    return jets;
}

Body PerturbationFamily::at(double s) const {
    if (!(std::abs(s) <= a_ * (1.0 + 1e-12))) {
        std::ostringstream os;
        os << "s=" << s << " lies outside the validity interval [-a, a], a=" << a_;
        throw Error(ErrorCode::OutsideValidity, os.str(), -1, s);
    }
    if (s == 0.0) return base_;
    return body_from_jets(support_at(s), base_.grid_ptr(), jets_at(s));
}

PerturbationFamily make_family(FamilyKind kind, const Body& base, const SphericalFunction& direction, double a_max) {
    require(direction.dim() == base.dim(), ErrorCode::DimensionMismatch, "direction and body dimensions differ");
    require(a_max > 1e-6, ErrorCode::InvalidArgument, "maximal validity radius must exceed 1e-6");
    PerturbationFamily fam;
    fam.kind_ = kind;
    fam.base_ = base;
    fam.dir_ = direction;
    std::vector<Jet2<double>> dj = node_jets(direction, base.grid());
    if (kind == FamilyKind::Multiplicative) {
        for (std::size_t k = 0; k < dj.size(); ++k) {
            if (!(dj[k].v > 0.0))
                throw Error(ErrorCode::InvalidArgument,
                            "multiplicative direction is not positive at " + node_text(base.grid(), k),
                            static_cast<std::ptrdiff_t>(k), dj[k].v);
            dj[k] = log(dj[k]);
        }
    }
    fam.dir_jets_ = std::move(dj);

    const double floor = kValidityFloor * base.min_eigenvalue();
    auto valid_at = [&](double s) {
        const NodeScan r = scan_jets(base.grid(), fam.jets_at(s));
        return r.min_h > 0.0 && r.min_eig >= floor;
    };
    // The smallest eigenvalue is concave in s for additive families, so the
    // endpoints decide; multiplicative families are sampled on 17 points.
    auto valid_radius = [&](double a) {
        if (kind == FamilyKind::Additive) return valid_at(a) && valid_at(-a);
        for (int i = 0; i <= 16; ++i) {
            const double s = -a + 2.0 * a * i / 16.0;
            if (s != 0.0 && !valid_at(s)) return false;
        }
        return true;
    };

    if (!valid_radius(1e-6))
        throw Error(ErrorCode::DegenerateFamily, "family is invalid already at s=1e-6");
    fam.trace_.push_back({1e-6, true});
    double lo = 1e-6, hi = a_max;
    if (valid_radius(hi)) {
        fam.trace_.push_back({hi, true});
        lo = hi;
    } else {
        fam.trace_.push_back({hi, false});
        for (int it = 0; it < kValiditySteps; ++it) {
            const double mid = 0.5 * (lo + hi);
            const bool ok = valid_radius(mid);
            fam.trace_.push_back({mid, ok});
            (ok ? lo : hi) = mid;
        }
    }
    fam.a_ = lo;
    return fam;
}

}  // namespace bms
