// SPDX-License-Identifier: Apache-2.0
#include "sphere_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "errors.hpp"

namespace bms {

const char* to_string(Parity p) {
    switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::Neither: return "neither";
    }
    return "neither";
}

namespace detail {

class FunctionNode {
public:
    explicit FunctionNode(int n) : n_(n) {}
    virtual ~FunctionNode() = default;

    int dim() const { return n_; }
    virtual double eval(std::span<const double> x) const = 0;
    virtual Jet2<double> jet(std::span<const double> x) const = 0;
    virtual Jet2<Dual> jet(std::span<const Dual> x) const = 0;
    virtual Parity parity() const = 0;
    virtual bool analytic() const = 0;
    virtual std::string describe() const = 0;
    virtual bool is_constant() const { return false; }
    virtual double constant_value() const { return 0.0; }

private:
    int n_;
};

namespace {

template <class Derived>
class Node : public FunctionNode {
public:
    using FunctionNode::FunctionNode;
    Jet2<double> jet(std::span<const double> x) const override {
        return static_cast<const Derived&>(*this).template jet_t<double>(x);
    }
    Jet2<Dual> jet(std::span<const Dual> x) const override {
        return static_cast<const Derived&>(*this).template jet_t<Dual>(x);
    }
};

using NodePtr = std::shared_ptr<const FunctionNode>;

template <class T>
T ipow(const T& x, int p) {
    T r(1.0);
    for (int i = 0; i < p; ++i) r = r * x;
    return r;
}

Parity combine_sum(Parity a, Parity b) { return a == b ? a : Parity::Neither; }

Parity combine_product(Parity a, Parity b) {
    if (a == Parity::Neither || b == Parity::Neither) return Parity::Neither;
    return a == b ? Parity::Even : Parity::Odd;
}

class ConstantNode final : public Node<ConstantNode> {
public:
    ConstantNode(int n, double c) : Node(n), c_(c) {}
    double eval(std::span<const double>) const override { return c_; }
    template <class T>
    Jet2<T> jet_t(std::span<const T>) const { return Jet2<T>::constant(dim(), T(c_)); }
    Parity parity() const override { return Parity::Even; }
    bool analytic() const override { return true; }
    std::string describe() const override {
        std::ostringstream os;
        os.precision(17);
        os << c_;
        return os.str();
    }
    bool is_constant() const override { return true; }
    double constant_value() const override { return c_; }

private:
    double c_;
};

class PolynomialNode final : public Node<PolynomialNode> {
public:
    PolynomialNode(int n, std::vector<Monomial> terms) : Node(n), terms_(std::move(terms)) {}

    double eval(std::span<const double> x) const override {
        double s = 0.0;
        for (const auto& t : terms_) {
            double m = t.coef;
            for (int k = 0; k < dim(); ++k) m *= ipow(x[k], t.pow[k]);
            s += m;
        }
        return s;
    }

    template <class T>
    Jet2<T> jet_t(std::span<const T> x) const {
        const int n = dim();
        Jet2<T> r = Jet2<T>::constant(n, T(0.0));
        std::array<T, kMaxDim> f{}, d1{}, d2{};
        for (const auto& t : terms_) {
            for (int k = 0; k < n; ++k) {
                const int a = t.pow[k];
                f[k] = ipow(x[k], a);
                d1[k] = a >= 1 ? T(double(a)) * ipow(x[k], a - 1) : T(0.0);
                d2[k] = a >= 2 ? T(double(a * (a - 1))) * ipow(x[k], a - 2) : T(0.0);
            }
            const T c(t.coef);
            T all = c;
            for (int k = 0; k < n; ++k) all = all * f[k];
            r.v += all;
            for (int k = 0; k < n; ++k) {
                if (t.pow[k] == 0) continue;
                T rest = c;
                for (int j = 0; j < n; ++j)
                    if (j != k) rest = rest * f[j];
                r.g[k] += d1[k] * rest;
                r.H(k, k) += d2[k] * rest;
                for (int l = k + 1; l < n; ++l) {
                    if (t.pow[l] == 0) continue;
                    T rest2 = c;
                    for (int j = 0; j < n; ++j)
                        if (j != k && j != l) rest2 = rest2 * f[j];
                    const T v = d1[k] * d1[l] * rest2;
                    r.H(k, l) += v;
                    r.H(l, k) += v;
                }
            }
        }
        return r;
    }

    Parity parity() const override {
        bool any_even = false, any_odd = false;
        for (const auto& t : terms_) {
            if (t.coef == 0.0) continue;
            int deg = 0;
            for (int k = 0; k < dim(); ++k) deg += t.pow[k];
            (deg % 2 == 0 ? any_even : any_odd) = true;
        }
        if (any_even && any_odd) return Parity::Neither;
        return any_odd ? Parity::Odd : Parity::Even;
    }
    bool analytic() const override { return true; }
    std::string describe() const override {
        std::ostringstream os;
        os.precision(17);
        os << "poly[";
        bool first = true;
        for (const auto& t : terms_) {
            if (!first) os << " + ";
            first = false;
            os << t.coef;
            for (int k = 0; k < dim(); ++k)
                if (t.pow[k] > 0) os << "*u" << (k + 1) << (t.pow[k] > 1 ? "^" + std::to_string(t.pow[k]) : "");
        }
        os << "]";
        return os.str();
    }

private:
    std::vector<Monomial> terms_;
};

class SumNode final : public Node<SumNode> {
public:
    SumNode(NodePtr a, NodePtr b) : Node(a->dim()), a_(std::move(a)), b_(std::move(b)) {}
    double eval(std::span<const double> x) const override { return a_->eval(x) + b_->eval(x); }
    template <class T>
    Jet2<T> jet_t(std::span<const T> x) const { return a_->jet(x) + b_->jet(x); }
    Parity parity() const override { return combine_sum(a_->parity(), b_->parity()); }
    bool analytic() const override { return a_->analytic() && b_->analytic(); }
    std::string describe() const override { return "(" + a_->describe() + " + " + b_->describe() + ")"; }

private:
    NodePtr a_, b_;
};

class ProductNode final : public Node<ProductNode> {
public:
    ProductNode(NodePtr a, NodePtr b) : Node(a->dim()), a_(std::move(a)), b_(std::move(b)) {}
    double eval(std::span<const double> x) const override { return a_->eval(x) * b_->eval(x); }
    template <class T>
    Jet2<T> jet_t(std::span<const T> x) const { return a_->jet(x) * b_->jet(x); }
    Parity parity() const override { return combine_product(a_->parity(), b_->parity()); }
    bool analytic() const override { return a_->analytic() && b_->analytic(); }
    std::string describe() const override { return a_->describe() + "*" + b_->describe(); }

private:
    NodePtr a_, b_;
};

class ScaleNode final : public Node<ScaleNode> {
public:
    ScaleNode(double s, NodePtr a) : Node(a->dim()), s_(s), a_(std::move(a)) {}
    double eval(std::span<const double> x) const override { return s_ * a_->eval(x); }
    template <class T>
    Jet2<T> jet_t(std::span<const T> x) const { return T(s_) * a_->jet(x); }
    Parity parity() const override { return a_->parity(); }
    bool analytic() const override { return a_->analytic(); }
    std::string describe() const override {
        std::ostringstream os;
        os.precision(17);
        os << s_ << "*" << a_->describe();
        return os.str();
    }

private:
    double s_;
    NodePtr a_;
};

class ExpNode final : public Node<ExpNode> {
public:
    explicit ExpNode(NodePtr a) : Node(a->dim()), a_(std::move(a)) {}
    double eval(std::span<const double> x) const override { return std::exp(a_->eval(x)); }
    template <class T>
    Jet2<T> jet_t(std::span<const T> x) const { return exp(a_->jet(x)); }
    Parity parity() const override {
        return a_->parity() == Parity::Even ? Parity::Even : Parity::Neither;
    }
    bool analytic() const override { return a_->analytic(); }
    std::string describe() const override { return "exp(" + a_->describe() + ")"; }

private:
    NodePtr a_;
};

class LogNode final : public Node<LogNode> {
public:
    explicit LogNode(NodePtr a) : Node(a->dim()), a_(std::move(a)) {}
    double eval(std::span<const double> x) const override { return std::log(a_->eval(x)); }
    template <class T>
    Jet2<T> jet_t(std::span<const T> x) const { return log(a_->jet(x)); }
    Parity parity() const override {
        return a_->parity() == Parity::Even ? Parity::Even : Parity::Neither;
    }
    bool analytic() const override { return a_->analytic(); }
    std::string describe() const override { return "log(" + a_->describe() + ")"; }

private:
    NodePtr a_;
};

class PowNode final : public Node<PowNode> {
public:
    PowNode(NodePtr a, double p) : Node(a->dim()), a_(std::move(a)), p_(p) {}
    double eval(std::span<const double> x) const override { return std::pow(a_->eval(x), p_); }
    template <class T>
    Jet2<T> jet_t(std::span<const T> x) const { return pow(a_->jet(x), p_); }
    Parity parity() const override {
        return a_->parity() == Parity::Even ? Parity::Even : Parity::Neither;
    }
    bool analytic() const override { return a_->analytic(); }
    std::string describe() const override {
        std::ostringstream os;
        os.precision(17);
        os << "(" << a_->describe() << ")^" << p_;
        return os.str();
    }

private:
    NodePtr a_;
    double p_;
};

/// Central differences of the 0-homogeneous extension x -> f(x/|x|).
class FiniteDifferenceNode : public FunctionNode {
public:
    using FunctionNode::FunctionNode;

    double eval(std::span<const double> x) const override {
        std::array<double, kMaxDim> u{};
        double r2 = 0.0;
        for (int k = 0; k < dim(); ++k) r2 += x[k] * x[k];
        const double r = std::sqrt(r2);
        for (int k = 0; k < dim(); ++k) u[k] = x[k] / r;
        return eval_unit(std::span<const double>(u.data(), static_cast<std::size_t>(dim())));
    }

    Jet2<double> jet(std::span<const double> x) const override {
        const int n = dim();
        double r2 = 0.0;
        for (int k = 0; k < n; ++k) r2 += x[k] * x[k];
        const double step = 1e-5 * std::max(1.0, std::sqrt(r2));
        std::array<double, kMaxDim> y{};
        auto at = [&](int i, double si, int j, double sj) {
            for (int k = 0; k < n; ++k) y[k] = x[k];
            if (i >= 0) y[i] += si;
            if (j >= 0) y[j] += sj;
            return eval(std::span<const double>(y.data(), static_cast<std::size_t>(n)));
        };
        Jet2<double> r = Jet2<double>::constant(n, eval(x));
        for (int i = 0; i < n; ++i) {
            const double fp = at(i, step, -1, 0.0), fm = at(i, -step, -1, 0.0);
            r.g[i] = (fp - fm) / (2.0 * step);
            r.H(i, i) = (fp - 2.0 * r.v + fm) / (step * step);
            for (int j = i + 1; j < n; ++j) {
                const double v = (at(i, step, j, step) - at(i, step, j, -step) - at(i, -step, j, step) +
                                  at(i, -step, j, -step)) /
                                 (4.0 * step * step);
                r.H(i, j) = v;
                r.H(j, i) = v;
            }
        }
        return r;
    }

    Jet2<Dual> jet(std::span<const Dual>) const override {
        throw Error(ErrorCode::Unsupported,
                    "third derivatives are unavailable for a finite-difference function: " + describe());
    }

    bool analytic() const override { return false; }

protected:
    virtual double eval_unit(std::span<const double> u) const = 0;
};

class BlackBoxNode final : public FiniteDifferenceNode {
public:
    BlackBoxNode(int n, std::function<double(std::span<const double>)> f, Parity p, std::string label)
        : FiniteDifferenceNode(n), f_(std::move(f)), parity_(p), label_(std::move(label)) {}
    Parity parity() const override { return parity_; }
    std::string describe() const override { return label_; }

protected:
    double eval_unit(std::span<const double> u) const override { return f_(u); }

private:
    std::function<double(std::span<const double>)> f_;
    Parity parity_;
    std::string label_;
};

class LaplacianNode final : public FiniteDifferenceNode {
public:
    explicit LaplacianNode(NodePtr a) : FiniteDifferenceNode(a->dim()), a_(std::move(a)) {}
    Parity parity() const override { return a_->parity(); }
    std::string describe() const override { return "lap(" + a_->describe() + ")"; }

protected:
    double eval_unit(std::span<const double> u) const override {
        const int n = dim();
        const Jet2<double> j = a_->jet(u);
        double tr = 0.0, uhu = 0.0, ug = 0.0;
        for (int i = 0; i < n; ++i) {
            tr += j.H(i, i);
            ug += u[i] * j.g[i];
            for (int k = 0; k < n; ++k) uhu += u[i] * j.H(i, k) * u[k];
        }
        return tr - uhu - double(n - 1) * ug;
    }

private:
    NodePtr a_;
};

}  // namespace
}  // namespace detail

using detail::NodePtr;

const detail::FunctionNode& SphericalFunction::node() const {
    if (!node_) throw Error(ErrorCode::InvalidArgument, "empty SphericalFunction");
    return *node_;
}

SphericalFunction SphericalFunction::constant(int n, double c) {
    require(n >= 2 && n <= kMaxDim, ErrorCode::InvalidArgument, "dimension must be in [2, 6]");
    return SphericalFunction(std::make_shared<detail::ConstantNode>(n, c));
}

SphericalFunction SphericalFunction::coordinate(int n, int k) {
    require(k >= 0 && k < n, ErrorCode::InvalidArgument, "coordinate index out of range");
    Monomial m;
    m.coef = 1.0;
    m.pow[static_cast<std::size_t>(k)] = 1;
    return polynomial(n, {m});
}

SphericalFunction SphericalFunction::polynomial(int n, std::vector<Monomial> terms) {
    require(n >= 2 && n <= kMaxDim, ErrorCode::InvalidArgument, "dimension must be in [2, 6]");
    double c = 0.0;
    bool only_constant = true;
    for (const auto& t : terms) {
        for (int k = 0; k < kMaxDim; ++k) {
            require(t.pow[k] >= 0, ErrorCode::InvalidArgument, "negative monomial exponent");
            require(k < n || t.pow[k] == 0, ErrorCode::InvalidArgument, "monomial exponent beyond dimension");
            if (t.pow[k] != 0) only_constant = false;
        }
        c += t.coef;
    }
    if (only_constant) return constant(n, c);
    return SphericalFunction(std::make_shared<detail::PolynomialNode>(n, std::move(terms)));
}

SphericalFunction SphericalFunction::trig(std::vector<double> cos_coef, std::vector<double> sin_coef) {
    // cos(kt) + i sin(kt) = (u1 + i u2)^k
    std::vector<Monomial> terms;
    auto binom = [](int k, int j) {
        double b = 1.0;
        for (int i = 1; i <= j; ++i) b = b * double(k - j + i) / double(i);
        return b;
    };
    auto expand = [&](const std::vector<double>& coef, bool imaginary) {
        for (std::size_t kk = 0; kk < coef.size(); ++kk) {
            const int k = static_cast<int>(kk);
            if (coef[kk] == 0.0) continue;
            if (k == 0) {
                if (!imaginary) terms.push_back(Monomial{coef[kk], {}});
                continue;
            }
            for (int j = imaginary ? 1 : 0; j <= k; j += 2) {
                const int sign = ((j / 2) % 2 == 0) ? 1 : -1;
                Monomial m;
                m.coef = coef[kk] * sign * binom(k, j);
                m.pow[0] = k - j;
                m.pow[1] = j;
                terms.push_back(m);
            }
        }
    };
    expand(cos_coef, false);
    expand(sin_coef, true);
    if (terms.empty()) return constant(2, 0.0);
    return polynomial(2, std::move(terms));
}

SphericalFunction SphericalFunction::black_box(int n, std::function<double(std::span<const double>)> f,
                                               Parity declared, std::string label) {
    require(n >= 2 && n <= kMaxDim, ErrorCode::InvalidArgument, "dimension must be in [2, 6]");
    require(static_cast<bool>(f), ErrorCode::InvalidArgument, "empty black-box evaluator");
    return SphericalFunction(std::make_shared<detail::BlackBoxNode>(n, std::move(f), declared, std::move(label)));
}

SphericalFunction SphericalFunction::laplacian_of(const SphericalFunction& f) {
    if (f.is_constant()) return constant(f.dim(), 0.0);
    return SphericalFunction(std::make_shared<detail::LaplacianNode>(f.node_));
}

int SphericalFunction::dim() const { return node().dim(); }
Parity SphericalFunction::parity() const { return node().parity(); }
bool SphericalFunction::is_analytic() const { return node().analytic(); }
bool SphericalFunction::is_constant() const { return node().is_constant(); }
double SphericalFunction::constant_value() const { return node().constant_value(); }
std::string SphericalFunction::describe() const { return node().describe(); }

double SphericalFunction::operator()(std::span<const double> x) const { return node().eval(x); }
Jet2<double> SphericalFunction::jet(std::span<const double> x) const { return node().jet(x); }
Jet2<Dual> SphericalFunction::jet(std::span<const Dual> x) const { return node().jet(x); }

namespace {
void check_same_dim(const SphericalFunction& a, const SphericalFunction& b) {
    require(a.dim() == b.dim(), ErrorCode::DimensionMismatch, "functions live on spheres of different dimension");
}
}  // namespace

SphericalFunction operator+(const SphericalFunction& a, const SphericalFunction& b) {
    check_same_dim(a, b);
    if (a.is_constant() && b.is_constant())
        return SphericalFunction::constant(a.dim(), a.constant_value() + b.constant_value());
    return SphericalFunction(std::make_shared<detail::SumNode>(a.node_, b.node_));
}

SphericalFunction operator-(const SphericalFunction& a, const SphericalFunction& b) { return a + (-1.0) * b; }
SphericalFunction operator-(const SphericalFunction& a) { return (-1.0) * a; }

SphericalFunction operator*(const SphericalFunction& a, const SphericalFunction& b) {
    check_same_dim(a, b);
    if (a.is_constant() && b.is_constant())
        return SphericalFunction::constant(a.dim(), a.constant_value() * b.constant_value());
    if (a.is_constant()) return a.constant_value() * b;
    if (b.is_constant()) return b.constant_value() * a;
    return SphericalFunction(std::make_shared<detail::ProductNode>(a.node_, b.node_));
}

SphericalFunction operator*(double s, const SphericalFunction& a) {
    if (a.is_constant()) return SphericalFunction::constant(a.dim(), s * a.constant_value());
    if (s == 1.0) return a;
    return SphericalFunction(std::make_shared<detail::ScaleNode>(s, a.node_));
}

SphericalFunction operator+(const SphericalFunction& a, double c) {
    return a + SphericalFunction::constant(a.dim(), c);
}

SphericalFunction exp(const SphericalFunction& a) {
    if (a.is_constant()) return SphericalFunction::constant(a.dim(), std::exp(a.constant_value()));
    return SphericalFunction(std::make_shared<detail::ExpNode>(a.node_));
}

SphericalFunction log(const SphericalFunction& a) {
    if (a.is_constant()) return SphericalFunction::constant(a.dim(), std::log(a.constant_value()));
    return SphericalFunction(std::make_shared<detail::LogNode>(a.node_));
}

SphericalFunction pow(const SphericalFunction& a, double p) {
    if (a.is_constant()) return SphericalFunction::constant(a.dim(), std::pow(a.constant_value(), p));
    if (p == 1.0) return a;
    return SphericalFunction(std::make_shared<detail::PowNode>(a.node_, p));
}

}  // namespace bms
