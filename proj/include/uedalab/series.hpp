#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "uedalab/scalar.hpp"

namespace uedalab {

using MultiIndex = std::vector<int>;

inline int index_degree(const MultiIndex& a) {
    return std::accumulate(a.begin(), a.end(), 0);
}

/// Graded lexicographic order: total degree first, then lex.
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        int da = index_degree(a), db = index_degree(b);
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

/// Calls fn for every multi-index in nvars variables of total degree exactly d,
/// in lexicographic order.
inline void for_each_index_of_degree(int nvars, int d, const std::function<void(const MultiIndex&)>& fn) {
    MultiIndex a(nvars, 0);
    std::function<void(int, int)> rec = [&](int pos, int rem) {
        if (pos == nvars - 1) {
            a[pos] = rem;
            fn(a);
            a[pos] = 0;
            return;
        }
        for (int v = rem; v >= 0; --v) {
            a[pos] = v;
            rec(pos + 1, rem - v);
        }
        a[pos] = 0;
    };
    if (nvars == 0) return;
    rec(0, d);
}

/// Formal power series in num_vars variables truncated at total degree `order`.
/// Absent indices are zero; exact zeros are never stored. All binary operations
/// truncate to the minimum order of the operands and never extend it.
template <class C>
class MultiSeries {
public:
    using Traits = scalar_traits<C>;
    using CoeffMap = std::map<MultiIndex, C, GradedLexLess>;

    MultiSeries() : nvars_(1), order_(0) {}
    MultiSeries(int nvars, int order) : nvars_(nvars), order_(order) {
        if (nvars < 1 || order < 0) throw std::invalid_argument("MultiSeries: bad shape");
    }

    static MultiSeries zero(int nvars, int order) { return MultiSeries(nvars, order); }
    static MultiSeries constant(int nvars, int order, const C& c) {
        MultiSeries s(nvars, order);
        s.set_coeff(MultiIndex(nvars, 0), c);
        return s;
    }
    static MultiSeries one(int nvars, int order) { return constant(nvars, order, Traits::one()); }
    static MultiSeries variable(int nvars, int order, int i) {
        MultiSeries s(nvars, order);
        MultiIndex a(nvars, 0);
        a[i] = 1;
        s.set_coeff(a, Traits::one());
        return s;
    }

    int num_vars() const { return nvars_; }
    int order() const { return order_; }
    const CoeffMap& coeffs() const { return coeffs_; }

    C coeff(const MultiIndex& a) const {
        auto it = coeffs_.find(a);
        return it == coeffs_.end() ? Traits::zero() : it->second;
    }
    void set_coeff(const MultiIndex& a, const C& c) {
        if (static_cast<int>(a.size()) != nvars_) throw std::invalid_argument("index arity mismatch");
        if (index_degree(a) > order_) throw std::invalid_argument("index degree exceeds order");
        if (Traits::is_zero(c))
            coeffs_.erase(a);
        else
            coeffs_[a] = c;
    }
    void add_coeff(const MultiIndex& a, const C& c) { set_coeff(a, coeff(a) + c); }

    C constant_term() const { return coeff(MultiIndex(nvars_, 0)); }
    bool is_zero() const { return coeffs_.empty(); }

    /// Smallest total degree with a nonzero coefficient; order+1 if zero.
    int valuation() const {
        if (coeffs_.empty()) return order_ + 1;
        return index_degree(coeffs_.begin()->first);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& [a, c] : coeffs_) m = std::max(m, Traits::abs(c));
        return m;
    }

    MultiSeries truncated(int new_order) const {
        MultiSeries out(nvars_, std::min(new_order, order_));
        for (const auto& [a, c] : coeffs_)
            if (index_degree(a) <= out.order_) out.coeffs_[a] = c;
        return out;
    }

    /// The homogeneous part of total degree d.
    MultiSeries degree_part(int d) const {
        MultiSeries out(nvars_, order_);
        for (const auto& [a, c] : coeffs_)
            if (index_degree(a) == d) out.coeffs_[a] = c;
        return out;
    }

    friend MultiSeries operator+(const MultiSeries& f, const MultiSeries& g) {
        check_vars(f, g);
        MultiSeries out = f.truncated(g.order_);
        for (const auto& [a, c] : g.coeffs_)
            if (index_degree(a) <= out.order_) out.add_coeff(a, c);
        return out;
    }
    friend MultiSeries operator-(const MultiSeries& f, const MultiSeries& g) {
        check_vars(f, g);
        MultiSeries out = f.truncated(g.order_);
        for (const auto& [a, c] : g.coeffs_)
            if (index_degree(a) <= out.order_) out.add_coeff(a, -c);
        return out;
    }
    MultiSeries operator-() const {
        MultiSeries out(nvars_, order_);
        for (const auto& [a, c] : coeffs_) out.coeffs_[a] = -c;
        return out;
    }
    friend MultiSeries operator*(const MultiSeries& f, const C& s) {
        MultiSeries out(f.nvars_, f.order_);
        for (const auto& [a, c] : f.coeffs_) out.set_coeff(a, c * s);
        return out;
    }
    friend MultiSeries operator*(const C& s, const MultiSeries& f) { return f * s; }

    friend MultiSeries operator*(const MultiSeries& f, const MultiSeries& g) {
        check_vars(f, g);
        MultiSeries out(f.nvars_, std::min(f.order_, g.order_));
        for (const auto& [a, ca] : f.coeffs_) {
            int da = index_degree(a);
            if (da > out.order_) break;
            for (const auto& [b, cb] : g.coeffs_) {
                if (da + index_degree(b) > out.order_) break;
                MultiIndex s(f.nvars_);
                for (int i = 0; i < f.nvars_; ++i) s[i] = a[i] + b[i];
                out.add_coeff(s, ca * cb);
            }
        }
        return out;
    }
    MultiSeries& operator+=(const MultiSeries& g) { return *this = *this + g; }
    MultiSeries& operator-=(const MultiSeries& g) { return *this = *this - g; }
    MultiSeries& operator*=(const MultiSeries& g) { return *this = *this * g; }

private:
    static void check_vars(const MultiSeries& f, const MultiSeries& g) {
        if (f.nvars_ != g.nvars_) throw std::invalid_argument("MultiSeries: num_vars mismatch");
    }

    int nvars_;
    int order_;
    CoeffMap coeffs_;
};

/// Univariate truncated series with dense coefficient storage, degrees 0..order.
template <class C>
class UniSeries {
public:
    using Traits = scalar_traits<C>;

    explicit UniSeries(int order) : coeffs_(order + 1, Traits::zero()) {
        if (order < 0) throw std::invalid_argument("UniSeries: negative order");
    }
    UniSeries(int order, std::vector<C> coeffs) : UniSeries(order) {
        for (size_t i = 0; i < coeffs.size() && i < coeffs_.size(); ++i) coeffs_[i] = coeffs[i];
    }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const C& operator[](int i) const { return coeffs_[i]; }
    C& operator[](int i) { return coeffs_[i]; }

    MultiSeries<C> to_multi() const {
        MultiSeries<C> out(1, order());
        for (int i = 0; i <= order(); ++i)
            if (!Traits::is_zero(coeffs_[i])) out.set_coeff({i}, coeffs_[i]);
        return out;
    }
    static UniSeries from_multi(const MultiSeries<C>& m) {
        if (m.num_vars() != 1) throw std::invalid_argument("from_multi: not univariate");
        UniSeries out(m.order());
        for (const auto& [a, c] : m.coeffs()) out.coeffs_[a[0]] = c;
        return out;
    }

    friend UniSeries operator+(const UniSeries& f, const UniSeries& g) {
        UniSeries out(std::min(f.order(), g.order()));
        for (int i = 0; i <= out.order(); ++i) out[i] = f[i] + g[i];
        return out;
    }
    friend UniSeries operator-(const UniSeries& f, const UniSeries& g) {
        UniSeries out(std::min(f.order(), g.order()));
        for (int i = 0; i <= out.order(); ++i) out[i] = f[i] - g[i];
        return out;
    }
    friend UniSeries operator*(const UniSeries& f, const UniSeries& g) {
        UniSeries out(std::min(f.order(), g.order()));
        for (int i = 0; i <= out.order(); ++i)
            for (int j = 0; j + i <= out.order(); ++j) out[i + j] += f[i] * g[j];
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (const C& c : coeffs_) m = std::max(m, Traits::abs(c));
        return m;
    }

private:
    std::vector<C> coeffs_;
};

/// Truncation of f(g(X)); g must have zero constant term. The degree-m
/// coefficient of the result depends only on g's coefficients of degree <= m.
template <class C>
UniSeries<C> compose(const UniSeries<C>& f, const UniSeries<C>& g) {
    using T = scalar_traits<C>;
    if (!T::is_zero(g[0])) throw std::invalid_argument("compose: inner series has nonzero constant term");
    int order = std::min(f.order(), g.order());
    UniSeries<C> out(order);
    out[0] = f[0];
    UniSeries<C> gt(order);
    for (int i = 0; i <= order; ++i) gt[i] = g[i];
    UniSeries<C> power = gt;
    for (int k = 1; k <= order; ++k) {
        if (k > 1) power = power * gt;
        if (!T::is_zero(f[k]))
            for (int i = 0; i <= order; ++i) out[i] += f[k] * power[i];
    }
    return out;
}

/// Truncation of f(g^(1), ..., g^(r)); every g must have zero constant term.
template <class C>
MultiSeries<C> substitute(const MultiSeries<C>& f, const std::vector<MultiSeries<C>>& g) {
    using T = scalar_traits<C>;
    if (static_cast<int>(g.size()) != f.num_vars())
        throw std::invalid_argument("substitute: wrong number of inner series");
    int order = f.order();
    int gvars = g.empty() ? f.num_vars() : g[0].num_vars();
    for (const auto& gi : g) {
        if (gi.num_vars() != gvars) throw std::invalid_argument("substitute: inner num_vars mismatch");
        if (!T::is_zero(gi.constant_term()))
            throw std::invalid_argument("substitute: inner series has nonzero constant term");
        order = std::min(order, gi.order());
    }
    int r = f.num_vars();
    // Powers g[mu]^p computed on demand.
    std::vector<std::vector<MultiSeries<C>>> pw(r);
    for (int mu = 0; mu < r; ++mu) pw[mu].push_back(MultiSeries<C>::one(gvars, order));
    auto power = [&](int mu, int p) -> const MultiSeries<C>& {
        while (static_cast<int>(pw[mu].size()) <= p)
            pw[mu].push_back(pw[mu].back() * g[mu].truncated(order));
        return pw[mu][p];
    };
    MultiSeries<C> out(gvars, order);
    for (const auto& [a, c] : f.coeffs()) {
        if (index_degree(a) > order) break;
        MultiSeries<C> term = MultiSeries<C>::constant(gvars, order, c);
        for (int mu = 0; mu < r; ++mu)
            if (a[mu] > 0) term = term * power(mu, a[mu]);
        out += term;
    }
    return out;
}

/// Truncation of 1/(1-u) = sum u^k; u must have zero constant term.
template <class C>
MultiSeries<C> reciprocal_one_minus(const MultiSeries<C>& u) {
    using T = scalar_traits<C>;
    if (!T::is_zero(u.constant_term()))
        throw std::invalid_argument("reciprocal_one_minus: nonzero constant term");
    MultiSeries<C> out = MultiSeries<C>::one(u.num_vars(), u.order());
    MultiSeries<C> term = out;
    for (int k = 1; k <= u.order(); ++k) {
        term = term * u;
        if (term.is_zero()) break;
        out += term;
    }
    return out;
}

/// Multiplicative inverse of a jet with invertible constant term.
template <class C>
MultiSeries<C> jet_inverse(const MultiSeries<C>& g) {
    using T = scalar_traits<C>;
    C c = g.constant_term();
    C ci = T::inverse(c);
    MultiSeries<C> u = MultiSeries<C>::one(g.num_vars(), g.order()) - g * ci;
    u.set_coeff(MultiIndex(g.num_vars(), 0), T::zero());  // exactly zero modulo round-off
    return reciprocal_one_minus(u) * ci;
}

/// Coefficient-wise modulus (float coefficients only).
inline MultiSeries<std::complex<double>> majorize(const MultiSeries<std::complex<double>>& f) {
    MultiSeries<std::complex<double>> out(f.num_vars(), f.order());
    for (const auto& [a, c] : f.coeffs()) out.set_coeff(a, std::complex<double>(std::abs(c), 0.0));
    return out;
}

/// Evaluator for the implicit equation F(X, Y) = 0; receives jets for
/// X^1..X^r and Y (all with the same num_vars and order) and must return the
/// corresponding jet of F, exactly through the shared order.
template <class C>
using ImplicitEvaluator =
    std::function<MultiSeries<C>(const std::vector<MultiSeries<C>>&, const MultiSeries<C>&)>;

namespace detail {

// Embed an r-variable jet into r+1 variables (trailing exponent 0).
template <class C>
MultiSeries<C> embed_extra_var(const MultiSeries<C>& s) {
    MultiSeries<C> out(s.num_vars() + 1, s.order());
    for (const auto& [a, c] : s.coeffs()) {
        MultiIndex b = a;
        b.push_back(0);
        out.set_coeff(b, c);
    }
    return out;
}

// Extract the part with exponent k in the last variable, dropping that variable.
template <class C>
MultiSeries<C> extra_var_slice(const MultiSeries<C>& s, int k) {
    MultiSeries<C> out(s.num_vars() - 1, s.order());
    for (const auto& [a, c] : s.coeffs()) {
        if (a.back() != k) continue;
        MultiIndex b(a.begin(), a.end() - 1);
        out.set_coeff(b, c);
    }
    return out;
}

}  // namespace detail

/// Solves F(X, Y(X)) = O(degree M+1) for the unique jet Y with Y(0) = 0, by
/// Newton iteration on jets. The Y-derivative is obtained from the evaluator
/// itself by adjoining a formal increment variable.
template <class C>
MultiSeries<C> solve_implicit(const ImplicitEvaluator<C>& F, int r, int M,
                              double deriv_floor = 1e-8) {
    using T = scalar_traits<C>;
    int cap = 2 * static_cast<int>(std::ceil(std::log2(std::max(2, M)))) + 4;
    // Jets in r+1 variables; the last variable is the Newton increment.
    std::vector<MultiSeries<C>> X;
    for (int i = 0; i < r; ++i) X.push_back(MultiSeries<C>::variable(r + 1, M, i));
    MultiSeries<C> t_var = MultiSeries<C>::variable(r + 1, M, r);
    MultiSeries<C> y(r, M);
    double scale = 1.0;
    for (int it = 0; it <= cap; ++it) {
        MultiSeries<C> g = F(X, detail::embed_extra_var(y) + t_var);
        MultiSeries<C> f0 = detail::extra_var_slice(g, 0);
        MultiSeries<C> fy = detail::extra_var_slice(g, 1);
        scale = std::max({1.0, f0.max_abs(), y.max_abs()});
        if (it == 0) {
            if (T::abs(f0.constant_term()) > 1e-12 * scale)
                throw std::invalid_argument("solve_implicit: F(0,0) != 0");
            if (T::abs(fy.constant_term()) < deriv_floor)
                throw std::domain_error("degenerate implicit problem");
        }
        bool done = T::exact ? f0.is_zero() : f0.max_abs() <= 1e-13 * scale;
        if (done) return y;
        MultiSeries<C> delta = f0 * jet_inverse(fy);
        y = (y - delta).truncated(M);
        y.set_coeff(MultiIndex(r, 0), T::zero());  // Y(0) = 0 by construction
    }
    // Newton doubles the correct order per step; reaching the cap with a
    // residual above tolerance means the preconditions were violated.
    throw std::runtime_error("solve_implicit: no convergence within iteration cap");
}

}  // namespace uedalab
