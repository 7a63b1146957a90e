#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <vector>

#include "ldx/errors.hpp"

namespace ldx {

/// Truncated Taylor series of a smooth real function of one variable,
/// expanded at a fixed base point.
///
/// Coefficients are stored normalized, coeff(k) = f^(k)(base)/k!, so series
/// multiplication is a plain Cauchy product and no factorials overflow.
/// Arithmetic between two jets requires the same base point; the result is
/// truncated to the shorter operand. A jet of order K carries exact values
/// of f, f', ..., f^(K) at the base (up to rounding).
class jet {
public:
    jet() : base_(0.0), c_{0.0} {}

    jet(double base, std::vector<double> coeffs) : base_(base), c_(std::move(coeffs)) {
        if (c_.empty()) c_.push_back(0.0);
    }

    /// f(x) = value near `base`, to the given order.
    static jet constant(double value, double base, int order) {
        std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
        c[0] = value;
        return jet(base, std::move(c));
    }

    /// f(x) = x near `base`: coefficients [base, 1, 0, ...].
    static jet variable(double base, int order) {
        std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
        c[0] = base;
        if (order >= 1) c[1] = 1.0;
        return jet(base, std::move(c));
    }

    double base() const { return base_; }
    int order() const { return static_cast<int>(c_.size()) - 1; }
    double coeff(int k) const { return k <= order() ? c_[static_cast<std::size_t>(k)] : 0.0; }
    double value() const { return c_[0]; }

    /// f^(k)(base) = k! * coeff(k).
    double deriv(int k) const {
        double f = 1.0;
        for (int j = 2; j <= k; ++j) f *= j;
        return f * coeff(k);
    }

    const std::vector<double>& coeffs() const { return c_; }

    /// Jet of f', one order shorter.
    jet derivative() const {
        if (order() == 0) return jet(base_, {0.0});
        std::vector<double> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
        return jet(base_, std::move(d));
    }

    /// Jet of the antiderivative with value `c0` at the base, one order longer.
    jet antiderivative(double c0) const {
        std::vector<double> a(c_.size() + 1);
        a[0] = c0;
        for (std::size_t k = 0; k < c_.size(); ++k) a[k + 1] = c_[k] / static_cast<double>(k + 1);
        return jet(base_, std::move(a));
    }

    jet truncated(int order) const {
        if (order >= this->order()) return *this;
        return jet(base_, std::vector<double>(c_.begin(), c_.begin() + order + 1));
    }

    jet operator-() const {
        jet r = *this;
        for (double& x : r.c_) x = -x;
        return r;
    }

    jet& operator+=(double s) {
        c_[0] += s;
        return *this;
    }
    jet& operator-=(double s) {
        c_[0] -= s;
        return *this;
    }
    jet& operator*=(double s) {
        for (double& x : c_) x *= s;
        return *this;
    }
    jet& operator/=(double s) {
        for (double& x : c_) x /= s;
        return *this;
    }

    friend jet operator+(jet a, double s) { return a += s; }
    friend jet operator+(double s, jet a) { return a += s; }
    friend jet operator-(jet a, double s) { return a -= s; }
    friend jet operator-(double s, const jet& a) { return -a + s; }
    friend jet operator*(jet a, double s) { return a *= s; }
    friend jet operator*(double s, jet a) { return a *= s; }
    friend jet operator/(jet a, double s) { return a /= s; }
    friend jet operator/(double s, const jet& a) { return constant(s, a.base_, a.order()) / a; }

    friend jet operator+(const jet& a, const jet& b) {
        check_compatible(a, b);
        std::size_t n = std::min(a.c_.size(), b.c_.size());
        std::vector<double> c(n);
        for (std::size_t k = 0; k < n; ++k) c[k] = a.c_[k] + b.c_[k];
        return jet(a.base_, std::move(c));
    }

    friend jet operator-(const jet& a, const jet& b) {
        check_compatible(a, b);
        std::size_t n = std::min(a.c_.size(), b.c_.size());
        std::vector<double> c(n);
        for (std::size_t k = 0; k < n; ++k) c[k] = a.c_[k] - b.c_[k];
        return jet(a.base_, std::move(c));
    }

    friend jet operator*(const jet& a, const jet& b) {
        check_compatible(a, b);
        std::size_t n = std::min(a.c_.size(), b.c_.size());
        std::vector<double> c(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a.c_[i] * b.c_[j];
        return jet(a.base_, std::move(c));
    }

    friend jet operator/(const jet& a, const jet& b) {
        check_compatible(a, b);
        if (b.c_[0] == 0.0) throw domain_error("jet division by zero leading coefficient");
        std::size_t n = std::min(a.c_.size(), b.c_.size());
        std::vector<double> q(n);
        for (std::size_t k = 0; k < n; ++k) {
            double acc = a.c_[k];
            for (std::size_t j = 0; j < k; ++j) acc -= q[j] * b.c_[k - j];
            q[k] = acc / b.c_[0];
        }
        return jet(a.base_, std::move(q));
    }

    friend std::ostream& operator<<(std::ostream& out, const jet& j) {
        out << "jet@" << j.base_ << "[";
        for (std::size_t k = 0; k < j.c_.size(); ++k) out << (k ? ", " : "") << j.c_[k];
        return out << "]";
    }

private:
    static void check_compatible(const jet& a, const jet& b) {
        if (a.base_ != b.base_) throw domain_error("jet base point mismatch");
    }

    double base_;
    std::vector<double> c_;
};

inline bool all_zero(const jet& a) {
    for (int k = 0; k <= a.order(); ++k)
        if (a.coeff(k) != 0.0) return false;
    return true;
}

/// |f| where the sign of f(base) is known. Nonsmooth (and rejected) when the
/// leading coefficient vanishes but the jet does not.
inline jet abs(const jet& a) {
    if (a.value() > 0.0) return a;
    if (a.value() < 0.0) return -a;
    if (all_zero(a)) return a;
    throw domain_error("abs of a jet with zero leading coefficient");
}

inline jet sqrt(const jet& a) {
    if (a.value() < 0.0) throw domain_error("sqrt of a jet with negative leading coefficient");
    if (a.value() == 0.0) {
        if (all_zero(a)) return a;
        throw domain_error("sqrt of a jet with zero leading coefficient");
    }
    std::size_t n = a.coeffs().size();
    std::vector<double> r(n);
    r[0] = std::sqrt(a.value());
    for (std::size_t k = 1; k < n; ++k) {
        double acc = a.coeff(static_cast<int>(k));
        for (std::size_t j = 1; j < k; ++j) acc -= r[j] * r[k - j];
        r[k] = acc / (2.0 * r[0]);
    }
    return jet(a.base(), std::move(r));
}

inline jet exp(const jet& a) {
    std::size_t n = a.coeffs().size();
    std::vector<double> e(n);
    e[0] = std::exp(a.value());
    for (std::size_t k = 1; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * a.coeff(static_cast<int>(j)) * e[k - j];
        e[k] = acc / static_cast<double>(k);
    }
    return jet(a.base(), std::move(e));
}

inline jet log(const jet& a) {
    if (a.value() <= 0.0) throw domain_error("log of a jet with nonpositive leading coefficient");
    std::size_t n = a.coeffs().size();
    std::vector<double> l(n);
    l[0] = std::log(a.value());
    for (std::size_t k = 1; k < n; ++k) {
        double acc = static_cast<double>(k) * a.coeff(static_cast<int>(k));
        for (std::size_t j = 1; j < k; ++j) acc -= static_cast<double>(j) * l[j] * a.coeff(static_cast<int>(k - j));
        l[k] = acc / (static_cast<double>(k) * a.value());
    }
    return jet(a.base(), std::move(l));
}

namespace detail {

// sin/cos (circular = true) or sinh/cosh share one recurrence driven by
// s' = c*a', c' = -+s*a'.
inline void sincos_series(const jet& a, bool circular, std::vector<double>& s, std::vector<double>& c) {
    std::size_t n = a.coeffs().size();
    s.assign(n, 0.0);
    c.assign(n, 0.0);
    s[0] = circular ? std::sin(a.value()) : std::sinh(a.value());
    c[0] = circular ? std::cos(a.value()) : std::cosh(a.value());
    double sign = circular ? -1.0 : 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        double as = 0.0, ac = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            double ja = static_cast<double>(j) * a.coeff(static_cast<int>(j));
            as += ja * c[k - j];
            ac += ja * s[k - j];
        }
        s[k] = as / static_cast<double>(k);
        c[k] = sign * ac / static_cast<double>(k);
    }
}

}  // namespace detail

inline jet sin(const jet& a) {
    std::vector<double> s, c;
    detail::sincos_series(a, true, s, c);
    return jet(a.base(), std::move(s));
}

inline jet cos(const jet& a) {
    std::vector<double> s, c;
    detail::sincos_series(a, true, s, c);
    return jet(a.base(), std::move(c));
}

inline jet tan(const jet& a) {
    std::vector<double> s, c;
    detail::sincos_series(a, true, s, c);
    return jet(a.base(), std::move(s)) / jet(a.base(), std::move(c));
}

inline jet sinh(const jet& a) {
    std::vector<double> s, c;
    detail::sincos_series(a, false, s, c);
    return jet(a.base(), std::move(s));
}

inline jet cosh(const jet& a) {
    std::vector<double> s, c;
    detail::sincos_series(a, false, s, c);
    return jet(a.base(), std::move(c));
}

inline jet tanh(const jet& a) {
    std::vector<double> s, c;
    detail::sincos_series(a, false, s, c);
    return jet(a.base(), std::move(s)) / jet(a.base(), std::move(c));
}

/// atan via integration of a'/(1 + a^2); exact at full order because the
/// integrand only needs one order less.
inline jet atan(const jet& a) {
    if (a.order() == 0) return jet(a.base(), {std::atan(a.value())});
    jet d = a.derivative();
    jet w = (a * a + 1.0).truncated(a.order() - 1);
    return (d / w).antiderivative(std::atan(a.value()));
}

/// Integer power by repeated series multiplication; valid for any leading
/// coefficient (negative exponents require a nonzero one).
inline jet pow(const jet& a, int n) {
    if (n == 0) return jet::constant(1.0, a.base(), a.order());
    bool invert = n < 0;
    unsigned long e = invert ? -static_cast<long>(n) : static_cast<long>(n);
    jet acc = jet::constant(1.0, a.base(), a.order());
    jet b = a;
    while (e > 0) {
        if (e & 1u) acc = acc * b;
        e >>= 1u;
        if (e > 0) b = b * b;
    }
    if (invert) return jet::constant(1.0, a.base(), a.order()) / acc;
    return acc;
}

/// Real power, rewritten exp(r*log a) unless r is integral.
inline jet pow(const jet& a, double r) {
    if (r == std::rint(r) && std::fabs(r) <= 1e9) return pow(a, static_cast<int>(r));
    return exp(log(a) * r);
}

inline jet pow(const jet& a, const jet& b) {
    return exp(log(a) * b);
}

namespace series {

/// f(g(x)) for truncated series with g(0) = 0, both around local offsets.
/// Exact to min(order f, order g) by Horner evaluation in the series ring.
inline std::vector<double> compose(const std::vector<double>& f, const std::vector<double>& g) {
    std::size_t n = std::min(f.size(), g.size());
    std::vector<double> r(n, 0.0);
    if (n == 0) return r;
    r[0] = f[n - 1];
    std::vector<double> tmp(n);
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t idx = n - 1 - step;
        // r = r*g + f[idx]
        std::fill(tmp.begin(), tmp.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (r[i] == 0.0) continue;
            for (std::size_t j = 0; i + j < n && j < g.size(); ++j) tmp[i + j] += r[i] * g[j];
        }
        tmp[0] += f[idx];
        r.swap(tmp);
    }
    return r;
}

/// Compositional inverse of s(u) = s1*u + s2*u^2 + ... with s1 != 0:
/// returns u(s) with u(s(x)) = x to the common truncation order.
inline std::vector<double> invert(const std::vector<double>& s) {
    std::size_t n = s.size();
    if (n < 2 || s[0] != 0.0 || s[1] == 0.0)
        throw domain_error("series inversion requires zero constant and nonzero linear term");
    // powers[j] = s^j, triangular in the leading coefficients
    std::vector<std::vector<double>> powers(n);
    powers[0].assign(n, 0.0);
    powers[0][0] = 1.0;
    for (std::size_t j = 1; j < n; ++j) {
        powers[j].assign(n, 0.0);
        const std::vector<double>& prev = powers[j - 1];
        for (std::size_t i = 0; i < n; ++i) {
            if (prev[i] == 0.0) continue;
            for (std::size_t m = 1; i + m < n; ++m) powers[j][i + m] += prev[i] * s[m];
        }
    }
    std::vector<double> b(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        double acc = (k == 1) ? 1.0 : 0.0;
        for (std::size_t j = 1; j < k; ++j) acc -= b[j] * powers[j][k];
        b[k] = acc / powers[k][k];
    }
    return b;
}

}  // namespace series

}  // namespace ldx
