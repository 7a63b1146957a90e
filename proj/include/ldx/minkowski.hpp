#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>

#include "ldx/errors.hpp"
#include "ldx/jet.hpp"

namespace ldx {

/// Vector of R^4_1 with signature (-,+,+,+). The scalar may be a real number
/// or a jet; every operation below is defined for any scalar supporting
/// +, -, *, /, sqrt, which is what lets one code path carry both values and
/// derivatives.
template <class T>
struct vec4 {
    T x0, x1, x2, x3;

    vec4 operator-() const { return {-x0, -x1, -x2, -x3}; }

    friend vec4 operator+(const vec4& a, const vec4& b) {
        return {a.x0 + b.x0, a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
    }
    friend vec4 operator-(const vec4& a, const vec4& b) {
        return {a.x0 - b.x0, a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
    }
    friend vec4 operator*(const vec4& a, const T& s) {
        return {a.x0 * s, a.x1 * s, a.x2 * s, a.x3 * s};
    }
    friend vec4 operator*(const T& s, const vec4& a) { return a * s; }
    friend vec4 operator/(const vec4& a, const T& s) {
        return {a.x0 / s, a.x1 / s, a.x2 / s, a.x3 / s};
    }

    friend std::ostream& operator<<(std::ostream& out, const vec4& v) {
        return out << "(" << v.x0 << ", " << v.x1 << ", " << v.x2 << ", " << v.x3 << ")";
    }
};

using vec4d = vec4<double>;
using vec4j = vec4<jet>;

inline vec4j operator*(const vec4j& a, double s) {
    return {a.x0 * s, a.x1 * s, a.x2 * s, a.x3 * s};
}
inline vec4j operator*(double s, const vec4j& a) { return a * s; }
inline vec4j operator/(const vec4j& a, double s) {
    return {a.x0 / s, a.x1 / s, a.x2 / s, a.x3 / s};
}

/// <x,y> = -x0*y0 + x1*y1 + x2*y2 + x3*y3.
template <class T>
T pseudo_dot(const vec4<T>& x, const vec4<T>& y) {
    return x.x1 * y.x1 + x.x2 * y.x2 + x.x3 * y.x3 - x.x0 * y.x0;
}

/// Euclidean dot on components; used for numerical scales, never for geometry.
template <class T>
T euclid_dot(const vec4<T>& x, const vec4<T>& y) {
    return x.x0 * y.x0 + x.x1 * y.x1 + x.x2 * y.x2 + x.x3 * y.x3;
}

inline double abs_scalar(double v) { return std::fabs(v); }
inline jet abs_scalar(const jet& v) { return abs(v); }

/// ||x|| = sqrt(|<x,x>|).
template <class T>
T pseudo_norm(const vec4<T>& x) {
    using std::sqrt;
    return sqrt(abs_scalar(pseudo_dot(x, x)));
}

template <class T>
T euclid_norm(const vec4<T>& x) {
    using std::sqrt;
    return sqrt(euclid_dot(x, x));
}

/// Pseudo vector product x ^ y ^ z: the formal determinant with first row
/// (-e0, e1, e2, e3) expanded by cofactors. Pseudo-orthogonal to all three
/// arguments and alternating.
template <class T>
vec4<T> wedge3(const vec4<T>& x, const vec4<T>& y, const vec4<T>& z) {
    auto det3 = [](const T& a, const T& b, const T& c,  //
                   const T& d, const T& e, const T& f,  //
                   const T& g, const T& h, const T& i) {
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    };
    T m0 = det3(x.x1, x.x2, x.x3, y.x1, y.x2, y.x3, z.x1, z.x2, z.x3);
    T m1 = det3(x.x0, x.x2, x.x3, y.x0, y.x2, y.x3, z.x0, z.x2, z.x3);
    T m2 = det3(x.x0, x.x1, x.x3, y.x0, y.x1, y.x3, z.x0, z.x1, z.x3);
    T m3 = det3(x.x0, x.x1, x.x2, y.x0, y.x1, y.x2, z.x0, z.x1, z.x2);
    return {-m0, -m1, m2, -m3};
}

/// Real-valued overload that is alternating to the last bit: arguments are
/// brought into a canonical order (tracking permutation parity) before the
/// expansion, so swapping two arguments flips only the sign, and a repeated
/// argument yields the exact zero vector.
inline vec4<double> wedge3(const vec4<double>& x, const vec4<double>& y, const vec4<double>& z) {
    auto eq = [](const vec4<double>& a, const vec4<double>& b) {
        return a.x0 == b.x0 && a.x1 == b.x1 && a.x2 == b.x2 && a.x3 == b.x3;
    };
    if (eq(x, y) || eq(y, z) || eq(x, z)) return {0.0, 0.0, 0.0, 0.0};
    auto less = [](const vec4<double>& a, const vec4<double>& b) {
        if (a.x0 != b.x0) return a.x0 < b.x0;
        if (a.x1 != b.x1) return a.x1 < b.x1;
        if (a.x2 != b.x2) return a.x2 < b.x2;
        return a.x3 < b.x3;
    };
    const vec4<double>* v[3] = {&x, &y, &z};
    double sign = 1.0;
    if (less(*v[1], *v[0])) {
        std::swap(v[0], v[1]);
        sign = -sign;
    }
    if (less(*v[2], *v[1])) {
        std::swap(v[1], v[2]);
        sign = -sign;
    }
    if (less(*v[1], *v[0])) {
        std::swap(v[0], v[1]);
        sign = -sign;
    }
    vec4<double> w = wedge3<double>(*v[0], *v[1], *v[2]);
    return {sign * w.x0, sign * w.x1, sign * w.x2, sign * w.x3};
}

enum class causal { spacelike, timelike, lightlike };

inline const char* to_string(causal c) {
    switch (c) {
        case causal::spacelike: return "spacelike";
        case causal::timelike: return "timelike";
        case causal::lightlike: return "lightlike";
    }
    return "?";
}

/// Classify a nonzero vector, treating |<x,x>| <= tol * ||x||_euclid^2 as
/// lightlike. The exact-zero case of the definitions needs a band numerically.
inline causal causal_character(const vec4d& x, double tol = 1e-10) {
    double e2 = euclid_dot(x, x);
    if (e2 == 0.0) throw zero_vector("causal_character of the zero vector");
    double q = pseudo_dot(x, x);
    if (std::fabs(q) <= tol * e2) return causal::lightlike;
    return q > 0.0 ? causal::spacelike : causal::timelike;
}

/// HP(v,c) = { x : <x,v> = c } with pseudo-normal v.
struct hyperplane {
    vec4d v;
    double c;
};

/// <x,v> - c; zero exactly on the hyperplane.
inline double hyperplane_eval(const hyperplane& h, const vec4d& x) {
    return pseudo_dot(x, h.v) - h.c;
}

/// The two unit pseudo-spheres: H^3(-1) = { <x,x> = -1 } and the de Sitter
/// space S^3_1 = { <x,x> = 1 }.
enum class sphere { h3, s31 };

template <class T>
T pseudo_sphere_residual(const vec4<T>& x, sphere kind) {
    T q = pseudo_dot(x, x);
    return kind == sphere::h3 ? q + 1.0 : q - 1.0;
}

inline vec4d value(const vec4j& v) {
    return {v.x0.value(), v.x1.value(), v.x2.value(), v.x3.value()};
}

inline vec4j derivative(const vec4j& v) {
    return {v.x0.derivative(), v.x1.derivative(), v.x2.derivative(), v.x3.derivative()};
}

inline vec4d coeff(const vec4j& v, int k) {
    return {v.x0.coeff(k), v.x1.coeff(k), v.x2.coeff(k), v.x3.coeff(k)};
}

inline vec4j constant_jets(const vec4d& v, double base, int order) {
    return {jet::constant(v.x0, base, order), jet::constant(v.x1, base, order),
            jet::constant(v.x2, base, order), jet::constant(v.x3, base, order)};
}

inline int min_order(const vec4j& v) {
    return std::min(std::min(v.x0.order(), v.x1.order()), std::min(v.x2.order(), v.x3.order()));
}

}  // namespace ldx
