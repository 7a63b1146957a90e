// Test-only numerical oracles, independent of the jet evaluation path:
// Richardson-extrapolated central differences, adaptive Simpson quadrature,
// and the classical curvature/torsion formulas for curves in a flat slice.
#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace oracles {

template <class F>
double fd1(F&& f, double x, double h = 1e-4) {
    auto d = [&](double hh) { return (f(x + hh) - f(x - hh)) / (2.0 * hh); };
    return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

template <class F>
double fd2(F&& f, double x, double h = 1e-3) {
    auto d = [&](double hh) { return (f(x + hh) - 2.0 * f(x) + f(x - hh)) / (hh * hh); };
    return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

template <class F>
double fd3(F&& f, double x, double h = 1e-2) {
    auto d = [&](double hh) {
        return (f(x + 2.0 * hh) - 2.0 * f(x + hh) + 2.0 * f(x - hh) - f(x - 2.0 * hh)) /
               (2.0 * hh * hh * hh);
    };
    return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

template <class F>
double fd4(F&& f, double x, double h = 1e-2) {
    auto d = [&](double hh) {
        return (f(x + 2.0 * hh) - 4.0 * f(x + hh) + 6.0 * f(x) - 4.0 * f(x - hh) +
                f(x - 2.0 * hh)) /
               (hh * hh * hh * hh);
    };
    return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

/// Adaptive Simpson on [a, b].
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-11, int depth = 30) {
    std::function<double(double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, int d) -> double {
        double mid = 0.5 * (lo + hi);
        double lm = f(0.5 * (lo + mid));
        double rm = f(0.5 * (mid + hi));
        double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        double left = (mid - lo) / 6.0 * (flo + 4.0 * lm + fmid);
        double right = (hi - mid) / 6.0 * (fmid + 4.0 * rm + fhi);
        double delta = left + right - whole;
        if (d <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
        return rec(lo, mid, flo, lm, fmid, d - 1) + rec(mid, hi, fmid, rm, fhi, d - 1);
    };
    return rec(a, b, f(a), f(0.5 * (a + b)), f(b), depth);
}

using vec3 = std::array<double, 3>;

inline vec3 cross(const vec3& a, const vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double dot(const vec3& a, const vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const vec3& a) { return std::sqrt(dot(a, a)); }

/// Classical curvature and torsion of a 3D curve from finite-difference
/// derivatives of its parametrization (any regular parameter).
template <class C>
std::array<double, 2> frenet_curvature_torsion(C&& curve, double u) {
    auto comp = [&](int i) { return [&curve, i](double t) { return curve(t)[static_cast<std::size_t>(i)]; }; };
    vec3 d1{fd1(comp(0), u), fd1(comp(1), u), fd1(comp(2), u)};
    vec3 d2{fd2(comp(0), u), fd2(comp(1), u), fd2(comp(2), u)};
    vec3 d3{fd3(comp(0), u), fd3(comp(1), u), fd3(comp(2), u)};
    vec3 c12 = cross(d1, d2);
    double k = norm(c12) / std::pow(norm(d1), 3);
    double tau = dot(c12, d3) / dot(c12, c12);
    return {k, tau};
}

}  // namespace oracles
