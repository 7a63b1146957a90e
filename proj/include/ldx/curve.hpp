#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ldx/errors.hpp"
#include "ldx/expr.hpp"
#include "ldx/jet.hpp"
#include "ldx/minkowski.hpp"

namespace ldx {

/// Numerical tolerances, all configurable from the CLI. Defaults follow the
/// library-wide convention: exact conditions of the theory get a scaled band.
struct tolerances {
    double lightlike = 1e-10;      // causal classification band
    double kg = 1e-8;              // frame-degeneracy threshold on k_g
    double assume = 1e-8;          // assumption flags band
    double direct_normal = 1e-8;   // direct-mode normal invariants
    double regular = 1e-10;        // lower bound on |gamma'|
    double ak = 1e-6;              // A_k derivative-vanishing tolerance
    double residual = 1e-9;        // pseudo-sphere membership
    double slice = 1e-6;           // slice detection: max|rho| band
    double class_rho = 1e-6;       // classification: |rho| vs grid scale
    double class_lambda = 1e-6;    // classification: |lambda0|, |lambda1|
    double rank = 1e-8;            // versality numerical-rank threshold
    double quadrature = 1e-10;     // arc-length adaptive Simpson
};

/// Embedding X : U -> R^4_1 given by four expressions in u1, u2, u3.
struct hypersurface_def {
    std::array<expr, 4> x;

    static hypersurface_def parse(const std::array<std::string, 4>& src) {
        static const std::vector<std::string> vars = {"u1", "u2", "u3"};
        hypersurface_def def;
        for (int i = 0; i < 4; ++i) def.x[static_cast<std::size_t>(i)] = parse_expr(src[static_cast<std::size_t>(i)], vars);
        return def;
    }
};

/// Parameter-space curve (u1(s), u2(s), u3(s)).
struct parameter_curve_def {
    std::array<expr, 3> u;

    static parameter_curve_def parse(const std::array<std::string, 3>& src) {
        static const std::vector<std::string> vars = {"s"};
        parameter_curve_def def;
        for (int i = 0; i < 3; ++i) def.u[static_cast<std::size_t>(i)] = parse_expr(src[static_cast<std::size_t>(i)], vars);
        return def;
    }
};

/// Direct spacetime curve (x0(s), ..., x3(s)).
struct spacetime_curve_def {
    std::array<expr, 4> x;

    static spacetime_curve_def parse(const std::array<std::string, 4>& src) {
        static const std::vector<std::string> vars = {"s"};
        spacetime_curve_def def;
        for (int i = 0; i < 4; ++i) def.x[static_cast<std::size_t>(i)] = parse_expr(src[static_cast<std::size_t>(i)], vars);
        return def;
    }
};

/// A compiled curve-on-hypersurface system: either an embedding plus a
/// parameter-space curve, or a direct curve with its unit timelike normal.
/// Immutable after compile; all evaluation methods are const and safe to call
/// concurrently at distinct parameters.
class curve_system {
public:
    /// Jets (in the defining parameter, at base u) of the curve position.
    vec4<jet> position_raw(double u, int order) const {
        jet uj = jet::variable(u, order);
        if (embedded_) {
            std::vector<jet> sv = {uj};
            std::vector<jet> uv(3, uj);
            for (int i = 0; i < 3; ++i) uv[static_cast<std::size_t>(i)] = eval_jet(curve_.u[static_cast<std::size_t>(i)], sv);
            return {eval_jet(surface_.x[0], uv), eval_jet(surface_.x[1], uv), eval_jet(surface_.x[2], uv),
                    eval_jet(surface_.x[3], uv)};
        }
        std::vector<jet> sv = {uj};
        return {eval_jet(direct_curve_.x[0], sv), eval_jet(direct_curve_.x[1], sv),
                eval_jet(direct_curve_.x[2], sv), eval_jet(direct_curve_.x[3], sv)};
    }

    vec4<jet> position_raw(double u) const { return position_raw(u, order_); }

    /// Unit future-directed timelike normal along the curve, as jets in the
    /// defining parameter. Embedded mode normalizes the triple wedge of the
    /// coordinate partials and flips the sign when <n, e0> >= 0.
    vec4<jet> normal_raw(double u, int order) const {
        jet uj = jet::variable(u, order);
        std::vector<jet> sv = {uj};
        if (!embedded_) {
            return {eval_jet(direct_normal_.x[0], sv), eval_jet(direct_normal_.x[1], sv),
                    eval_jet(direct_normal_.x[2], sv), eval_jet(direct_normal_.x[3], sv)};
        }
        std::vector<jet> uv(3, uj);
        for (int i = 0; i < 3; ++i) uv[static_cast<std::size_t>(i)] = eval_jet(curve_.u[static_cast<std::size_t>(i)], sv);
        std::array<vec4<jet>, 3> partials;
        for (int p = 0; p < 3; ++p)
            partials[static_cast<std::size_t>(p)] = {eval_jet(partials_[static_cast<std::size_t>(p)][0], uv),
                                                     eval_jet(partials_[static_cast<std::size_t>(p)][1], uv),
                                                     eval_jet(partials_[static_cast<std::size_t>(p)][2], uv),
                                                     eval_jet(partials_[static_cast<std::size_t>(p)][3], uv)};
        vec4<jet> big = wedge3(partials[0], partials[1], partials[2]);
        jet q = pseudo_dot(big, big);
        if (!(q.value() < 0.0))
            throw not_spacelike_hypersurface("normal direction is not timelike at u=" + std::to_string(u));
        vec4<jet> n = big / sqrt(-q);
        if (n.x0.value() == 0.0) throw internal_error("timelike unit normal with zero time component");
        if (n.x0.value() < 0.0) n = n * (-1.0);  // <n, e0> = -n.x0 must be negative
        return n;
    }

    vec4<jet> normal_raw(double u) const { return normal_raw(u, order_); }

    /// |d gamma / du| at u.
    double speed(double u) const {
        vec4<jet> g = position_raw(u, 1);
        vec4d d = coeff(g, 1);
        double q = pseudo_dot(d, d);
        return q > 0.0 ? std::sqrt(q) : 0.0;
    }

    double total_length() const { return knots_.back().length; }
    double u_min() const { return u_min_; }
    double u_max() const { return u_max_; }
    int jet_order() const { return order_; }
    bool embedded() const { return embedded_; }
    const tolerances& tol() const { return tol_; }

    /// Arc length from the interval start to parameter u (adaptive Simpson,
    /// quadrature tolerance from `tolerances`).
    double arclength_at_param(double u) const {
        auto it = std::upper_bound(knots_.begin(), knots_.end(), u,
                                   [](double val, const knot& k) { return val < k.u; });
        std::size_t i = (it == knots_.begin()) ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
        i = std::min(i, knots_.size() - 1);
        return knots_[i].length + integrate_speed(knots_[i].u, u);
    }

    /// Inverse of arclength_at_param: Newton with a bisection bracket.
    double param_at_arclength(double s) const {
        double L = total_length();
        if (s <= 0.0) return u_min_;
        if (s >= L) return u_max_;
        std::size_t lo = 0, hi = knots_.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (knots_[mid].length <= s ? lo : hi) = mid;
        }
        double a = knots_[lo].u, b = knots_[hi].u;
        double u = a + (b - a) * (s - knots_[lo].length) /
                           std::max(knots_[hi].length - knots_[lo].length, 1e-300);
        for (int iter = 0; iter < 100; ++iter) {
            double f = knots_[lo].length + integrate_speed(knots_[lo].u, u) - s;
            if (f > 0.0)
                b = u;
            else
                a = u;
            double sp = speed(u);
            double step = sp > 0.0 ? f / sp : 0.0;
            double next = u - step;
            if (!(next > a && next < b)) next = 0.5 * (a + b);
            if (std::fabs(next - u) <= 1e-14 * (1.0 + std::fabs(u))) return next;
            u = next;
        }
        return u;
    }

    struct unit_speed {
        double s;           // arc length from the interval start
        double u;           // matching defining parameter
        vec4<jet> gamma;    // jets in arc length, base s
        vec4<jet> n_gamma;  // jets in arc length, base s
    };

    /// Jets of gamma and n_gamma with respect to arc length, by formal series
    /// inversion of the arc-length series (no ODE integration, so derivative
    /// order stays exact).
    unit_speed unit_speed_jets(double s) const {
        double u0 = param_at_arclength(s);
        vec4<jet> g = position_raw(u0);
        vec4<jet> n = normal_raw(u0);
        vec4<jet> gp = derivative(g);
        jet sp2 = pseudo_dot(gp, gp);
        if (!(sp2.value() > tol_.regular * tol_.regular))
            throw irregular_curve("curve tangent not spacelike-regular at u=" + std::to_string(u0));
        jet sigma = sqrt(sp2).antiderivative(0.0);  // arc length offset series in (u - u0)
        std::vector<double> inv = series::invert(sigma.coeffs());
        auto reparam = [&](const jet& component) {
            return jet(s, series::compose(component.coeffs(), inv));
        };
        vec4<jet> gs = {reparam(g.x0), reparam(g.x1), reparam(g.x2), reparam(g.x3)};
        vec4<jet> ns = {reparam(n.x0), reparam(n.x1), reparam(n.x2), reparam(n.x3)};
        return {s, u0, gs, ns};
    }

    friend curve_system compile_embedded(hypersurface_def surface, parameter_curve_def curve,
                                         double u_min, double u_max, int order, tolerances tol);
    friend curve_system compile_direct(spacetime_curve_def curve, spacetime_curve_def normal,
                                       double u_min, double u_max, int order, tolerances tol);

private:
    struct knot {
        double u;
        double length;  // cumulative arc length at u
    };

    curve_system() = default;

    double integrate_speed(double a, double b) const {
        if (a == b) return 0.0;
        std::function<double(double, double, double, double, double, int)> simpson =
            [&](double lo, double hi, double flo, double fmid, double fhi, int depth) -> double {
            double mid = 0.5 * (lo + hi);
            double lmid = speed(0.5 * (lo + mid));
            double rmid = speed(0.5 * (mid + hi));
            double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
            double left = (mid - lo) / 6.0 * (flo + 4.0 * lmid + fmid);
            double right = (hi - mid) / 6.0 * (fmid + 4.0 * rmid + fhi);
            double delta = left + right - whole;
            if (depth <= 0 || std::fabs(delta) <= 15.0 * tol_.quadrature)
                return left + right + delta / 15.0;
            return simpson(lo, mid, flo, lmid, fmid, depth - 1) +
                   simpson(mid, hi, fmid, rmid, fhi, depth - 1);
        };
        double sign = 1.0;
        if (b < a) {
            std::swap(a, b);
            sign = -1.0;
        }
        double mid = 0.5 * (a + b);
        return sign * simpson(a, b, speed(a), speed(mid), speed(b), 28);
    }

    void build_length_table() {
        constexpr int segments = 64;
        knots_.resize(segments + 1);
        double acc = 0.0;
        knots_[0] = {u_min_, 0.0};
        for (int i = 1; i <= segments; ++i) {
            double a = u_min_ + (u_max_ - u_min_) * (i - 1) / static_cast<double>(segments);
            double b = u_min_ + (u_max_ - u_min_) * i / static_cast<double>(segments);
            acc += integrate_speed(a, b);
            knots_[static_cast<std::size_t>(i)] = {b, acc};
        }
    }

    void validate() {
        constexpr int grid = 64;
        for (int i = 0; i <= grid; ++i) {
            double u = u_min_ + (u_max_ - u_min_) * i / static_cast<double>(grid);
            vec4<jet> g = position_raw(u, 2);
            vec4d d = coeff(g, 1);
            double e2 = euclid_dot(d, d);
            if (!(std::sqrt(e2) > tol_.regular))
                throw irregular_curve("|gamma'| below regularity threshold at u=" + std::to_string(u));
            double q = pseudo_dot(d, d);
            if (!(q > 0.0))
                throw irregular_curve("curve tangent not spacelike at u=" + std::to_string(u));
            vec4<jet> n = normal_raw(u, 1);  // throws not_spacelike_hypersurface when degenerate
            if (!embedded_) {
                vec4d nv = value(n);
                double unit_defect = std::fabs(pseudo_dot(nv, nv) + 1.0);
                vec4d that = d / std::sqrt(q);
                double tangency = std::fabs(pseudo_dot(nv, that));
                if (unit_defect > tol_.direct_normal || tangency > tol_.direct_normal)
                    throw bad_direct_normal("direct normal violates <n,n>=-1 or <n,gamma'>=0 at u=" +
                                            std::to_string(u));
            }
        }
    }

    bool embedded_ = false;
    hypersurface_def surface_;
    parameter_curve_def curve_;
    std::array<std::array<expr, 4>, 3> partials_;  // X_{u1}, X_{u2}, X_{u3}
    spacetime_curve_def direct_curve_;
    spacetime_curve_def direct_normal_;
    double u_min_ = 0.0, u_max_ = 1.0;
    int order_ = 7;
    tolerances tol_;
    std::vector<knot> knots_;
};

/// Build and validate an embedded system; K >= 6 so that rho' survives the
/// derivative chain.
inline curve_system compile_embedded(hypersurface_def surface, parameter_curve_def curve,
                                     double u_min, double u_max, int order, tolerances tol = {}) {
    if (order < 6) throw config_error("jet order must be at least 6");
    if (!(u_max > u_min)) throw config_error("empty parameter interval");
    curve_system sys;
    sys.embedded_ = true;
    sys.surface_ = std::move(surface);
    sys.curve_ = std::move(curve);
    for (int p = 0; p < 3; ++p)
        for (int i = 0; i < 4; ++i)
            sys.partials_[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)] =
                diff_expr(sys.surface_.x[static_cast<std::size_t>(i)], p);
    sys.u_min_ = u_min;
    sys.u_max_ = u_max;
    sys.order_ = order;
    sys.tol_ = tol;
    sys.validate();
    sys.build_length_table();
    return sys;
}

/// Build and validate a direct curve-with-normal system.
inline curve_system compile_direct(spacetime_curve_def curve, spacetime_curve_def normal,
                                   double u_min, double u_max, int order, tolerances tol = {}) {
    if (order < 6) throw config_error("jet order must be at least 6");
    if (!(u_max > u_min)) throw config_error("empty parameter interval");
    curve_system sys;
    sys.embedded_ = false;
    sys.direct_curve_ = std::move(curve);
    sys.direct_normal_ = std::move(normal);
    sys.u_min_ = u_min;
    sys.u_max_ = u_max;
    sys.order_ = order;
    sys.tol_ = tol;
    sys.validate();
    sys.build_length_table();
    return sys;
}

}  // namespace ldx
