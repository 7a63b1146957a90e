#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ldx/curve.hpp"
#include "ldx/errors.hpp"
#include "ldx/frame.hpp"
#include "ldx/jet.hpp"
#include "ldx/minkowski.hpp"

namespace ldx {

/// Which of the two tangential height families (equivalently, which target
/// surface) is meant: hyperbolic pairs with directions v in H^3(-1) (timelike
/// tangential heights), de_sitter with v in S^3_1 (spacelike tangential).
enum class surface_kind { hyperbolic, de_sitter };

inline sphere sphere_of(surface_kind kind) {
    return kind == surface_kind::hyperbolic ? sphere::h3 : sphere::s31;
}

inline const char* to_string(surface_kind kind) {
    return kind == surface_kind::hyperbolic ? "hyperbolic" : "desitter";
}

namespace detail {

inline void require_on_sphere(const vec4d& v, surface_kind kind, double tol) {
    double r = pseudo_sphere_residual(v, sphere_of(kind));
    if (std::fabs(r) > tol)
        throw bad_direction("direction off the " +
                            std::string(kind == surface_kind::hyperbolic ? "H^3(-1)" : "S^3_1") +
                            " pseudo-sphere, residual " + std::to_string(r));
}

}  // namespace detail

/// Jet of the tangential height function h_v(s) = <t(s), v> at s, for a fixed
/// direction v on the pseudo-sphere matching `kind`.
inline jet height_jet(const frame_sample& f, surface_kind kind, const vec4d& v, double sphere_tol = 1e-9) {
    detail::require_on_sphere(v, kind, sphere_tol);
    vec4<jet> vc = constant_jets(v, f.s, min_order(f.t_jets));
    return pseudo_dot(f.t_jets, vc);
}

inline jet height_jet(const curve_system& sys, surface_kind kind, const vec4d& v, double s) {
    return height_jet(frame_at(sys, s), kind, v, sys.tol().residual);
}

/// Outcome of the brute-force derivative scan of a one-variable function g:
/// g has an A_k singularity when g, g', ..., g^(k) all vanish and g^(k+1)
/// does not, with "vanish" meaning |g^(j)| <= tol * scale and
/// scale = max(1, max_j |g^(j)|).
struct singularity_report {
    enum class kind { a_k, infinite_within_tolerance, not_vanishing };

    double s0 = 0.0;
    kind status = kind::not_vanishing;
    int order = -1;  // the k of A_k; valid only when status == a_k
    std::vector<double> derivative_magnitudes;  // |g|, |g'|, ..., |g^(k_max+1)|
    double threshold = 0.0;                     // tol * scale actually applied
    double scale = 1.0;

    bool is_order(int k) const { return status == kind::a_k && order == k; }
};

namespace detail {

inline singularity_report scan_orders(const jet& g, double s0, int k_max, double tol) {
    if (k_max + 1 > g.order())
        throw internal_error("A_k scan needs derivatives beyond the available jet order");
    singularity_report rep;
    rep.s0 = s0;
    rep.derivative_magnitudes.resize(static_cast<std::size_t>(k_max) + 2);
    double scale = 1.0;
    for (int j = 0; j <= k_max + 1; ++j) {
        double m = std::fabs(g.deriv(j));
        rep.derivative_magnitudes[static_cast<std::size_t>(j)] = m;
        scale = std::max(scale, m);
    }
    rep.scale = scale;
    rep.threshold = tol * scale;
    for (int j = 0; j <= k_max + 1; ++j) {
        if (rep.derivative_magnitudes[static_cast<std::size_t>(j)] > rep.threshold) {
            if (j == 0) {
                rep.status = singularity_report::kind::not_vanishing;
            } else {
                rep.status = singularity_report::kind::a_k;
                rep.order = j - 1;
            }
            return rep;
        }
    }
    rep.status = singularity_report::kind::infinite_within_tolerance;
    return rep;
}

}  // namespace detail

/// Brute-force A_k detector on the tangential height function at s0.
inline singularity_report detect_Ak(const curve_system& sys, surface_kind kind, const vec4d& v,
                                    double s0, int k_max = 4, double tol = 1e-6) {
    jet h = height_jet(sys, kind, v, s0);
    return detail::scan_orders(h, s0, k_max, tol);
}

inline singularity_report detect_Ak(const frame_sample& f, surface_kind kind, const vec4d& v,
                                    int k_max = 4, double tol = 1e-6, double sphere_tol = 1e-9) {
    jet h = height_jet(f, kind, v, sphere_tol);
    return detail::scan_orders(h, f.s, k_max, tol);
}

/// The closed-form direction killing h and h' at s:
///   hyperbolic:  v = cosh(theta)/sqrt(k_g^2-k_n^2) (k_g n_gamma + k_n n1) + sinh(theta) n2
///   de Sitter:   v = cos(theta)/sqrt(k_n^2-k_g^2) (k_g n_gamma + k_n n1) + sin(theta) n2
inline vec4d closed_form_direction(const frame_sample& f, surface_kind kind, double theta,
                                   double eps_assume = 1e-8) {
    double gap = f.k_g * f.k_g - f.k_n * f.k_n;
    if (kind == surface_kind::hyperbolic) {
        if (!(gap > eps_assume))
            throw wrong_regime("k_g^2 - k_n^2 not positive: hyperbolic direction undefined");
        double den = std::sqrt(gap);
        vec4d core = (f.n_gamma * f.k_g + f.n1 * f.k_n) * (std::cosh(theta) / den);
        return core + f.n2 * std::sinh(theta);
    }
    if (!(gap < -eps_assume))
        throw wrong_regime("k_n^2 - k_g^2 not positive: de Sitter direction undefined");
    double den = std::sqrt(-gap);
    vec4d core = (f.n_gamma * f.k_g + f.n1 * f.k_n) * (std::cos(theta) / den);
    return core + f.n2 * std::sin(theta);
}

inline vec4d closed_form_direction(const curve_system& sys, surface_kind kind, double s, double theta) {
    return closed_form_direction(frame_at(sys, s), kind, theta, sys.tol().assume);
}

/// Versality witnesses at (s0, v0): the numerical rank of the 2x3 matrix of
/// first/second derivative components of the height family in pseudo-sphere
/// chart coordinates, and the determinant of its 3x3 extension by third
/// derivatives.
struct versality_report {
    int rank_B = 0;
    double det_A = 0.0;
    double sv_min = 0.0, sv_max = 0.0;  // singular values of B
    double det_scale = 1.0;             // Hadamard bound of A's rows
};

inline versality_report versality_check(const curve_system& sys, surface_kind kind, double s0,
                                        const vec4d& v0) {
    detail::require_on_sphere(v0, kind, sys.tol().residual);
    frame_sample f = frame_at(sys, s0);

    // gamma derivative components x_i^(j), j = 1..3
    std::array<std::array<double, 4>, 3> d{};
    jet comps[4] = {f.t_jets.x0, f.t_jets.x1, f.t_jets.x2, f.t_jets.x3};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) d[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = comps[i].deriv(j);

    // Chart on the pseudo-sphere: solve component p of v in terms of the rest.
    // For H^3(-1), |v0| >= 1 so p = 0 always works; for S^3_1 the time
    // component can vanish, so pick the largest-magnitude component.
    const double vcomp[4] = {v0.x0, v0.x1, v0.x2, v0.x3};
    int p = 0;
    if (kind == surface_kind::de_sitter) {
        for (int i = 1; i < 4; ++i)
            if (std::fabs(vcomp[i]) > std::fabs(vcomp[p])) p = i;
    }
    if (vcomp[p] == 0.0) throw internal_error("degenerate pseudo-sphere chart pivot");
    const double eps_i[4] = {-1.0, 1.0, 1.0, 1.0};

    // rows[j][c]: j-th derivative row over the three chart coordinates
    double rows[3][3];
    for (int j = 0; j < 3; ++j) {
        int c = 0;
        for (int i = 0; i < 4; ++i) {
            if (i == p) continue;
            rows[j][c] =
                eps_i[i] * (d[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] -
                            (vcomp[i] / vcomp[p]) * d[static_cast<std::size_t>(j)][static_cast<std::size_t>(p)]);
            ++c;
        }
    }

    versality_report rep;
    // singular values of the 2x3 matrix B from the 2x2 Gram eigenvalues
    double ff = 0.0, fg = 0.0, gg = 0.0;
    for (int c = 0; c < 3; ++c) {
        ff += rows[0][c] * rows[0][c];
        fg += rows[0][c] * rows[1][c];
        gg += rows[1][c] * rows[1][c];
    }
    double tr = ff + gg;
    double det = ff * gg - fg * fg;
    double disc = std::sqrt(std::max(tr * tr / 4.0 - det, 0.0));
    double l1 = tr / 2.0 + disc, l2 = std::max(tr / 2.0 - disc, 0.0);
    rep.sv_max = std::sqrt(l1);
    rep.sv_min = std::sqrt(l2);
    double thr = sys.tol().rank * std::max(rep.sv_max, 1e-300);
    rep.rank_B = (rep.sv_max > 0.0 ? 1 : 0) + (rep.sv_min > thr ? 1 : 0);

    rep.det_A = rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1]) -
                rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0]) +
                rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]);
    double scale = 1.0;
    for (int j = 0; j < 3; ++j) {
        double norm = std::sqrt(rows[j][0] * rows[j][0] + rows[j][1] * rows[j][1] +
                                rows[j][2] * rows[j][2]);
        scale *= std::max(norm, 1e-30);
    }
    rep.det_scale = scale;
    return rep;
}

/// Order of vanishing of g(s) = <gamma(s), v0> - c at s0 (Definition of
/// contact with the slice M n HP(v0, c)); v0 need not lie on a pseudo-sphere.
inline singularity_report contact_order_with_slice(const curve_system& sys, const vec4d& v0,
                                                   double c, double s0, int k_max = 4,
                                                   double tol = 1e-6) {
    auto us = sys.unit_speed_jets(s0);
    vec4<jet> vc = constant_jets(v0, s0, min_order(us.gamma));
    jet g = pseudo_dot(us.gamma, vc) - c;
    return detail::scan_orders(g, s0, k_max, tol);
}

}  // namespace ldx
