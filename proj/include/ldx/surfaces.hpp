#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ldx/curve.hpp"
#include "ldx/errors.hpp"
#include "ldx/frame.hpp"
#include "ldx/heights.hpp"
#include "ldx/jet.hpp"
#include "ldx/minkowski.hpp"
#include "ldx/parallel.hpp"

namespace ldx {

enum class singular_class {
    cuspidal_edge,
    swallowtail,
    cuspidal_beaks,
    slice_degenerate,
    unresolved,
};

inline const char* to_string(singular_class c) {
    switch (c) {
        case singular_class::cuspidal_edge: return "CuspidalEdge";
        case singular_class::swallowtail: return "Swallowtail";
        case singular_class::cuspidal_beaks: return "CuspidalBeaks";
        case singular_class::slice_degenerate: return "SliceDegenerate";
        case singular_class::unresolved: return "Unresolved";
    }
    return "?";
}

/// Per-sample outcome embedded instead of thrown by the grid operations.
enum class sample_status {
    ok,
    frame_degenerate,
    degenerate_assumption,
    no_real_theta,
    wrong_regime,
};

inline const char* to_string(sample_status st) {
    switch (st) {
        case sample_status::ok: return "ok";
        case sample_status::frame_degenerate: return "FrameDegenerate";
        case sample_status::degenerate_assumption: return "DegenerateAssumption";
        case sample_status::no_real_theta: return "NoRealTheta";
        case sample_status::wrong_regime: return "WrongRegime";
    }
    return "?";
}

/// Surface point S_gamma(s,theta) (hyperbolic) or DS_gamma(s,theta)
/// (de Sitter) as jets in arc length; the order-0 coefficients are the
/// position, the order-1 coefficients the s-derivative.
inline vec4<jet> surface_point_jets(const frame_sample& f, surface_kind kind, double theta,
                                    double eps_assume = 1e-8) {
    jet gap = f.k_g_jet * f.k_g_jet - f.k_n_jet * f.k_n_jet;
    vec4<jet> core = f.n_gamma_jets * f.k_g_jet + f.n1_jets * f.k_n_jet;
    if (kind == surface_kind::hyperbolic) {
        if (!(gap.value() > eps_assume))
            throw wrong_regime("k_g^2 - k_n^2 not positive: hyperbolic surface undefined");
        jet den = sqrt(gap);
        return core * (jet::constant(std::cosh(theta), f.s, den.order()) / den) +
               f.n2_jets * std::sinh(theta);
    }
    if (!(gap.value() < -eps_assume))
        throw wrong_regime("k_n^2 - k_g^2 not positive: de Sitter surface undefined");
    jet den = sqrt(-gap);
    return core * (jet::constant(std::cos(theta), f.s, den.order()) / den) +
           f.n2_jets * std::sin(theta);
}

inline vec4d surface_point(const frame_sample& f, surface_kind kind, double theta,
                           double eps_assume = 1e-8) {
    return value(surface_point_jets(f, kind, theta, eps_assume));
}

inline vec4d surface_point(const curve_system& sys, surface_kind kind, double s, double theta) {
    return surface_point(frame_at(sys, s), kind, theta, sys.tol().assume);
}

/// The singular angle theta(s):
///   hyperbolic:  tanh(theta) = lambda0 / (sqrt(k_g^2-k_n^2) (k_n tau2 + k_g tau_g))
///   de Sitter:   tan(theta)  = lambda0 / (sqrt(k_n^2-k_g^2) (k_n tau2 + k_g tau_g)),
/// principal branch. The antipodal branch theta + pi parametrizes -v and is
/// reported nowhere; callers needing it can shift by pi.
inline double theta_singular(const frame_sample& f, const derived_invariants& d, surface_kind kind,
                             double eps_assume = 1e-8) {
    double g = f.k_n * f.tau2 + f.k_g * f.tau_g;
    if (std::fabs(g) <= eps_assume)
        throw degenerate_assumption("k_n tau2 + k_g tau_g within tolerance of zero");
    double gap = f.k_g * f.k_g - f.k_n * f.k_n;
    if (kind == surface_kind::hyperbolic) {
        if (!(gap > eps_assume)) throw wrong_regime("hyperbolic locus needs k_g^2 > k_n^2");
        double rhs = d.lambda0 / (std::sqrt(gap) * g);
        if (!(std::fabs(rhs) < 1.0))
            throw no_real_theta("singular-locus equation tanh(theta) = " + std::to_string(rhs));
        return std::atanh(rhs);
    }
    if (!(gap < -eps_assume)) throw wrong_regime("de Sitter locus needs k_n^2 > k_g^2");
    double rhs = d.lambda0 / (std::sqrt(-gap) * g);
    return std::atan(rhs);
}

inline double theta_singular(const curve_system& sys, surface_kind kind, double s) {
    frame_sample f = frame_at(sys, s);
    return theta_singular(f, derived_from_frame(f), kind, sys.tol().assume);
}

/// Smallest singular value of the 4x2 Jacobian [d position/ds, d position/dtheta]
/// in the Euclidean metric on components. Zero exactly at the singular angle.
inline double jacobian_min_sv(const frame_sample& f, surface_kind kind, double theta,
                              double eps_assume = 1e-8) {
    vec4<jet> pos = surface_point_jets(f, kind, theta, eps_assume);
    vec4d ds = coeff(pos, 1);

    double gap = f.k_g * f.k_g - f.k_n * f.k_n;
    vec4d core = f.n_gamma * f.k_g + f.n1 * f.k_n;
    vec4d dtheta;
    if (kind == surface_kind::hyperbolic)
        dtheta = core * (std::sinh(theta) / std::sqrt(gap)) + f.n2 * std::cosh(theta);
    else
        dtheta = core * (-std::sin(theta) / std::sqrt(-gap)) + f.n2 * std::cos(theta);

    double aa = euclid_dot(ds, ds);
    double ab = euclid_dot(ds, dtheta);
    double bb = euclid_dot(dtheta, dtheta);
    double tr = aa + bb;
    double det = aa * bb - ab * ab;
    double disc = std::sqrt(std::max(tr * tr / 4.0 - det, 0.0));
    return std::sqrt(std::max(tr / 2.0 - disc, 0.0));
}

inline double jacobian_min_sv(const curve_system& sys, surface_kind kind, double s, double theta) {
    return jacobian_min_sv(frame_at(sys, s), kind, theta, sys.tol().assume);
}

struct classify_witness {
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    double rho = 0.0;
    double rho_prime = 0.0;
    /// rho vanishes on a whole neighborhood (grid-level judgement by caller).
    bool rho_identically_zero = false;
};

/// Scaled zero-thresholds for the decision table.
struct classify_tols {
    double rho = 1e-6;
    double rho_prime = 1e-6;
    double lambda0 = 1e-6;
    double lambda1 = 1e-6;
};

/// Decision table for the singularity type of a locus point:
///   rho != 0                                   -> cuspidal edge
///   rho = 0, rho' != 0, lambda0 != 0           -> swallowtail
///   rho = 0, rho' != 0, lambda0 = 0, l1 != 0   -> cuspidal beaks
///   rho = 0 on a neighborhood                  -> slice degenerate
///   anything else (e.g. double roots of rho)   -> unresolved, never guessed
/// A cuspidal lips cannot appear, so no row produces one.
inline singular_class classify_point(const classify_witness& w, const classify_tols& tol) {
    if (w.rho_identically_zero) return singular_class::slice_degenerate;
    if (std::fabs(w.rho) > tol.rho) return singular_class::cuspidal_edge;
    if (std::fabs(w.rho_prime) > tol.rho_prime) {
        if (std::fabs(w.lambda0) > tol.lambda0) return singular_class::swallowtail;
        if (std::fabs(w.lambda1) > tol.lambda1) return singular_class::cuspidal_beaks;
    }
    return singular_class::unresolved;
}

struct singular_locus_point {
    double s = 0.0;
    double theta = 0.0;
    vec4d position{};
    singular_class classification = singular_class::unresolved;
    double lambda0 = 0.0, lambda1 = 0.0, rho = 0.0, rho_prime = 0.0;
    sample_status status = sample_status::ok;
    bool refined = false;  // inserted by rho-root bisection, not a grid sample
};

namespace detail {

struct locus_eval {
    sample_status status = sample_status::ok;
    double theta = 0.0;
    vec4d position{};
    derived_invariants inv;
};

inline locus_eval eval_locus_sample(const curve_system& sys, surface_kind kind, double s) {
    locus_eval ev;
    try {
        frame_sample f = frame_at(sys, s);
        ev.inv = derived_from_frame(f);
        ev.theta = theta_singular(f, ev.inv, kind, sys.tol().assume);
        ev.position = surface_point(f, kind, ev.theta, sys.tol().assume);
    } catch (const frame_degenerate&) {
        ev.status = sample_status::frame_degenerate;
    } catch (const degenerate_assumption&) {
        ev.status = sample_status::degenerate_assumption;
    } catch (const no_real_theta&) {
        ev.status = sample_status::no_real_theta;
    } catch (const wrong_regime&) {
        ev.status = sample_status::wrong_regime;
    }
    return ev;
}

}  // namespace detail

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = 0.5 * (a + b);
        return v;
    }
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = a + (b - a) * i / static_cast<double>(n - 1);
    return v;
}

/// Sample the singular locus theta(s) over [s_min, s_max], classify each
/// defined sample, and insert bisection-refined points at sign changes of rho
/// (the swallowtail candidates). Per-sample failures are embedded as statuses.
inline std::vector<singular_locus_point> singular_locus(const curve_system& sys, surface_kind kind,
                                                        double s_min, double s_max, int n_samples) {
    std::vector<double> grid = linspace(s_min, s_max, n_samples);
    std::vector<detail::locus_eval> evals(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        evals[i] = detail::eval_locus_sample(sys, kind, grid[i]);
    });

    double max_rho = 0.0, max_rho_prime = 0.0, max_l0 = 0.0, max_l1 = 0.0, term_scale = 0.0;
    for (const auto& ev : evals) {
        if (ev.status != sample_status::ok) continue;
        max_rho = std::max(max_rho, std::fabs(ev.inv.rho));
        max_rho_prime = std::max(max_rho_prime, std::fabs(ev.inv.rho_prime));
        max_l0 = std::max(max_l0, std::fabs(ev.inv.lambda0));
        max_l1 = std::max(max_l1, std::fabs(ev.inv.lambda1));
        term_scale = std::max(term_scale, ev.inv.rho_term_scale);
    }
    bool slice = max_rho < sys.tol().slice * std::max(1.0, term_scale);
    classify_tols tol;
    tol.rho = sys.tol().class_rho * max_rho;
    tol.rho_prime = sys.tol().class_rho * max_rho_prime;
    tol.lambda0 = sys.tol().class_lambda * max_l0;
    tol.lambda1 = sys.tol().class_lambda * max_l1;

    auto to_point = [&](double s, const detail::locus_eval& ev, bool refined) {
        singular_locus_point p;
        p.s = s;
        p.status = ev.status;
        p.refined = refined;
        if (ev.status != sample_status::ok) return p;
        p.theta = ev.theta;
        p.position = ev.position;
        p.lambda0 = ev.inv.lambda0;
        p.lambda1 = ev.inv.lambda1;
        p.rho = ev.inv.rho;
        p.rho_prime = ev.inv.rho_prime;
        classify_witness w{p.lambda0, p.lambda1, p.rho, p.rho_prime, slice};
        p.classification = classify_point(w, tol);
        return p;
    };

    std::vector<singular_locus_point> out;
    out.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.push_back(to_point(grid[i], evals[i], false));

    if (!slice) {
        // refine rho sign changes to locate swallowtail/beaks candidates
        std::vector<std::pair<double, double>> brackets;
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            if (evals[i].status != sample_status::ok || evals[i + 1].status != sample_status::ok)
                continue;
            double r0 = evals[i].inv.rho, r1 = evals[i + 1].inv.rho;
            if (r0 == 0.0 || r0 * r1 >= 0.0) continue;
            brackets.emplace_back(grid[i], grid[i + 1]);
        }
        std::vector<singular_locus_point> roots(brackets.size());
        parallel_for(brackets.size(), [&](std::size_t b) {
            double lo = brackets[b].first, hi = brackets[b].second;
            double flo = derived_invariants_at(sys, lo).rho;
            while (hi - lo > 1e-10) {
                double mid = 0.5 * (lo + hi);
                double fmid = derived_invariants_at(sys, mid).rho;
                if ((flo <= 0.0) == (fmid <= 0.0)) {
                    lo = mid;
                    flo = fmid;
                } else {
                    hi = mid;
                }
            }
            roots[b] = to_point(0.5 * (lo + hi), detail::eval_locus_sample(sys, kind, 0.5 * (lo + hi)),
                                true);
        });
        for (auto& r : roots) out.push_back(r);
        std::sort(out.begin(), out.end(),
                  [](const singular_locus_point& a, const singular_locus_point& b) { return a.s < b.s; });
    }
    return out;
}

struct slice_report {
    bool is_slice = false;
    std::optional<vec4d> v;    // the constant locus direction when is_slice
    std::optional<double> c;   // <gamma, v> on the slice
    double max_abs_rho = 0.0;
    double rho_threshold = 0.0;
    double locus_spread = 0.0;   // max Euclidean distance of locus points from v
    double plane_defect = 0.0;   // max |<gamma(s), v> - c| over the range
};

/// The three-way slice equivalence: constant singular locus <=> rho == 0 <=>
/// the curve lies in a hyperplane slice M n HP(v, c).
inline slice_report slice_test(const curve_system& sys, surface_kind kind, double s_min,
                               double s_max, int n_samples) {
    std::vector<double> grid = linspace(s_min, s_max, n_samples);
    std::vector<detail::locus_eval> evals(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        evals[i] = detail::eval_locus_sample(sys, kind, grid[i]);
    });

    slice_report rep;
    double term_scale = 0.0;
    std::size_t n_ok = 0;
    for (const auto& ev : evals) {
        if (ev.status != sample_status::ok) continue;
        ++n_ok;
        rep.max_abs_rho = std::max(rep.max_abs_rho, std::fabs(ev.inv.rho));
        term_scale = std::max(term_scale, ev.inv.rho_term_scale);
    }
    if (n_ok == 0) throw degenerate_assumption("singular locus undefined on the whole range");
    rep.rho_threshold = sys.tol().slice * std::max(1.0, term_scale);
    rep.is_slice = rep.max_abs_rho < rep.rho_threshold;
    if (!rep.is_slice) return rep;

    vec4d v{};
    bool have_v = false;
    for (const auto& ev : evals) {
        if (ev.status != sample_status::ok) continue;
        if (!have_v) {
            v = ev.position;
            have_v = true;
        }
        vec4d diff = ev.position - v;
        rep.locus_spread = std::max(rep.locus_spread, euclid_norm(diff));
    }
    rep.v = v;
    double c = 0.0;
    bool have_c = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        vec4d gamma = value(sys.unit_speed_jets(grid[i]).gamma);
        double h = pseudo_dot(gamma, v);
        if (!have_c) {
            c = h;
            have_c = true;
        }
        rep.plane_defect = std::max(rep.plane_defect, std::fabs(h - c));
    }
    rep.c = c;
    return rep;
}

struct patch_sample {
    double s = 0.0, theta = 0.0;
    vec4d position{};
    double residual = 0.0;  // pseudo-sphere membership defect
    double min_sv = 0.0;    // smallest singular value of the 4x2 Jacobian
    sample_status status = sample_status::ok;
};

struct surface_patch {
    surface_kind kind = surface_kind::hyperbolic;
    std::string label;  // curve id, set by callers that have one
    std::vector<double> s_values;
    std::vector<double> theta_values;
    std::vector<patch_sample> samples;  // row-major: [i_s * n_theta + i_theta]

    const patch_sample& at(std::size_t i_s, std::size_t i_theta) const {
        return samples[i_s * theta_values.size() + i_theta];
    }
};

/// Sample the surface over a parameter grid; per-sample failures are embedded.
inline surface_patch sample_patch(const curve_system& sys, surface_kind kind, double s_min,
                                  double s_max, double theta_min, double theta_max, int n_s,
                                  int n_theta) {
    surface_patch patch;
    patch.kind = kind;
    patch.s_values = linspace(s_min, s_max, n_s);
    patch.theta_values = linspace(theta_min, theta_max, n_theta);
    patch.samples.resize(patch.s_values.size() * patch.theta_values.size());
    parallel_for(patch.s_values.size(), [&](std::size_t i) {
        double s = patch.s_values[i];
        frame_sample f;
        bool frame_ok = true;
        sample_status frame_status = sample_status::ok;
        try {
            f = frame_at(sys, s);
        } catch (const frame_degenerate&) {
            frame_ok = false;
            frame_status = sample_status::frame_degenerate;
        }
        for (std::size_t j = 0; j < patch.theta_values.size(); ++j) {
            patch_sample& ps = patch.samples[i * patch.theta_values.size() + j];
            ps.s = s;
            ps.theta = patch.theta_values[j];
            if (!frame_ok) {
                ps.status = frame_status;
                continue;
            }
            try {
                ps.position = surface_point(f, kind, ps.theta, sys.tol().assume);
                ps.residual = pseudo_sphere_residual(ps.position, sphere_of(kind));
                ps.min_sv = jacobian_min_sv(f, kind, ps.theta, sys.tol().assume);
            } catch (const wrong_regime&) {
                ps.status = sample_status::wrong_regime;
            }
        }
    });
    return patch;
}

}  // namespace ldx
