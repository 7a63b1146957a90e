#pragma once

#include <cmath>
#include <vector>

#include "ldx/curve.hpp"
#include "ldx/errors.hpp"
#include "ldx/jet.hpp"
#include "ldx/minkowski.hpp"

namespace ldx {

/// Lorentzian Darboux frame {n_gamma, t, n1, n2} at arc length s, together
/// with the five invariants and their jets. The frame satisfies
/// <n_gamma,n_gamma> = -1, <t,t> = <n1,n1> = <n2,n2> = 1, all cross products
/// zero, and the Frenet-Serret type system
///     n_gamma' = k_n t + tau1 n1 + tau2 n2
///     t'       = k_n n_gamma + k_g n1
///     n1'      = tau1 n_gamma - k_g t + tau_g n2
///     n2'      = tau2 n_gamma - tau_g n1.
struct frame_sample {
    double s = 0.0;
    double u = 0.0;  // matching defining parameter

    vec4d n_gamma, t, n1, n2;
    double k_n = 0.0, tau1 = 0.0, tau2 = 0.0, k_g = 0.0, tau_g = 0.0;

    // jets in arc length (invariants to order K-2, tau_g to K-3)
    jet k_n_jet, tau1_jet, tau2_jet, k_g_jet, tau_g_jet;
    vec4<jet> gamma_jets, n_gamma_jets, t_jets, n1_jets, n2_jets;
};

/// Scalar invariants controlling the singularity classification:
///   lambda0 = k_g k_n' + k_g^2 tau1 - k_n^2 tau1 - k_n k_g'
///   lambda1 = k_n' tau2 + k_n tau2' + k_g' tau_g + k_g tau_g'
///   lambda2 = the third-order companion of lambda0 (kept as a cross-check)
///   rho     = the invariant whose zeros mark swallowtail candidates
/// rho_prime is the direct jet derivative of rho.
struct derived_invariants {
    double s = 0.0;
    double lambda0 = 0.0, lambda1 = 0.0, lambda2 = 0.0, rho = 0.0, rho_prime = 0.0;
    jet lambda0_jet, rho_jet;
    /// Sum of |monomial| contributions to rho: a magnitude scale that stays
    /// meaningful when rho itself vanishes identically.
    double rho_term_scale = 0.0;
};

/// Build the Darboux frame at arc length s. Throws frame_degenerate when
/// k_g <= eps_kg (the standing assumption k_g > 0 fails numerically).
inline frame_sample frame_at(const curve_system& sys, double s) {
    auto us = sys.unit_speed_jets(s);
    vec4<jet> t = derivative(us.gamma);
    vec4<jet> tp = derivative(t);
    jet k_n = -pseudo_dot(us.n_gamma, tp);
    vec4<jet> w = tp - us.n_gamma * k_n;  // = <n_gamma,t'> n_gamma + t'
    jet kg2 = pseudo_dot(w, w);
    if (!(kg2.value() > sys.tol().kg * sys.tol().kg))
        throw frame_degenerate("k_g below threshold at s=" + std::to_string(s));
    jet k_g = sqrt(kg2);
    vec4<jet> n1 = w / k_g;
    // oriented so the flat-slice specialization reproduces the classical
    // Frenet binormal and tau_g the classical torsion
    vec4<jet> n2 = wedge3(t, us.n_gamma, n1);
    vec4<jet> ngp = derivative(us.n_gamma);
    jet tau1 = pseudo_dot(n1, ngp);
    jet tau2 = pseudo_dot(n2, ngp);
    jet tau_g = -pseudo_dot(derivative(n2), n1);

    frame_sample f;
    f.s = s;
    f.u = us.u;
    f.gamma_jets = us.gamma;
    f.n_gamma_jets = us.n_gamma;
    f.t_jets = t;
    f.n1_jets = n1;
    f.n2_jets = n2;
    f.n_gamma = value(us.n_gamma);
    f.t = value(t);
    f.n1 = value(n1);
    f.n2 = value(n2);
    f.k_n_jet = k_n;
    f.tau1_jet = tau1;
    f.tau2_jet = tau2;
    f.k_g_jet = k_g;
    f.tau_g_jet = tau_g;
    f.k_n = k_n.value();
    f.tau1 = tau1.value();
    f.tau2 = tau2.value();
    f.k_g = k_g.value();
    f.tau_g = tau_g.value();
    return f;
}

/// lambda0 as a jet, from the invariant jets of a frame sample.
inline jet lambda0_jet_of(const frame_sample& f) {
    const jet& kn = f.k_n_jet;
    const jet& kg = f.k_g_jet;
    const jet& t1 = f.tau1_jet;
    return kg * kn.derivative() + kg * kg * t1 - kn * kn * t1 - kn * kg.derivative();
}

/// Derived invariants from an already-computed frame. rho follows its defining
/// formula; rho_prime is the jet derivative of that formula, not the
/// lambda-based expression (the longer form feeds lambda2, kept as a
/// cross-check only).
inline derived_invariants derived_from_frame(const frame_sample& f) {
    const jet& kn = f.k_n_jet;
    const jet& kg = f.k_g_jet;
    const jet& t1 = f.tau1_jet;
    const jet& t2 = f.tau2_jet;
    const jet& tg = f.tau_g_jet;
    jet dkn = kn.derivative();
    jet ddkn = dkn.derivative();
    jet dddkn = ddkn.derivative();
    jet dkg = kg.derivative();
    jet ddkg = dkg.derivative();
    jet dddkg = ddkg.derivative();
    jet dt1 = t1.derivative();
    jet ddt1 = dt1.derivative();
    jet dt2 = t2.derivative();
    jet dtg = tg.derivative();

    jet lam0 = kg * dkn + kg * kg * t1 - kn * kn * t1 - kn * dkg;
    jet lam1 = dkn * t2 + kn * dt2 + dkg * tg + kg * dtg;

    jet f1 = -(kg * ddkn) - kg * kn * t2 * t2 - 2.0 * (kg * dkg * t1) - kg * kg * dt1 -
             kg * kg * tg * t2 + 2.0 * (kn * dkn * t1) + kn * kn * dt1 - kn * kn * tg * t2 +
             ddkg * kn - kg * kn * tg * tg;
    jet g = kn * t2 + kg * tg;
    jet f2 = 2.0 * (dkn * t2) + kn * t1 * tg + kn * dt2 + 2.0 * (dkg * tg) + kg * t1 * t2 +
             kg * dtg;
    jet rho = f1 * g + lam0 * f2;

    jet lam2 = kg * dddkn + 3.0 * (ddkg * kg * t1) + 3.0 * (dkg * dt1 * kg) + kg * kg * ddt1 +
               kg * kg * tg * dt2 - kg * kg * tg * tg * t1 - kn * t1 * t2 * kg * kg +
               kn * t1 * t2 * kg * tg - 3.0 * (kn * ddkn * t1) - 3.0 * (kn * dkn * dt1) -
               kn * kn * ddt1 + kn * dddkg + kn * kn * t1 * tg * tg + kg * kg * t1 * t2 * t2 -
               kn * kn * t1 * t2 * t2 + kn * kn * t2 * dtg - kn * kn * dt2 * tg -
               kg * kg * dtg * t2 + 2.0 * (t1 * t1 * dkn * kg) - 2.0 * (t1 * t1 * dkg * kn);

    double scale = 0.0;
    {
        auto mag = [](const jet& a) { return std::fabs(a.value()); };
        double f1_terms = mag(kg * ddkn) + mag(kg * kn * t2 * t2) + 2.0 * mag(kg * dkg * t1) +
                          mag(kg * kg * dt1) + mag(kg * kg * tg * t2) + 2.0 * mag(kn * dkn * t1) +
                          mag(kn * kn * dt1) + mag(kn * kn * tg * t2) + mag(ddkg * kn) +
                          mag(kg * kn * tg * tg);
        double lam0_terms = mag(kg * dkn) + mag(kg * kg * t1) + mag(kn * kn * t1) + mag(kn * dkg);
        double f2_terms = 2.0 * mag(dkn * t2) + mag(kn * t1 * tg) + mag(kn * dt2) +
                          2.0 * mag(dkg * tg) + mag(kg * t1 * t2) + mag(kg * dtg);
        scale = f1_terms * std::fabs(g.value()) + lam0_terms * f2_terms;
    }

    derived_invariants d;
    d.s = f.s;
    d.lambda0 = lam0.value();
    d.lambda1 = lam1.value();
    d.lambda2 = lam2.value();
    d.rho = rho.value();
    d.rho_prime = rho.derivative().value();
    d.lambda0_jet = lam0;
    d.rho_jet = rho;
    d.rho_term_scale = scale;
    return d;
}

inline derived_invariants derived_invariants_at(const curve_system& sys, double s) {
    return derived_from_frame(frame_at(sys, s));
}

/// Per-sample assumption flags of the theory: k_g != 0 (frame defined),
/// k_n tau2 + k_g tau_g != 0 (locus angle defined), and the sign of
/// k_g^2 - k_n^2 (+1 hyperbolic regime, -1 de Sitter regime, 0 within band).
struct assumption_flags {
    double s = 0.0;
    bool kg_nonzero = false;
    bool nondegenerate = false;
    int regime = 0;
    double k_g = 0.0, k_n = 0.0, ktau = 0.0;
};

inline std::vector<assumption_flags> assumption_report(const curve_system& sys,
                                                       const std::vector<double>& s_values) {
    std::vector<assumption_flags> out(s_values.size());
    const double eps = sys.tol().assume;
    for (std::size_t i = 0; i < s_values.size(); ++i) {
        assumption_flags flags;
        flags.s = s_values[i];
        auto us = sys.unit_speed_jets(s_values[i]);
        vec4<jet> t = derivative(us.gamma);
        vec4<jet> tp = derivative(t);
        jet k_n = -pseudo_dot(us.n_gamma, tp);
        vec4<jet> w = tp - us.n_gamma * k_n;
        double kg2 = pseudo_dot(w, w).value();
        flags.k_n = k_n.value();
        flags.k_g = kg2 > 0.0 ? std::sqrt(kg2) : 0.0;
        flags.kg_nonzero = flags.k_g > sys.tol().kg;
        if (flags.kg_nonzero) {
            frame_sample f = frame_at(sys, s_values[i]);
            flags.ktau = f.k_n * f.tau2 + f.k_g * f.tau_g;
            flags.nondegenerate = std::fabs(flags.ktau) > eps;
        }
        double gap = flags.k_g * flags.k_g - flags.k_n * flags.k_n;
        flags.regime = std::fabs(gap) <= eps ? 0 : (gap > 0.0 ? 1 : -1);
        out[i] = flags;
    }
    return out;
}

}  // namespace ldx
