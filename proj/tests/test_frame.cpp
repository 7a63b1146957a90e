#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ldx/config.hpp"
#include "ldx/frame.hpp"
#include "oracles.hpp"

using namespace ldx;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double rt2 = 1.4142135623730951;

curve_system helix_unit() {
    return compile_embedded(hypersurface_def::parse({"0", "u1", "u2", "u3"}),
                            parameter_curve_def::parse(
                                {"cos(s/1.4142135623730951)", "sin(s/1.4142135623730951)",
                                 "s/1.4142135623730951"}),
                            0.0, 4.0 * pi, 7);
}

curve_system helix_nonunit() {
    return compile_embedded(hypersurface_def::parse({"0", "u1", "u2", "u3"}),
                            parameter_curve_def::parse({"cos(s)", "sin(s)", "s"}), 0.0,
                            2.0 * rt2 * pi, 7);
}

curve_system h3_circle() {
    std::array<std::string, 4> gamma = {"1.5430806348152437*cosh(s/1.5430806348152437)",
                                        "1.5430806348152437*sinh(s/1.5430806348152437)",
                                        "1.1752011936438014", "0"};
    return compile_direct(spacetime_curve_def::parse(gamma), spacetime_curve_def::parse(gamma), 0.0,
                          6.0, 7);
}

double gram_defect(const frame_sample& f) {
    const vec4d* basis[4] = {&f.n_gamma, &f.t, &f.n1, &f.n2};
    const double target[4] = {-1.0, 1.0, 1.0, 1.0};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double g = pseudo_dot(*basis[i], *basis[j]);
            double want = i == j ? target[i] : 0.0;
            worst = std::max(worst, std::fabs(g - want));
        }
    return worst;
}

double frenet_residual(const frame_sample& f) {
    auto euclid0 = [](const vec4<jet>& v) {
        vec4d x = value(v);
        return std::sqrt(euclid_dot(x, x));
    };
    vec4<jet> r1 = derivative(f.n_gamma_jets) -
                   (f.t_jets * f.k_n_jet + f.n1_jets * f.tau1_jet + f.n2_jets * f.tau2_jet);
    vec4<jet> r2 = derivative(f.t_jets) - (f.n_gamma_jets * f.k_n_jet + f.n1_jets * f.k_g_jet);
    vec4<jet> r3 = derivative(f.n1_jets) - (f.n_gamma_jets * f.tau1_jet - f.t_jets * f.k_g_jet +
                                            f.n2_jets * f.tau_g_jet);
    vec4<jet> r4 = derivative(f.n2_jets) - (f.n_gamma_jets * f.tau2_jet - f.n1_jets * f.tau_g_jet);
    return std::max(std::max(euclid0(r1), euclid0(r2)), std::max(euclid0(r3), euclid0(r4)));
}

}  // namespace

TEST_CASE("helix frame reproduces the flat-slice picture") {
    curve_system sys = helix_unit();
    for (double s : {0.0, 1.0, 3.7, 9.2}) {
        frame_sample f = frame_at(sys, s);
        CHECK_THAT(f.k_n, WithinAbs(0.0, 1e-10));
        CHECK_THAT(f.tau1, WithinAbs(0.0, 1e-10));
        CHECK_THAT(f.tau2, WithinAbs(0.0, 1e-10));
        CHECK_THAT(f.k_g, WithinAbs(0.5, 1e-9));
        CHECK_THAT(f.tau_g, WithinAbs(0.5, 1e-9));
        CHECK_THAT(f.n_gamma.x0, WithinAbs(1.0, 1e-12));
        CHECK_THAT(std::fabs(f.n_gamma.x1) + std::fabs(f.n_gamma.x2) + std::fabs(f.n_gamma.x3),
                   WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("classical curvature and torsion oracle on a generic flat-slice curve") {
    curve_system sys = compile_embedded(
        hypersurface_def::parse({"0", "u1", "u2", "u3"}),
        parameter_curve_def::parse({"cos(s)", "sin(s)", "0.5*sin(2*s)"}), 0.0, 2.0 * pi, 7);
    auto curve3 = [](double u) {
        return oracles::vec3{std::cos(u), std::sin(u), 0.5 * std::sin(2.0 * u)};
    };
    for (double u : {0.3, 1.1, 2.0, 4.4}) {
        double s = sys.arclength_at_param(u);
        frame_sample f = frame_at(sys, s);
        auto [k, tau] = oracles::frenet_curvature_torsion(curve3, u);
        CHECK_THAT(f.k_n, WithinAbs(0.0, 1e-10));
        CHECK_THAT(f.tau1, WithinAbs(0.0, 1e-10));
        CHECK_THAT(f.tau2, WithinAbs(0.0, 1e-10));
        CHECK_THAT(f.k_g, WithinAbs(k, 1e-8 * (1.0 + k)));
        CHECK_THAT(f.tau_g, WithinAbs(tau, 1e-6 * (1.0 + std::fabs(tau))));
    }
}

TEST_CASE("H3 circle frame") {
    curve_system sys = h3_circle();
    for (double s : {0.0, 0.9, 2.5}) {
        frame_sample f = frame_at(sys, s);
        CHECK_THAT(f.k_n, WithinAbs(1.0, 1e-9));
        CHECK_THAT(f.k_g, WithinAbs(std::tanh(1.0), 1e-9));
        CHECK_THAT(f.tau1, WithinAbs(0.0, 1e-9));
        CHECK_THAT(f.tau2, WithinAbs(0.0, 1e-9));
        CHECK_THAT(f.tau_g, WithinAbs(0.0, 1e-9));
    }
}

TEST_CASE("geodesic on H3 degenerates the frame") {
    std::array<std::string, 4> gamma = {"cosh(s)", "sinh(s)", "0", "0"};
    curve_system sys = compile_direct(spacetime_curve_def::parse(gamma),
                                      spacetime_curve_def::parse(gamma), 0.0, 2.0, 7);
    CHECK_THROWS_AS(frame_at(sys, 0.5), frame_degenerate);
}

TEST_CASE("compile validation errors") {
    CHECK_THROWS_AS(compile_embedded(hypersurface_def::parse({"0", "u1", "u2", "u3"}),
                                     parameter_curve_def::parse({"1", "2", "3"}), 0.0, 1.0, 7),
                    irregular_curve);

    CHECK_THROWS_AS(
        compile_embedded(hypersurface_def::parse({"0", "u1", "u2 + u3", "u2 + u3"}),
                         parameter_curve_def::parse({"cos(s)", "sin(s)", "s"}), 0.0, 1.0, 7),
        not_spacelike_hypersurface);

    // normal that is neither unit nor pseudo-orthogonal to the tangent
    CHECK_THROWS_AS(
        compile_direct(
            spacetime_curve_def::parse({"cosh(s)", "sinh(s)", "0", "0"}),
            spacetime_curve_def::parse({"cosh(s)", "sinh(s)", "0.1", "0"}), 0.0, 1.0, 7),
        bad_direct_normal);

    // n_gamma = gamma on H3 is a valid direct normal even where the frame degenerates
    std::array<std::string, 4> geo = {"cosh(s)", "sinh(s)", "0", "0"};
    CHECK_NOTHROW(compile_direct(spacetime_curve_def::parse(geo), spacetime_curve_def::parse(geo),
                                 0.0, 1.0, 7));

    CHECK_THROWS_AS(compile_embedded(hypersurface_def::parse({"0", "u1", "u2", "u3"}),
                                     parameter_curve_def::parse({"cos(s)", "sin(s)", "s"}), 0.0,
                                     1.0, 4),
                    config_error);
}

TEST_CASE("embedded normals are unit, future-directed and flip-corrected") {
    curve_system flat = helix_unit();
    vec4d n = value(flat.normal_raw(1.0));
    CHECK_THAT(n.x0, WithinAbs(1.0, 1e-12));
    CHECK_THAT(std::fabs(n.x1) + std::fabs(n.x2) + std::fabs(n.x3), WithinAbs(0.0, 1e-12));

    curve_system graph = compile_embedded(
        hypersurface_def::parse({"0.3*(u1^2 + u2^2)", "u1", "u2", "u3"}),
        parameter_curve_def::parse({"cos(s)", "sin(s)", "0.4*s"}), 0.0, 2.0 * pi, 7);
    for (double u : {0.1, 1.3, 2.9, 5.5}) {
        vec4d ng = value(graph.normal_raw(u));
        CHECK_THAT(pseudo_dot(ng, ng), WithinAbs(-1.0, 1e-10));
        CHECK(ng.x0 > 0.0);  // future-directed: <n, e0> = -x0 < 0
    }
}

TEST_CASE("arc-length reparametrization is exact to jet order") {
    SECTION("already unit-speed helix: reparametrization is the identity") {
        curve_system sys = helix_unit();
        auto us = sys.unit_speed_jets(2.0);
        CHECK_THAT(us.u, WithinAbs(2.0, 1e-12));
        jet tt = pseudo_dot(derivative(us.gamma), derivative(us.gamma));
        CHECK_THAT(tt.value(), WithinAbs(1.0, 1e-12));
    }
    SECTION("non-unit-speed parametrizations get unit tangents") {
        curve_system sys = helix_nonunit();
        for (double s : {0.5, 3.0, 7.7}) {
            auto us = sys.unit_speed_jets(s);
            jet tt = pseudo_dot(derivative(us.gamma), derivative(us.gamma));
            CHECK_THAT(tt.value(), WithinAbs(1.0, 1e-10));
            // unit speed kills the first derivative of <t,t>
            CHECK_THAT(tt.coeff(1), WithinAbs(0.0, 1e-10));
        }
    }
    SECTION("arc length agrees with quadrature of the raw speed") {
        curve_system sys = helix_nonunit();
        auto speed = [&](double u) { return sys.speed(u); };
        for (double u : {1.0, 2.5, 6.0}) {
            double s_expected = oracles::integrate(speed, 0.0, u);
            CHECK_THAT(sys.arclength_at_param(u), WithinAbs(s_expected, 1e-9));
            CHECK_THAT(sys.param_at_arclength(s_expected), WithinAbs(u, 1e-9));
        }
    }
}

TEST_CASE("frame orthonormality and Frenet residuals across curves") {
    std::vector<curve_system> systems;
    systems.push_back(helix_unit());
    systems.push_back(helix_nonunit());
    systems.push_back(h3_circle());
    systems.push_back(load_builtin("h3_torsion").compile());
    systems.push_back(load_builtin("graph_perturbed").compile());
    for (const auto& sys : systems) {
        double L = sys.total_length();
        for (int i = 0; i < 25; ++i) {
            double s = L * (i + 0.5) / 25.0;
            frame_sample f = frame_at(sys, s);
            CHECK(gram_defect(f) < 1e-9);
            CHECK(frenet_residual(f) < 1e-7);
        }
    }
}

TEST_CASE("derived invariants on the helix vanish identically") {
    curve_system sys = helix_unit();
    for (double s : {0.0, 2.2, 8.0}) {
        derived_invariants d = derived_invariants_at(sys, s);
        CHECK_THAT(d.lambda0, WithinAbs(0.0, 1e-10));
        CHECK_THAT(d.rho, WithinAbs(0.0, 1e-10));
        CHECK_THAT(d.rho_prime, WithinAbs(0.0, 1e-9));
    }
    // nondegeneracy factor: k_n tau2 + k_g tau_g = 1/4
    frame_sample f = frame_at(sys, 1.0);
    CHECK_THAT(f.k_n * f.tau2 + f.k_g * f.tau_g, WithinAbs(0.25, 1e-9));
}

TEST_CASE("H3 circle is flagged degenerate for the locus") {
    curve_system sys = h3_circle();
    frame_sample f = frame_at(sys, 1.0);
    CHECK_THAT(f.k_n * f.tau2 + f.k_g * f.tau_g, WithinAbs(0.0, 1e-9));
    auto flags = assumption_report(sys, {0.5, 1.5, 2.5});
    for (const auto& fl : flags) {
        CHECK(fl.kg_nonzero);
        CHECK_FALSE(fl.nondegenerate);
        CHECK(fl.regime == -1);  // k_n^2 = 1 > k_g^2 = tanh(1)^2
    }
}

TEST_CASE("assumption flags on the helix") {
    curve_system sys = helix_unit();
    auto flags = assumption_report(sys, {0.25, 4.0, 11.0});
    for (const auto& fl : flags) {
        CHECK(fl.kg_nonzero);
        CHECK(fl.nondegenerate);
        CHECK(fl.regime == 1);  // k_g^2 - k_n^2 = 1/4
        CHECK_THAT(fl.ktau, WithinAbs(0.25, 1e-9));
    }
}

TEST_CASE("assumption flags select the de Sitter regime for slow H3 curves") {
    curve_system sys = load_builtin("h3_torsion").compile();
    double L = sys.total_length();
    auto flags = assumption_report(sys, {0.2 * L, 0.5 * L, 0.8 * L});
    for (const auto& fl : flags) {
        CHECK(fl.kg_nonzero);
        CHECK(fl.nondegenerate);
        CHECK(fl.regime == -1);  // k_n^2 = 1 > k_g^2 = k_h^2
        CHECK(fl.k_g < 1.0);
    }
}

TEST_CASE("lambda0 recombines from independent finite differences") {
    curve_system sys = load_builtin("graph_perturbed").compile();
    auto kn_of = [&](double s) { return frame_at(sys, s).k_n; };
    auto kg_of = [&](double s) { return frame_at(sys, s).k_g; };
    for (double s : {1.0, 2.5, 4.0}) {
        frame_sample f = frame_at(sys, s);
        derived_invariants d = derived_from_frame(f);
        double knp = oracles::fd1(kn_of, s);
        double kgp = oracles::fd1(kg_of, s);
        double recombined =
            f.k_g * knp + f.k_g * f.k_g * f.tau1 - f.k_n * f.k_n * f.tau1 - f.k_n * kgp;
        CHECK_THAT(d.lambda0, WithinAbs(recombined, 1e-6 * (1.0 + std::fabs(recombined))));
        // and the jet route agrees with the derived value to rounding
        CHECK_THAT(lambda0_jet_of(f).value(), WithinAbs(d.lambda0, 1e-9));
    }
}

TEST_CASE("invariants are reparametrization invariant at matched points") {
    curve_system a = helix_unit();
    curve_system b = helix_nonunit();
    for (double s : {0.7, 4.2, 10.0}) {
        frame_sample fa = frame_at(a, s);
        frame_sample fb = frame_at(b, s);
        CHECK_THAT(fa.k_n, WithinAbs(fb.k_n, 1e-7));
        CHECK_THAT(fa.k_g, WithinAbs(fb.k_g, 1e-7));
        CHECK_THAT(fa.tau_g, WithinAbs(fb.tau_g, 1e-7));
        derived_invariants da = derived_from_frame(fa);
        derived_invariants db = derived_from_frame(fb);
        CHECK_THAT(da.rho, WithinAbs(db.rho, 1e-7));
    }
}
