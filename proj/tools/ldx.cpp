// ldx: Lorentzian Darboux explorer.
//
// Configuration-driven front end over the header-only library: compute the
// Darboux frame and its invariants along a curve in a spacelike hypersurface
// of Minkowski 4-space, build the associated hyperbolic/de Sitter surfaces,
// locate and classify their singular loci, and export CSV tables and OBJ
// meshes. See README.md for the config format.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ldx/config.hpp"
#include "ldx/frame.hpp"
#include "ldx/heights.hpp"
#include "ldx/io.hpp"
#include "ldx/parallel.hpp"
#include "ldx/surfaces.hpp"

namespace {

using namespace ldx;

constexpr int exit_ok = 0;
constexpr int exit_verify = 1;
constexpr int exit_config = 2;
constexpr int exit_regime = 3;

struct common_options {
    std::string config_path;
    std::string builtin_name;
    std::string kind_name = "hyperbolic";
    std::vector<double> range;        // arc length [lo, hi]
    std::vector<double> theta_range;  // [lo, hi]
    int samples = 0;                  // 0: take from config
    int theta_samples = 0;
    std::string csv_path;
    std::string obj_path;
    std::vector<std::string> tol_overrides;  // name=value
};

void add_common(CLI::App* cmd, common_options& opt, bool with_kind = true) {
    cmd->add_option("--config", opt.config_path, "TOML configuration file");
    cmd->add_option("--curve", opt.builtin_name, "builtin curve name (see 'ldx examples')");
    if (with_kind)
        cmd->add_option("--kind", opt.kind_name, "surface kind: hyperbolic | desitter")
            ->check(CLI::IsMember({"hyperbolic", "desitter"}));
    cmd->add_option("--range", opt.range, "arc length range [lo hi]")->expected(2);
    cmd->add_option("--samples", opt.samples, "number of arc length samples");
    cmd->add_option("--theta-range", opt.theta_range, "theta range [lo hi]")->expected(2);
    cmd->add_option("--theta-samples", opt.theta_samples, "number of theta samples");
    cmd->add_option("--csv", opt.csv_path, "CSV output path (default: stdout)");
    cmd->add_option("--obj", opt.obj_path, "OBJ output path (surface command)");
    cmd->add_option("--tol", opt.tol_overrides, "tolerance override NAME=VALUE (repeatable)");
}

void apply_tol_override(tolerances& tol, const std::string& spec) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) throw config_error("--tol expects NAME=VALUE, got '" + spec + "'");
    std::string name = spec.substr(0, eq);
    double value = 0.0;
    try {
        value = std::stod(spec.substr(eq + 1));
    } catch (...) {
        throw config_error("bad --tol value in '" + spec + "'");
    }
    if (name == "lightlike")
        tol.lightlike = value;
    else if (name == "kg")
        tol.kg = value;
    else if (name == "assume")
        tol.assume = value;
    else if (name == "direct_normal")
        tol.direct_normal = value;
    else if (name == "regular")
        tol.regular = value;
    else if (name == "ak")
        tol.ak = value;
    else if (name == "residual")
        tol.residual = value;
    else if (name == "slice")
        tol.slice = value;
    else if (name == "class_rho")
        tol.class_rho = value;
    else if (name == "class_lambda")
        tol.class_lambda = value;
    else if (name == "rank")
        tol.rank = value;
    else if (name == "quadrature")
        tol.quadrature = value;
    else
        throw config_error("unknown tolerance '" + name + "'");
}

run_config resolve_config(const common_options& opt) {
    run_config cfg;
    if (!opt.config_path.empty() && !opt.builtin_name.empty())
        throw config_error("--config and --curve are mutually exclusive");
    if (!opt.config_path.empty())
        cfg = load_config_file(opt.config_path);
    else if (!opt.builtin_name.empty())
        cfg = load_builtin(opt.builtin_name);
    else
        throw config_error("either --config PATH or --curve NAME is required");
    for (const auto& t : opt.tol_overrides) apply_tol_override(cfg.tol, t);
    if (opt.samples > 0) cfg.samples = opt.samples;
    if (opt.theta_samples > 0) cfg.theta_samples = opt.theta_samples;
    if (!opt.theta_range.empty()) {
        cfg.theta_min = opt.theta_range[0];
        cfg.theta_max = opt.theta_range[1];
    }
    if (!opt.csv_path.empty()) cfg.csv_path = opt.csv_path;
    if (!opt.obj_path.empty()) cfg.obj_path = opt.obj_path;
    return cfg;
}

surface_kind resolve_kind(const common_options& opt) {
    return opt.kind_name == "desitter" ? surface_kind::de_sitter : surface_kind::hyperbolic;
}

std::pair<double, double> resolve_range(const common_options& opt, const curve_system& sys) {
    if (!opt.range.empty()) return {opt.range[0], opt.range[1]};
    return {0.0, sys.total_length()};
}

void emit(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file '" + path + "'");
    out << body;
}

std::string g17(double v) { return format_g17(v); }

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_frame(const common_options& opt) {
    run_config cfg = resolve_config(opt);
    curve_system sys = cfg.compile();
    auto [lo, hi] = resolve_range(opt, sys);
    std::vector<double> grid = linspace(lo, hi, cfg.samples);

    std::vector<std::string> rows(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        frame_sample f = frame_at(sys, grid[i]);
        derived_invariants d = derived_from_frame(f);
        std::ostringstream os;
        auto put4 = [&](const vec4d& v) {
            os << ',' << g17(v.x0) << ',' << g17(v.x1) << ',' << g17(v.x2) << ',' << g17(v.x3);
        };
        os << g17(f.s);
        put4(f.n_gamma);
        put4(f.t);
        put4(f.n1);
        put4(f.n2);
        os << ',' << g17(f.k_n) << ',' << g17(f.tau1) << ',' << g17(f.tau2) << ',' << g17(f.k_g)
           << ',' << g17(f.tau_g) << ',' << g17(d.lambda0) << ',' << g17(d.lambda1) << ','
           << g17(d.rho) << ',' << g17(d.rho_prime);
        rows[i] = os.str();
    });

    std::ostringstream body;
    body << "s,ng_x0,ng_x1,ng_x2,ng_x3,t_x0,t_x1,t_x2,t_x3,n1_x0,n1_x1,n1_x2,n1_x3,"
            "n2_x0,n2_x1,n2_x2,n2_x3,k_n,tau1,tau2,k_g,tau_g,lambda0,lambda1,rho,rho_prime\n";
    for (const auto& r : rows) body << r << '\n';
    emit(cfg.csv_path, body.str());
    return exit_ok;
}

int cmd_invariants(const common_options& opt) {
    run_config cfg = resolve_config(opt);
    curve_system sys = cfg.compile();
    auto [lo, hi] = resolve_range(opt, sys);
    std::vector<double> grid = linspace(lo, hi, cfg.samples);

    std::vector<std::string> rows(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        std::ostringstream os;
        os << g17(grid[i]);
        auto flags = assumption_report(sys, {grid[i]})[0];
        try {
            derived_invariants d = derived_invariants_at(sys, grid[i]);
            frame_sample f = frame_at(sys, grid[i]);
            os << ',' << g17(f.k_n) << ',' << g17(f.tau1) << ',' << g17(f.tau2) << ','
               << g17(f.k_g) << ',' << g17(f.tau_g) << ',' << g17(d.lambda0) << ','
               << g17(d.lambda1) << ',' << g17(d.lambda2) << ',' << g17(d.rho) << ','
               << g17(d.rho_prime);
        } catch (const frame_degenerate&) {
            for (int k = 0; k < 10; ++k) os << ",nan";
        }
        os << ',' << (flags.kg_nonzero ? 1 : 0) << ',' << (flags.nondegenerate ? 1 : 0) << ','
           << flags.regime;
        rows[i] = os.str();
    });

    std::ostringstream body;
    body << "s,k_n,tau1,tau2,k_g,tau_g,lambda0,lambda1,lambda2,rho,rho_prime,"
            "kg_nonzero,nondegenerate,regime\n";
    for (const auto& r : rows) body << r << '\n';
    emit(cfg.csv_path, body.str());
    return exit_ok;
}

int cmd_locus(const common_options& opt) {
    run_config cfg = resolve_config(opt);
    curve_system sys = cfg.compile();
    surface_kind kind = resolve_kind(opt);
    auto [lo, hi] = resolve_range(opt, sys);
    auto locus = singular_locus(sys, kind, lo, hi, cfg.samples);

    std::ostringstream body;
    body << "s,theta,x0,x1,x2,x3,class,lambda0,lambda1,rho,rho_prime,status\n";
    for (const auto& p : locus) {
        body << g17(p.s);
        if (p.status == sample_status::ok) {
            body << ',' << g17(p.theta) << ',' << g17(p.position.x0) << ',' << g17(p.position.x1)
                 << ',' << g17(p.position.x2) << ',' << g17(p.position.x3) << ','
                 << to_string(p.classification) << ',' << g17(p.lambda0) << ',' << g17(p.lambda1)
                 << ',' << g17(p.rho) << ',' << g17(p.rho_prime);
        } else {
            body << ",nan,nan,nan,nan,nan,,nan,nan,nan,nan";
        }
        body << ',' << to_string(p.status) << '\n';
    }
    emit(cfg.csv_path, body.str());
    return exit_ok;
}

int cmd_surface(const common_options& opt) {
    run_config cfg = resolve_config(opt);
    curve_system sys = cfg.compile();
    surface_kind kind = resolve_kind(opt);
    auto [lo, hi] = resolve_range(opt, sys);
    surface_patch patch =
        sample_patch(sys, kind, lo, hi, cfg.theta_min, cfg.theta_max, cfg.samples, cfg.theta_samples);
    patch.label = cfg.name;

    std::size_t ok_count = 0;
    for (const auto& ps : patch.samples)
        if (ps.status == sample_status::ok) ++ok_count;
    if (ok_count == 0)
        throw wrong_regime("no valid surface sample on the whole grid for kind " +
                           std::string(to_string(kind)));

    std::ostringstream body;
    body << "s,theta,x0,x1,x2,x3,residual,min_sv,status\n";
    for (const auto& ps : patch.samples) {
        body << g17(ps.s) << ',' << g17(ps.theta);
        if (ps.status == sample_status::ok) {
            body << ',' << g17(ps.position.x0) << ',' << g17(ps.position.x1) << ','
                 << g17(ps.position.x2) << ',' << g17(ps.position.x3) << ',' << g17(ps.residual)
                 << ',' << g17(ps.min_sv);
        } else {
            body << ",nan,nan,nan,nan,nan,nan";
        }
        body << ',' << to_string(ps.status) << '\n';
    }
    emit(cfg.csv_path, body.str());

    if (!cfg.obj_path.empty()) {
        std::string projection = cfg.projection;
        if (projection == "auto")
            projection = kind == surface_kind::hyperbolic ? "poincare" : "drop_x0";
        std::ofstream obj(cfg.obj_path, std::ios::binary);
        if (!obj) throw config_error("cannot open OBJ output '" + cfg.obj_path + "'");
        obj_stats stats = write_patch_obj(obj, patch, projection, cfg.name, fnv1a64(cfg.canonical()));
        std::cerr << "obj: " << stats.vertices << " vertices, " << stats.triangles
                  << " triangles, " << stats.dropped << " samples dropped\n";
    }
    return exit_ok;
}

int cmd_classify(const common_options& opt) {
    run_config cfg = resolve_config(opt);
    curve_system sys = cfg.compile();
    surface_kind kind = resolve_kind(opt);
    auto [lo, hi] = resolve_range(opt, sys);
    auto locus = singular_locus(sys, kind, lo, hi, cfg.samples);

    std::vector<std::string> rows(locus.size());
    parallel_for(locus.size(), [&](std::size_t i) {
        const auto& p = locus[i];
        std::ostringstream os;
        os << g17(p.s);
        if (p.status != sample_status::ok) {
            os << ",nan,,nan,nan,nan,nan,,0,nan,0," << to_string(p.status);
            rows[i] = os.str();
            return;
        }
        vec4d v = closed_form_direction(sys, kind, p.s, p.theta);
        auto oracle = detect_Ak(sys, kind, v, p.s, 4, sys.tol().ak);
        auto versal = versality_check(sys, kind, p.s, v);
        const char* oracle_name =
            oracle.status == singularity_report::kind::a_k
                ? (oracle.order == 2 ? "A2" : oracle.order == 3 ? "A3" : "Ak")
                : (oracle.status == singularity_report::kind::infinite_within_tolerance ? "inf"
                                                                                        : "none");
        bool agree = (p.classification == singular_class::cuspidal_edge && oracle.is_order(2)) ||
                     ((p.classification == singular_class::swallowtail ||
                       p.classification == singular_class::cuspidal_beaks) &&
                      oracle.is_order(3)) ||
                     (p.classification == singular_class::slice_degenerate &&
                      oracle.status == singularity_report::kind::infinite_within_tolerance);
        os << ',' << g17(p.theta) << ',' << to_string(p.classification) << ',' << g17(p.lambda0)
           << ',' << g17(p.lambda1) << ',' << g17(p.rho) << ',' << g17(p.rho_prime) << ','
           << oracle_name << ',' << versal.rank_B << ',' << g17(versal.det_A) << ','
           << (agree ? 1 : 0) << ",ok";
        rows[i] = os.str();
    });

    std::ostringstream body;
    body << "s,theta,class,lambda0,lambda1,rho,rho_prime,oracle,rank_B,det_A,agree,status\n";
    for (const auto& r : rows) body << r << '\n';
    emit(cfg.csv_path, body.str());
    return exit_ok;
}

// ---------------------------------------------------------------------------
// verify: the library's invariant suite on the configured curve
// ---------------------------------------------------------------------------

struct check_result {
    std::string name;
    bool pass;
    std::string detail;
};

int cmd_verify(const common_options& opt) {
    run_config cfg = resolve_config(opt);
    std::vector<check_result> results;
    auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        results.push_back({name, pass, detail});
    };

    std::optional<curve_system> sys_opt;
    try {
        sys_opt = cfg.compile();
        report("compile", true, cfg.name);
    } catch (const error& e) {
        report("compile", false, e.what());
    }

    if (sys_opt) {
        const curve_system& sys = *sys_opt;
        double L = sys.total_length();
        int n = std::min(cfg.samples, 200);
        std::vector<double> grid = linspace(0.005 * L, 0.995 * L, n);

        {
            double worst_gram = 0.0, worst_frenet = 0.0;
            std::vector<double> gram(grid.size(), 0.0), fren(grid.size(), 0.0);
            std::vector<int> degenerate(grid.size(), 0);
            parallel_for(grid.size(), [&](std::size_t i) {
                try {
                    frame_sample f = frame_at(sys, grid[i]);
                    const vec4d* basis[4] = {&f.n_gamma, &f.t, &f.n1, &f.n2};
                    const double target[4] = {-1.0, 1.0, 1.0, 1.0};
                    double g = 0.0;
                    for (int a = 0; a < 4; ++a)
                        for (int b = 0; b < 4; ++b)
                            g = std::max(g, std::fabs(pseudo_dot(*basis[a], *basis[b]) -
                                                      (a == b ? target[a] : 0.0)));
                    gram[i] = g;
                    auto euclid0 = [](const vec4<jet>& v) {
                        vec4d x = value(v);
                        return std::sqrt(euclid_dot(x, x));
                    };
                    vec4<jet> r1 = derivative(f.n_gamma_jets) -
                                   (f.t_jets * f.k_n_jet + f.n1_jets * f.tau1_jet +
                                    f.n2_jets * f.tau2_jet);
                    vec4<jet> r2 =
                        derivative(f.t_jets) - (f.n_gamma_jets * f.k_n_jet + f.n1_jets * f.k_g_jet);
                    vec4<jet> r3 = derivative(f.n1_jets) -
                                   (f.n_gamma_jets * f.tau1_jet - f.t_jets * f.k_g_jet +
                                    f.n2_jets * f.tau_g_jet);
                    vec4<jet> r4 = derivative(f.n2_jets) -
                                   (f.n_gamma_jets * f.tau2_jet - f.n1_jets * f.tau_g_jet);
                    fren[i] = std::max(std::max(euclid0(r1), euclid0(r2)),
                                       std::max(euclid0(r3), euclid0(r4)));
                } catch (const frame_degenerate&) {
                    degenerate[i] = 1;
                }
            });
            int n_deg = 0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                worst_gram = std::max(worst_gram, gram[i]);
                worst_frenet = std::max(worst_frenet, fren[i]);
                n_deg += degenerate[i];
            }
            std::ostringstream os;
            os << "max gram defect " << worst_gram << ", max frenet residual " << worst_frenet;
            if (n_deg) os << ", " << n_deg << " degenerate samples skipped";
            report("frame_orthonormality", worst_gram < 1e-9, os.str());
            report("frenet_residuals", worst_frenet < 1e-7, os.str());
        }

        // pick the kinds whose regime holds on the sampled grid
        auto flags = assumption_report(sys, grid);
        int hyp = 0, des = 0, nondeg = 0;
        for (const auto& fl : flags) {
            if (fl.regime == 1) ++hyp;
            if (fl.regime == -1) ++des;
            if (fl.nondegenerate) ++nondeg;
        }
        std::vector<surface_kind> kinds;
        if (hyp == n) kinds.push_back(surface_kind::hyperbolic);
        if (des == n) kinds.push_back(surface_kind::de_sitter);

        for (surface_kind kind : kinds) {
            double th_lo = kind == surface_kind::hyperbolic ? -2.0 : 0.0;
            double th_hi = kind == surface_kind::hyperbolic ? 2.0 : 6.283185307179586;
            surface_patch patch = sample_patch(sys, kind, 0.02 * L, 0.98 * L, th_lo, th_hi, 12, 12);
            double worst = 0.0;
            bool all_ok = true;
            for (std::size_t i = 0; i < patch.s_values.size(); ++i) {
                frame_sample f = frame_at(sys, patch.s_values[i]);
                for (std::size_t j = 0; j < patch.theta_values.size(); ++j) {
                    const auto& ps = patch.at(i, j);
                    if (ps.status != sample_status::ok) {
                        all_ok = false;
                        continue;
                    }
                    jet h = height_jet(f, kind, ps.position, sys.tol().residual);
                    worst = std::max(worst, std::fabs(h.deriv(0)));
                    worst = std::max(worst, std::fabs(h.deriv(1)));
                    worst = std::max(worst, std::fabs(ps.residual));
                }
            }
            std::ostringstream os;
            os << to_string(kind) << ": max |h|,|h'|,residual " << worst
               << (all_ok ? "" : " (some samples out of regime)");
            report("discriminant_property", worst < 1e-9, os.str());

            if (nondeg == n) {
                int mismatches = 0, tested = 0;
                for (int i = 0; i < 25; ++i) {
                    double s = 0.02 * L + 0.96 * L * (i + 0.5) / 25.0;
                    frame_sample f = frame_at(sys, s);
                    derived_invariants d = derived_from_frame(f);
                    double theta_star;
                    try {
                        theta_star = theta_singular(f, d, kind, sys.tol().assume);
                    } catch (const error&) {
                        continue;
                    }
                    double offsets[3] = {0.0, 0.35, -0.6};
                    for (double off : offsets) {
                        vec4d v = closed_form_direction(f, kind, theta_star + off, sys.tol().assume);
                        auto rep = detect_Ak(f, kind, v, 4, sys.tol().ak, sys.tol().residual);
                        ++tested;
                        bool on_locus = off == 0.0;
                        bool order_ge2 = rep.status != singularity_report::kind::not_vanishing &&
                                         (rep.status != singularity_report::kind::a_k || rep.order >= 2);
                        if (order_ge2 != on_locus) ++mismatches;
                    }
                }
                std::ostringstream os2;
                os2 << to_string(kind) << ": " << tested << " samples, " << mismatches
                    << " mismatches";
                report("oracle_equivalence", mismatches == 0 && tested > 0, os2.str());

                auto locus = singular_locus(sys, kind, 0.02 * L, 0.98 * L, 80);
                auto slice = slice_test(sys, kind, 0.02 * L, 0.98 * L, 80);
                double spread = 0.0;
                bool have = false;
                vec4d first{};
                for (const auto& p : locus) {
                    if (p.status != sample_status::ok) continue;
                    if (!have) {
                        first = p.position;
                        have = true;
                    }
                    vec4d diff = p.position - first;
                    spread = std::max(spread, euclid_norm(diff));
                }
                bool locus_constant = have && spread < 1e-6;
                bool agree = slice.is_slice == locus_constant;
                std::ostringstream os3;
                os3 << to_string(kind) << ": is_slice=" << (slice.is_slice ? "true" : "false")
                    << ", locus spread " << spread << ", max|rho| " << slice.max_abs_rho;
                report("slice_biconditional", agree, os3.str());
            }
        }
        if (kinds.empty())
            report("discriminant_property", true,
                   "vacuous: neither surface kind is defined on the whole range");
    }

    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "ok   " : "FAIL ") << r.name << " - " << r.detail << "\n";
        if (!r.pass) all_pass = false;
    }
    if (!all_pass) {
        std::cerr << "E_VERIFY: one or more checks failed\n";
        return exit_verify;
    }
    return exit_ok;
}

int cmd_examples(const std::string& name) {
    if (name.empty()) {
        for (const auto& b : builtin_configs())
            std::cout << b.name << " - " << b.description << "\n";
        return exit_ok;
    }
    for (const auto& b : builtin_configs()) {
        if (name == b.name) {
            std::cout << b.toml;
            return exit_ok;
        }
    }
    throw config_error("unknown builtin curve '" + name + "'");
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Lorentzian Darboux frames, tangential height functions and the singular"
                 " geometry of hyperbolic/de Sitter surfaces of curves in spacelike"
                 " hypersurfaces of Minkowski 4-space"};
    app.require_subcommand(1);

    common_options opt;
    std::string examples_name;

    CLI::App* frame = app.add_subcommand("frame", "Darboux frame and invariants along the curve");
    add_common(frame, opt, false);
    CLI::App* invariants =
        app.add_subcommand("invariants", "derived invariants and assumption flags");
    add_common(invariants, opt, false);
    CLI::App* locus = app.add_subcommand("locus", "singular locus of the surface, classified");
    add_common(locus, opt);
    CLI::App* surface = app.add_subcommand("surface", "sample the surface; export CSV/OBJ");
    add_common(surface, opt);
    CLI::App* classify =
        app.add_subcommand("classify", "classified locus with the A_k oracle cross-check");
    add_common(classify, opt);
    CLI::App* verify = app.add_subcommand("verify", "run the invariant check suite");
    add_common(verify, opt);
    CLI::App* examples = app.add_subcommand("examples", "list builtin curves or print one");
    examples->add_option("--name", examples_name, "print the TOML of this builtin");

    CLI11_PARSE(app, argc, argv);

    if (frame->parsed()) return cmd_frame(opt);
    if (invariants->parsed()) return cmd_invariants(opt);
    if (locus->parsed()) return cmd_locus(opt);
    if (surface->parsed()) return cmd_surface(opt);
    if (classify->parsed()) return cmd_classify(opt);
    if (verify->parsed()) return cmd_verify(opt);
    if (examples->parsed()) return cmd_examples(examples_name);
    return exit_config;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const config_error& e) {
        std::cerr << "E_CONFIG: " << e.what() << "\n";
        return exit_config;
    } catch (const syntax_error& e) {
        std::cerr << "E_CONFIG: " << e.what() << "\n";
        return exit_config;
    } catch (const unknown_identifier& e) {
        std::cerr << "E_CONFIG: " << e.what() << "\n";
        return exit_config;
    } catch (const error& e) {
        std::cerr << "E_REGIME: " << e.what() << "\n";
        return exit_regime;
    } catch (const std::exception& e) {
        std::cerr << "E_INTERNAL: " << e.what() << "\n";
        return exit_regime;
    }
}
