#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ldx/curve.hpp"
#include "ldx/errors.hpp"
#include "ldx/toml.hpp"

namespace ldx {

/// A validated run configuration: the curve definition plus grids, tolerances
/// and output choices. Built from a TOML file or a builtin; unknown keys are
/// rejected up front.
struct run_config {
    std::string name = "unnamed";
    bool embedded = true;
    std::array<std::string, 4> hypersurface{};   // embedded: expressions in u1,u2,u3
    std::array<std::string, 3> param_curve{};    // embedded: u1(s), u2(s), u3(s)
    std::array<std::string, 4> direct_curve{};   // direct: x0(s)..x3(s)
    std::array<std::string, 4> direct_normal{};  // direct: unit timelike normal
    double u_min = 0.0;
    double u_max = 1.0;
    int jet_order = 7;
    tolerances tol;

    int samples = 200;
    double theta_min = -2.5;
    double theta_max = 2.5;
    int theta_samples = 50;

    std::string csv_path;
    std::string obj_path;
    std::string projection = "auto";  // auto | poincare | drop_x0

    curve_system compile() const {
        if (embedded) {
            return compile_embedded(hypersurface_def::parse(hypersurface),
                                    parameter_curve_def::parse(param_curve), u_min, u_max, jet_order,
                                    tol);
        }
        return compile_direct(spacetime_curve_def::parse(direct_curve),
                              spacetime_curve_def::parse(direct_normal), u_min, u_max, jet_order, tol);
    }

    /// Canonical text for hashing: every semantically relevant field in a
    /// fixed order with full precision.
    std::string canonical() const {
        std::ostringstream os;
        os.precision(17);
        os << "name=" << name << ";mode=" << (embedded ? "embedded" : "direct") << ";";
        if (embedded) {
            for (const auto& e : hypersurface) os << "X:" << e << ";";
            for (const auto& e : param_curve) os << "c:" << e << ";";
        } else {
            for (const auto& e : direct_curve) os << "g:" << e << ";";
            for (const auto& e : direct_normal) os << "n:" << e << ";";
        }
        os << "interval=" << u_min << "," << u_max << ";K=" << jet_order << ";";
        os << "tol=" << tol.lightlike << "," << tol.kg << "," << tol.assume << "," << tol.ak << ","
           << tol.slice << "," << tol.class_rho << "," << tol.class_lambda << "," << tol.rank << ";";
        os << "grid=" << samples << "," << theta_min << "," << theta_max << "," << theta_samples << ";";
        return os.str();
    }
};

inline std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace detail {

inline void read_tolerances(const toml_table& t, tolerances& tol) {
    tol.lightlike = t.get_number("tolerances.lightlike", tol.lightlike);
    tol.kg = t.get_number("tolerances.kg", tol.kg);
    tol.assume = t.get_number("tolerances.assume", tol.assume);
    tol.direct_normal = t.get_number("tolerances.direct_normal", tol.direct_normal);
    tol.regular = t.get_number("tolerances.regular", tol.regular);
    tol.ak = t.get_number("tolerances.ak", tol.ak);
    tol.residual = t.get_number("tolerances.residual", tol.residual);
    tol.slice = t.get_number("tolerances.slice", tol.slice);
    tol.class_rho = t.get_number("tolerances.class_rho", tol.class_rho);
    tol.class_lambda = t.get_number("tolerances.class_lambda", tol.class_lambda);
    tol.rank = t.get_number("tolerances.rank", tol.rank);
    tol.quadrature = t.get_number("tolerances.quadrature", tol.quadrature);
}

}  // namespace detail

/// Parse and validate a configuration from TOML text.
inline run_config load_config_text(const std::string& text, const std::string& origin = "<inline>") {
    toml_table t = toml_table::parse(text);
    run_config cfg;
    cfg.name = t.get_string("name", origin);
    std::string mode = t.get_string("mode", "embedded");
    if (mode != "embedded" && mode != "direct")
        throw config_error("mode must be 'embedded' or 'direct', got '" + mode + "'");
    cfg.embedded = mode == "embedded";

    std::vector<double> interval = t.require_numbers("interval");
    if (interval.size() != 2) throw config_error("interval must be [min, max]");
    cfg.u_min = interval[0];
    cfg.u_max = interval[1];
    cfg.jet_order = static_cast<int>(t.get_number("jet_order", 7));

    if (cfg.embedded) {
        static const char* xs[4] = {"hypersurface.x0", "hypersurface.x1", "hypersurface.x2",
                                    "hypersurface.x3"};
        for (int i = 0; i < 4; ++i) cfg.hypersurface[static_cast<std::size_t>(i)] = t.require_string(xs[i]);
        static const char* us[3] = {"curve.u1", "curve.u2", "curve.u3"};
        for (int i = 0; i < 3; ++i) cfg.param_curve[static_cast<std::size_t>(i)] = t.require_string(us[i]);
    } else {
        static const char* gs[4] = {"curve.x0", "curve.x1", "curve.x2", "curve.x3"};
        static const char* ns[4] = {"normal.x0", "normal.x1", "normal.x2", "normal.x3"};
        for (int i = 0; i < 4; ++i) {
            cfg.direct_curve[static_cast<std::size_t>(i)] = t.require_string(gs[i]);
            cfg.direct_normal[static_cast<std::size_t>(i)] = t.require_string(ns[i]);
        }
    }

    detail::read_tolerances(t, cfg.tol);

    cfg.samples = static_cast<int>(t.get_number("grid.samples", cfg.samples));
    cfg.theta_min = t.get_number("grid.theta_min", cfg.theta_min);
    cfg.theta_max = t.get_number("grid.theta_max", cfg.theta_max);
    cfg.theta_samples = static_cast<int>(t.get_number("grid.theta_samples", cfg.theta_samples));

    cfg.csv_path = t.get_string("output.csv", "");
    cfg.obj_path = t.get_string("output.obj", "");
    cfg.projection = t.get_string("output.projection", "auto");
    if (cfg.projection != "auto" && cfg.projection != "poincare" && cfg.projection != "drop_x0")
        throw config_error("output.projection must be auto, poincare or drop_x0");

    if (cfg.samples < 1 || cfg.theta_samples < 1) throw config_error("grid sample counts must be >= 1");

    auto leftovers = t.unconsumed_keys();
    if (!leftovers.empty()) {
        std::string msg = "unknown config keys:";
        for (const auto& k : leftovers) msg += " " + k;
        throw config_error(msg);
    }
    return cfg;
}

inline run_config load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config_text(buf.str(), path);
}

struct builtin_config {
    const char* name;
    const char* description;
    const char* toml;
};

/// Reference curves spanning the interesting regimes, one flag away.
inline const std::vector<builtin_config>& builtin_configs() {
    static const std::vector<builtin_config> configs = {
        {"helix_r3",
         "circular helix in the flat slice M = R^3 (x0 = 0), unit-speed parametrization",
         R"toml(name = "helix_r3"
mode = "embedded"
interval = [0.0, 12.566370614359172]  # [0, 4 pi]
jet_order = 7

[hypersurface]
x0 = "0"
x1 = "u1"
x2 = "u2"
x3 = "u3"

[curve]
u1 = "cos(s/1.4142135623730951)"
u2 = "sin(s/1.4142135623730951)"
u3 = "s/1.4142135623730951"

[grid]
samples = 200
theta_min = -2.5
theta_max = 2.5
theta_samples = 50
)toml"},
        {"h3_circle",
         "circle of radius cosh(1) on M = H^3(-1), direct mode with n_gamma = gamma",
         R"toml(name = "h3_circle"
mode = "direct"
interval = [0.0, 6.0]
jet_order = 7

[curve]
x0 = "1.5430806348152437*cosh(s/1.5430806348152437)"
x1 = "1.5430806348152437*sinh(s/1.5430806348152437)"
x2 = "1.1752011936438014"
x3 = "0"

[normal]
x0 = "1.5430806348152437*cosh(s/1.5430806348152437)"
x1 = "1.5430806348152437*sinh(s/1.5430806348152437)"
x2 = "1.1752011936438014"
x3 = "0"

[grid]
samples = 200
theta_min = 0.0
theta_max = 6.283185307179586
theta_samples = 50
)toml"},
        {"h3_torsion",
         "helix on M = H^3(-1) with k_h < 1 and tau_h != 0: the de Sitter surface regime",
         R"toml(name = "h3_torsion"
mode = "direct"
interval = [0.0, 4.0]
jet_order = 7

[curve]
x0 = "1.1276259652063807*cosh(s)"
x1 = "1.1276259652063807*sinh(s)"
x2 = "0.5210953054937474*cos(s)"
x3 = "0.5210953054937474*sin(s)"

[normal]
x0 = "1.1276259652063807*cosh(s)"
x1 = "1.1276259652063807*sinh(s)"
x2 = "0.5210953054937474*cos(s)"
x3 = "0.5210953054937474*sin(s)"

[grid]
samples = 200
theta_min = 0.0
theta_max = 6.283185307179586
theta_samples = 50
)toml"},
        {"graph_perturbed",
         "generic non-slice curve on the graph hypersurface x0 = 0.3 (u1^2 + u2^2)",
         R"toml(name = "graph_perturbed"
mode = "embedded"
interval = [0.0, 6.283185307179586]
jet_order = 7

[hypersurface]
x0 = "0.3*(u1^2 + u2^2)"
x1 = "u1"
x2 = "u2"
x3 = "u3"

[curve]
u1 = "(1 + 0.05*sin(2*s))*cos(s)"
u2 = "(1 + 0.05*sin(2*s))*sin(s)"
u3 = "0.4*s"

[grid]
samples = 200
theta_min = -2.5
theta_max = 2.5
theta_samples = 50
)toml"},
    };
    return configs;
}

inline run_config load_builtin(const std::string& name) {
    for (const auto& b : builtin_configs())
        if (name == b.name) return load_config_text(b.toml, b.name);
    std::string known;
    for (const auto& b : builtin_configs()) known += std::string(" ") + b.name;
    throw config_error("unknown builtin curve '" + name + "'; available:" + known);
}

}  // namespace ldx
