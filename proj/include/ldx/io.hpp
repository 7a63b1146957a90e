#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "ldx/surfaces.hpp"

namespace ldx {

/// Shortest round-trip decimal formatting (17 significant digits), used for
/// every number we write so outputs are byte-stable run to run.
inline std::string format_g17(double v) {
    char buf[40];
    int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, buf + (n > 0 ? n : 0));
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

struct obj_stats {
    std::size_t vertices = 0;
    std::size_t triangles = 0;
    std::size_t dropped = 0;
};

/// Write a surface patch as an ASCII OBJ mesh of grid quads split into
/// triangles. Projections to 3D:
///   poincare: (x1,x2,x3)/(1+x0), for H^3 patches (past-sheet x0 < 0 dropped)
///   drop_x0:  (x1,x2,x3) orthographic, for S^3_1 patches
/// Invalid samples are dropped and faces re-indexed around them.
inline obj_stats write_patch_obj(std::ostream& out, const surface_patch& patch,
                                 const std::string& projection, const std::string& config_name,
                                 std::uint64_t config_hash) {
    const std::size_t n_s = patch.s_values.size();
    const std::size_t n_theta = patch.theta_values.size();

    obj_stats stats;
    std::vector<long> index(n_s * n_theta, -1);
    std::vector<std::array<double, 3>> verts;
    verts.reserve(n_s * n_theta);
    for (std::size_t i = 0; i < n_s; ++i) {
        for (std::size_t j = 0; j < n_theta; ++j) {
            const patch_sample& ps = patch.at(i, j);
            bool keep = ps.status == sample_status::ok;
            std::array<double, 3> p{};
            if (keep && projection == "poincare") {
                if (ps.position.x0 < 0.0) {
                    keep = false;  // past sheet: kept in CSV, not projectable
                } else {
                    double w = 1.0 + ps.position.x0;
                    p = {ps.position.x1 / w, ps.position.x2 / w, ps.position.x3 / w};
                }
            } else if (keep) {
                p = {ps.position.x1, ps.position.x2, ps.position.x3};
            }
            if (keep && !(std::isfinite(p[0]) && std::isfinite(p[1]) && std::isfinite(p[2])))
                keep = false;
            if (!keep) {
                ++stats.dropped;
                continue;
            }
            index[i * n_theta + j] = static_cast<long>(verts.size());
            verts.push_back(p);
        }
    }

    char hashbuf[19];
    std::snprintf(hashbuf, sizeof hashbuf, "%016llx", static_cast<unsigned long long>(config_hash));
    out << "# ldx surface mesh\n";
    out << "# kind: " << to_string(patch.kind) << "\n";
    out << "# projection: " << projection
        << (projection == "poincare" ? " (x1,x2,x3)/(1+x0)" : " (x1,x2,x3)") << "\n";
    out << "# config: " << config_name << " hash " << hashbuf << "\n";
    out << "# grid: " << n_s << " x " << n_theta << ", dropped " << stats.dropped << " samples\n";
    for (const auto& v : verts)
        out << "v " << format_g17(v[0]) << ' ' << format_g17(v[1]) << ' ' << format_g17(v[2]) << '\n';
    stats.vertices = verts.size();

    for (std::size_t i = 0; i + 1 < n_s; ++i) {
        for (std::size_t j = 0; j + 1 < n_theta; ++j) {
            long a = index[i * n_theta + j];
            long b = index[(i + 1) * n_theta + j];
            long c = index[(i + 1) * n_theta + j + 1];
            long d = index[i * n_theta + j + 1];
            if (a < 0 || b < 0 || c < 0 || d < 0) continue;
            out << "f " << a + 1 << ' ' << b + 1 << ' ' << c + 1 << '\n';
            out << "f " << a + 1 << ' ' << c + 1 << ' ' << d + 1 << '\n';
            stats.triangles += 2;
        }
    }
    return stats;
}

}  // namespace ldx
