#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "ldx/config.hpp"
#include "ldx/io.hpp"
#include "ldx/surfaces.hpp"
#include "ldx/toml.hpp"

using namespace ldx;
using Catch::Matchers::WithinAbs;

TEST_CASE("toml subset round trips typed values") {
    toml_table t = toml_table::parse(R"cfg(
# a comment
name = "demo"     # trailing comment
flag = true
count = 42
ratio = -6.25e-1
interval = [0.0, 3.5]
words = ["a", "b # not a comment"]

[section]
key = "value"
)cfg");
    CHECK(t.get_string("name", "") == "demo");
    CHECK(t.get_bool("flag", false));
    CHECK_THAT(t.get_number("count", 0), WithinAbs(42.0, 0));
    CHECK_THAT(t.get_number("ratio", 0), WithinAbs(-0.625, 1e-15));
    auto iv = t.get_numbers("interval");
    REQUIRE(iv.size() == 2);
    CHECK_THAT(iv[1], WithinAbs(3.5, 0));
    CHECK(t.get_string("section.key", "") == "value");
    CHECK(t.unconsumed_keys().size() == 1);  // words was never read
}

TEST_CASE("toml parse errors carry line numbers") {
    CHECK_THROWS_AS(toml_table::parse("a = "), config_error);
    CHECK_THROWS_AS(toml_table::parse("a == 3"), config_error);
    CHECK_THROWS_AS(toml_table::parse("[sec\na = 1"), config_error);
    CHECK_THROWS_AS(toml_table::parse("a = 1\na = 2"), config_error);
    CHECK_THROWS_AS(toml_table::parse("a = [1, 2"), config_error);
    CHECK_THROWS_AS(toml_table::parse("a = \"unterminated"), config_error);
}

TEST_CASE("unknown config keys are rejected") {
    std::string text = R"cfg(
name = "x"
mode = "embedded"
interval = [0.0, 1.0]
typo_key = 3

[hypersurface]
x0 = "0"
x1 = "u1"
x2 = "u2"
x3 = "u3"

[curve]
u1 = "cos(s)"
u2 = "sin(s)"
u3 = "s"
)cfg";
    try {
        load_config_text(text);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("typo_key") != std::string::npos);
    }
}

TEST_CASE("missing required keys are rejected") {
    CHECK_THROWS_AS(load_config_text("mode = \"embedded\"\n"), config_error);
    CHECK_THROWS_AS(load_config_text("interval = [0.0, 1.0]\nmode = \"direct\"\n"), config_error);
    CHECK_THROWS_AS(load_config_text("interval = [0.0]\nmode = \"embedded\"\n"), config_error);
    CHECK_THROWS_AS(load_config_text("interval = [0.0, 1.0]\nmode = \"nonsense\"\n"), config_error);
}

TEST_CASE("config files load from disk") {
    std::string path = "/tmp/ldx_test_config.toml";
    {
        std::ofstream out(path);
        for (const auto& b : builtin_configs())
            if (std::string(b.name) == "h3_circle") out << b.toml;
    }
    run_config cfg = load_config_file(path);
    CHECK(cfg.name == "h3_circle");
    CHECK_FALSE(cfg.embedded);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_config_file("/nonexistent/ldx.toml"), config_error);
}

TEST_CASE("builtin configs compile and carry their names") {
    for (const auto& b : builtin_configs()) {
        run_config cfg = load_builtin(b.name);
        CHECK(cfg.name == b.name);
        CHECK_NOTHROW(cfg.compile());
    }
    CHECK_THROWS_AS(load_builtin("not_a_curve"), config_error);
}

TEST_CASE("tolerances flow from config into the system") {
    std::string text = R"cfg(
name = "tol-test"
mode = "embedded"
interval = [0.0, 6.0]

[hypersurface]
x0 = "0"
x1 = "u1"
x2 = "u2"
x3 = "u3"

[curve]
u1 = "cos(s)"
u2 = "sin(s)"
u3 = "s"

[tolerances]
kg = 1e-4
slice = 2e-6
)cfg";
    run_config cfg = load_config_text(text);
    CHECK_THAT(cfg.tol.kg, WithinAbs(1e-4, 0));
    CHECK_THAT(cfg.tol.slice, WithinAbs(2e-6, 0));
    CHECK_THAT(cfg.tol.assume, WithinAbs(1e-8, 0));  // untouched default
}

TEST_CASE("config hash is stable and sensitive") {
    run_config a = load_builtin("helix_r3");
    run_config b = load_builtin("helix_r3");
    CHECK(fnv1a64(a.canonical()) == fnv1a64(b.canonical()));
    b.samples += 1;
    CHECK(fnv1a64(a.canonical()) != fnv1a64(b.canonical()));
}

TEST_CASE("obj export produces a well-formed mesh") {
    curve_system sys = load_builtin("helix_r3").compile();
    surface_patch patch = sample_patch(sys, surface_kind::hyperbolic, 0.0, 6.0, -2.0, 2.0, 9, 9);
    std::ostringstream out;
    obj_stats stats = write_patch_obj(out, patch, "poincare", "helix_r3", 0x1234);
    CHECK(stats.vertices == 81);
    CHECK(stats.triangles == 128);
    CHECK(stats.dropped == 0);
    // every vertex finite, every face index in range and 1-based
    std::istringstream in(out.str());
    std::string line;
    std::size_t vertices = 0, faces = 0;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) == 0) {
            double x, y, z;
            REQUIRE(std::sscanf(line.c_str(), "v %lf %lf %lf", &x, &y, &z) == 3);
            CHECK(std::isfinite(x));
            CHECK(std::isfinite(y));
            CHECK(std::isfinite(z));
            ++vertices;
        } else if (line.rfind("f ", 0) == 0) {
            long a, b, c;
            REQUIRE(std::sscanf(line.c_str(), "f %ld %ld %ld", &a, &b, &c) == 3);
            for (long idx : {a, b, c}) {
                CHECK(idx >= 1);
                CHECK(idx <= static_cast<long>(stats.vertices));
            }
            ++faces;
        }
    }
    CHECK(vertices == stats.vertices);
    CHECK(faces == stats.triangles);
}

TEST_CASE("g17 formatting round trips doubles") {
    for (double v : {0.0, 1.0 / 3.0, -0.625, 12.566370614359172, -1e-300}) {
        std::string s = format_g17(v);
        CHECK(std::stod(s) == v);
    }
}
