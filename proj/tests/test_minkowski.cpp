#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ldx/minkowski.hpp"

using namespace ldx;
using Catch::Matchers::WithinAbs;

namespace {

const vec4d e0{1, 0, 0, 0};
const vec4d e1{0, 1, 0, 0};
const vec4d e2{0, 0, 1, 0};
const vec4d e3{0, 0, 0, 1};

vec4d random_vec(std::mt19937& rng) {
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    return {d(rng), d(rng), d(rng), d(rng)};
}

}  // namespace

TEST_CASE("pseudo scalar product has signature (-,+,+,+)") {
    CHECK_THAT(pseudo_dot(e0, e0), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(pseudo_dot(vec4d{1, 2, 3, 4}, vec4d{1, 1, 1, 1}), WithinAbs(8.0, 1e-15));
    CHECK_THAT(pseudo_dot(vec4d{1, 1, 0, 0}, vec4d{1, 1, 0, 0}), WithinAbs(0.0, 1e-15));
}

TEST_CASE("pseudo norm") {
    CHECK_THAT(pseudo_norm(vec4d{2, 0, 0, 0}), WithinAbs(2.0, 1e-15));
    CHECK_THAT(pseudo_norm(vec4d{0, 3, 4, 0}), WithinAbs(5.0, 1e-15));
    CHECK_THAT(pseudo_norm(vec4d{1, 1, 0, 0}), WithinAbs(0.0, 1e-15));
}

TEST_CASE("causal classification with a lightlike band") {
    CHECK(causal_character(e0) == causal::timelike);
    CHECK(causal_character(e1) == causal::spacelike);
    CHECK(causal_character(vec4d{1, 1, 0, 0}) == causal::lightlike);
    CHECK(causal_character(vec4d{1, 1 + 1e-12, 0, 0}) == causal::lightlike);
    CHECK(causal_character(vec4d{1, 2, 0, 0}, 1e-10) == causal::spacelike);
    CHECK_THROWS_AS(causal_character(vec4d{0, 0, 0, 0}), zero_vector);
}

TEST_CASE("wedge of basis vectors matches the cofactor expansion") {
    vec4d w = wedge3(e1, e2, e3);
    CHECK_THAT(w.x0, WithinAbs(-1.0, 1e-15));
    CHECK_THAT(w.x1, WithinAbs(0.0, 1e-15));
    CHECK_THAT(w.x2, WithinAbs(0.0, 1e-15));
    CHECK_THAT(w.x3, WithinAbs(0.0, 1e-15));

    vec4d v = wedge3(e0, e1, e2);
    CHECK_THAT(v.x3, WithinAbs(-1.0, 1e-15));
    CHECK_THAT(std::fabs(v.x0) + std::fabs(v.x1) + std::fabs(v.x2), WithinAbs(0.0, 1e-15));
}

TEST_CASE("wedge with a repeated argument vanishes") {
    std::mt19937 rng(11);
    vec4d x = random_vec(rng), y = random_vec(rng);
    vec4d w = wedge3(x, x, y);
    CHECK_THAT(euclid_norm(w), WithinAbs(0.0, 1e-12));
}

TEST_CASE("hyperplane evaluation") {
    hyperplane h1{e0, 0.0};
    CHECK_THAT(hyperplane_eval(h1, vec4d{0, 5, 2, 1}), WithinAbs(0.0, 1e-15));
    CHECK_THAT(hyperplane_eval(h1, e0), WithinAbs(-1.0, 1e-15));
    hyperplane h2{e1, 2.0};
    CHECK_THAT(hyperplane_eval(h2, vec4d{0, 2, 9, 9}), WithinAbs(0.0, 1e-15));
}

TEST_CASE("pseudo sphere residuals") {
    CHECK_THAT(pseudo_sphere_residual(e0, sphere::h3), WithinAbs(0.0, 1e-15));
    CHECK_THAT(pseudo_sphere_residual(e1, sphere::s31), WithinAbs(0.0, 1e-15));
    vec4d p{std::cosh(1.0), std::sinh(1.0), 0, 0};
    CHECK_THAT(pseudo_sphere_residual(p, sphere::h3), WithinAbs(0.0, 1e-12));
}

TEST_CASE("bilinearity and symmetry on random vectors") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        vec4d x = random_vec(rng), y = random_vec(rng), z = random_vec(rng);
        double a = d(rng), b = d(rng);
        CHECK_THAT(pseudo_dot(x, y), WithinAbs(pseudo_dot(y, x), 1e-12));
        double lhs = pseudo_dot(x * a + y * b, z);
        double rhs = a * pseudo_dot(x, z) + b * pseudo_dot(y, z);
        CHECK_THAT(lhs, WithinAbs(rhs, 1e-12 * (1.0 + std::fabs(rhs))));
    }
}

TEST_CASE("wedge is pseudo-orthogonal to its arguments and alternating") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        vec4d x = random_vec(rng), y = random_vec(rng), z = random_vec(rng);
        vec4d w = wedge3(x, y, z);
        double scale = euclid_norm(w) * (euclid_norm(x) + euclid_norm(y) + euclid_norm(z)) + 1.0;
        CHECK_THAT(pseudo_dot(w, x) / scale, WithinAbs(0.0, 1e-10));
        CHECK_THAT(pseudo_dot(w, y) / scale, WithinAbs(0.0, 1e-10));
        CHECK_THAT(pseudo_dot(w, z) / scale, WithinAbs(0.0, 1e-10));

        vec4d swapped = wedge3(y, x, z);
        CHECK(swapped.x0 == -w.x0);
        CHECK(swapped.x1 == -w.x1);
        CHECK(swapped.x2 == -w.x2);
        CHECK(swapped.x3 == -w.x3);
    }
}

TEST_CASE("operations commute with jet evaluation at order zero") {
    std::mt19937 rng(44);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    auto lift = [&](const vec4d& v, double base) {
        // nonconstant jets whose order-0 coefficients are v
        int order = 4;
        return vec4j{jet::variable(base, order) - base + v.x0,
                     jet::variable(base, order) * 0.5 - 0.5 * base + v.x1,
                     jet::constant(v.x2, base, order),
                     jet::variable(base, order) * 2.0 - 2.0 * base + v.x3};
    };
    for (int trial = 0; trial < 50; ++trial) {
        vec4d x = random_vec(rng), y = random_vec(rng), z = random_vec(rng);
        double base = d(rng);
        vec4j xj = lift(x, base), yj = lift(y, base), zj = lift(z, base);
        CHECK_THAT(pseudo_dot(xj, yj).value(), WithinAbs(pseudo_dot(x, y), 1e-12));
        CHECK_THAT(value(wedge3(xj, yj, zj)).x0, WithinAbs(wedge3(x, y, z).x0, 1e-11));
        CHECK_THAT(value(wedge3(xj, yj, zj)).x2, WithinAbs(wedge3(x, y, z).x2, 1e-11));
        CHECK_THAT(pseudo_sphere_residual(xj, sphere::h3).value(),
                   WithinAbs(pseudo_sphere_residual(x, sphere::h3), 1e-12));
        if (std::fabs(pseudo_dot(x, x)) > 1e-3)
            CHECK_THAT(pseudo_norm(xj).value(), WithinAbs(pseudo_norm(x), 1e-12));
    }
}
