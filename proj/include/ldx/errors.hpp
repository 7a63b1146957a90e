#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ldx {

/// Base class for every error thrown by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. Carries the byte offset of the failure and a
/// human-readable description of what was expected there.
struct syntax_error : error {
    syntax_error(std::size_t offset, const std::string& expected)
        : error("syntax error at offset " + std::to_string(offset) + ": expected " + expected),
          offset(offset),
          expected(expected) {}

    std::size_t offset;
    std::string expected;
};

/// Identifier that is neither a declared variable nor a known function.
struct unknown_identifier : error {
    unknown_identifier(std::size_t offset, const std::string& name)
        : error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
          offset(offset),
          name(name) {}

    std::size_t offset;
    std::string name;
};

/// Evaluation hit a point where the expression is not smooth (log/sqrt of a
/// nonpositive leading term, division by a zero-leading-coefficient jet).
struct domain_error : error {
    using error::error;
};

struct zero_vector : error {
    using error::error;
};

struct irregular_curve : error {
    using error::error;
};

struct not_spacelike_hypersurface : error {
    using error::error;
};

struct bad_direct_normal : error {
    using error::error;
};

/// k_g dropped below its threshold; the moving frame is undefined there.
struct frame_degenerate : error {
    using error::error;
};

/// Direction vector is off the required pseudo-sphere.
struct bad_direction : error {
    using error::error;
};

/// Sign of k_g^2 - k_n^2 is inconsistent with the requested surface kind.
struct wrong_regime : error {
    using error::error;
};

/// k_n*tau2 + k_g*tau_g is within tolerance of zero; the singular-locus angle
/// is undefined.
struct degenerate_assumption : error {
    using error::error;
};

/// Hyperbolic locus equation tanh(theta) = r has |r| >= 1.
struct no_real_theta : error {
    using error::error;
};

struct config_error : error {
    using error::error;
};

struct internal_error : error {
    using error::error;
};

}  // namespace ldx
