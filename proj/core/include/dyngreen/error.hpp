#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dyngreen {

/// Input rejected by a precondition (zero lift, Res(F) = 0, bad place, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A configured size limit would be exceeded (coefficient bits, basis size,
/// enumeration window, factorization effort).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical routine failed to converge.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Limits {
    /// Maximum bit size of any numerator or denominator produced by
    /// composition. Overridden by DYNGREEN_MAX_BITS.
    std::size_t max_coeff_bits = std::size_t{1} << 20;
    /// Largest N accepted by the change-of-basis routines.
    std::size_t max_basis_size = 64;
    /// Largest number of candidate points a census may enumerate.
    std::size_t max_census_points = 5'000'000;
    /// Coordinate size up to which orbits are iterated with exact integers;
    /// beyond it the naive-height oracle continues with residues modulo
    /// powers of Res and scaled MPFR coordinates.
    std::size_t max_orbit_bits = 4096;

    /// Defaults with DYNGREEN_MAX_BITS applied when set.
    static Limits from_env();
};

/// Process-wide defaults, read from the environment once.
const Limits& default_limits();

std::string version_string();

}  // namespace dyngreen
