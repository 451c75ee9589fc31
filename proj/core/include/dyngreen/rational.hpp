#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dyngreen/error.hpp"

namespace dyngreen {

/// Exact rational; mpq_class keeps values canonical (reduced, positive
/// denominator) after every arithmetic operation.
using Rat = mpq_class;
using Int = mpz_class;

template <class T>
using Matrix = std::vector<std::vector<T>>;

/// Parses "p/q", "-p/q" or an integer. Throws DomainError on malformed input
/// or a zero denominator.
Rat parse_rat(std::string_view text);

std::string to_string(const Rat& x);
std::string to_string(const Int& x);

/// Largest of the numerator and denominator bit lengths.
std::size_t bit_size(const Rat& x);

/// Natural log of |x| for arbitrarily large integers; x must be nonzero.
double log_abs(const Int& x);
double log_abs(const Rat& x);

/// Fraction-free Gaussian elimination (Bareiss). The input is consumed.
Int bareiss_determinant(Matrix<Int> m);

/// Exact determinant of a rational matrix: each row is scaled to integers,
/// the integer determinant is taken with Bareiss, and the scalings undone.
Rat determinant(const Matrix<Rat>& m);

/// Solves m x = rhs exactly. Returns nullopt when m is singular.
std::optional<std::vector<Rat>> solve(Matrix<Rat> m, std::vector<Rat> rhs);

Int lcm_of_denominators(const std::vector<Rat>& values);
Int gcd_of_numerators(const std::vector<Rat>& values);

}  // namespace dyngreen
