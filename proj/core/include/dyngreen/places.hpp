#pragma once

// Places of Q: the archimedean absolute value and one p-adic absolute value
// per prime. Finite-place quantities carry exact valuations next to their
// float logarithms.

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dyngreen/forms.hpp"
#include "dyngreen/rational.hpp"

namespace dyngreen {

class Place {
public:
    static Place archimedean() { return Place(); }
    /// Throws DomainError unless p is prime.
    static Place finite(const Int& p);
    static Place finite(unsigned long p) { return finite(Int(p)); }
    /// "inf" or "p:<prime>".
    static Place parse(std::string_view text);

    bool is_archimedean() const { return prime_ == 0; }
    bool is_finite() const { return prime_ != 0; }
    /// The prime of a finite place; throws DomainError at the archimedean place.
    const Int& prime() const;
    /// log p at a finite place.
    double log_prime() const;

    std::string to_string() const;

    friend bool operator==(const Place& a, const Place& b) { return a.prime_ == b.prime_; }
    friend bool operator<(const Place& a, const Place& b) { return a.prime_ < b.prime_; }

private:
    Place() = default;
    explicit Place(Int p) : prime_(std::move(p)) {}
    Int prime_{0};  // 0 marks the archimedean place
};

struct LogAbs {
    double value = 0.0;             // log |x|_v
    std::optional<long> valuation;  // v_p(x) at finite places
};

bool is_prime(const Int& n);

/// v_p(x) for x != 0.
long valuation(const Int& x, const Int& p);
long valuation(const Rat& x, const Int& p);

/// Throws DomainError for x = 0.
LogAbs log_abs(const Rat& x, const Place& v);

/// 1 at the archimedean place, 0 at finite places.
int epsilon_K(const Place& v);

/// Distinct prime divisors of |n| in increasing order (n != 0). Throws
/// ResourceError when a composite cofactor resists Pollard rho.
std::vector<Int> prime_divisors(const Int& n);

/// v_p(Res) = 0 for the integer normalization of F.
bool good_reduction(const MapPair& f, const Int& p);
inline bool good_reduction(const MapPair& f, unsigned long p) { return good_reduction(f, Int(p)); }

/// Primes dividing Res of the integer normalization of F.
std::vector<Int> bad_primes(const MapPair& f);

/// Sum of log|x|_v over the archimedean place and every prime dividing the
/// numerator or denominator of x. Zero up to rounding.
double product_formula_check(const Rat& x);

}  // namespace dyngreen
