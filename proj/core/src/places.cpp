#include "dyngreen/places.hpp"

#include <algorithm>
#include <cmath>

#include "dyngreen/error.hpp"

namespace dyngreen {

namespace {

constexpr unsigned long kTrialDivisionBound = 100'000;
constexpr int kPrimalityReps = 40;
constexpr long kRhoIterationLimit = 2'000'000;

// Brent's variant of Pollard rho; returns a nontrivial factor of composite n
// or 0 on failure.
Int pollard_brent(const Int& n, unsigned long seed) {
    Int y(seed % n), c((seed * 7 + 1) % n), g(1), q(1), x, ys;
    const long m = 128;
    long r = 1;
    long steps = 0;
    auto f = [&](const Int& v) {
        Int out = v * v + c;
        mpz_mod(out.get_mpz_t(), out.get_mpz_t(), n.get_mpz_t());
        return out;
    };
    while (g == 1) {
        x = y;
        for (long i = 0; i < r; ++i) y = f(y);
        long k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (long i = 0; i < std::min(m, r - k); ++i) {
                y = f(y);
                Int diff = x - y;
                q = q * abs(diff);
                mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += m;
        }
        r *= 2;
        steps += r;
        if (steps > kRhoIterationLimit) return Int(0);
    }
    if (g == n) {
        do {
            ys = f(ys);
            Int diff = x - ys;
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    return g == n ? Int(0) : g;
}

void factor_into(const Int& n, std::vector<Int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    for (unsigned long seed = 2; seed < 40; ++seed) {
        Int f = pollard_brent(n, seed);
        if (f != 0) {
            factor_into(f, out);
            factor_into(Int(n / f), out);
            return;
        }
    }
    throw ResourceError("could not factor " + dyngreen::to_string(n));
}

}  // namespace

Place Place::finite(const Int& p) {
    if (!is_prime(p)) throw DomainError(dyngreen::to_string(p) + " is not prime (trivial or composite places are unsupported)");
    return Place(p);
}

Place Place::parse(std::string_view text) {
    if (text == "inf") return archimedean();
    if (text.size() > 2 && text.substr(0, 2) == "p:") {
        const auto digits = text.substr(2);
        if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            throw DomainError("malformed place '" + std::string(text) + "'");
        }
        return finite(Int(std::string(digits), 10));
    }
    throw DomainError("malformed place '" + std::string(text) + "' (expected inf or p:<prime>)");
}

const Int& Place::prime() const {
    if (is_archimedean()) throw DomainError("the archimedean place has no prime");
    return prime_;
}

double Place::log_prime() const { return log_abs(prime()); }

std::string Place::to_string() const { return is_archimedean() ? "inf" : "p:" + dyngreen::to_string(prime_); }

bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), kPrimalityReps) != 0;
}

long valuation(const Int& x, const Int& p) {
    if (x == 0) throw DomainError("valuation of zero");
    Int rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Rat& x, const Int& p) {
    if (x == 0) throw DomainError("valuation of zero");
    return valuation(Int(x.get_num()), p) - valuation(Int(x.get_den()), p);
}

LogAbs log_abs(const Rat& x, const Place& v) {
    if (x == 0) throw DomainError("log |0| is undefined");
    if (v.is_archimedean()) return {log_abs(x), std::nullopt};
    const long e = valuation(x, v.prime());
    return {-static_cast<double>(e) * v.log_prime(), e};
}

int epsilon_K(const Place& v) { return v.is_archimedean() ? 1 : 0; }

std::vector<Int> prime_divisors(const Int& n) {
    if (n == 0) throw DomainError("prime divisors of zero");
    Int rest = abs(n);
    std::vector<Int> out;
    for (unsigned long p = 2; p <= kTrialDivisionBound && rest > 1; p += (p == 2 ? 1 : 2)) {
        if (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
            out.emplace_back(p);
            while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        }
    }
    if (rest > 1) {
        std::vector<Int> big;
        factor_into(rest, big);
        out.insert(out.end(), big.begin(), big.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool good_reduction(const MapPair& f, const Int& p) {
    if (!is_prime(p)) throw DomainError(dyngreen::to_string(p) + " is not prime");
    return valuation(normalize_integer(f).resultant(), p) == 0;
}

std::vector<Int> bad_primes(const MapPair& f) {
    const Rat res = normalize_integer(f).resultant();
    return prime_divisors(Int(res.get_num()));
}

double product_formula_check(const Rat& x) {
    if (x == 0) throw DomainError("product formula needs x != 0");
    double sum = log_abs(x, Place::archimedean()).value;
    auto primes = prime_divisors(Int(x.get_num()));
    const auto den = prime_divisors(Int(x.get_den()));
    primes.insert(primes.end(), den.begin(), den.end());
    for (const auto& p : primes) sum += log_abs(x, Place::finite(p)).value;
    return sum;
}

}  // namespace dyngreen
