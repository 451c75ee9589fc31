#pragma once

// Canonical heights over Q as sums of local heights, the product-formula
// identity for Green's functions, small-point censuses, preperiodicity
// detection and the Lattes map of an elliptic curve.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dyngreen/dynheight.hpp"

namespace dyngreen {

/// [a:b] in P^1(Q) with coprime integer coordinates, b > 0 or [1:0].
class RationalPoint {
public:
    RationalPoint(Int a, Int b);
    /// The class of a nonzero rational lift.
    static RationalPoint from_lift(const Lift& z);
    /// "a:b" with rational a, b (not both zero), or a single rational x for [x:1].
    static RationalPoint parse(std::string_view text);

    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    Lift lift() const { return {Rat(a_), Rat(b_)}; }
    /// log max(|a|, |b|)
    double naive_height() const;
    std::string to_string() const;

    friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
    friend bool operator<(const RationalPoint& x, const RationalPoint& y) {
        return x.b_ != y.b_ ? x.b_ < y.b_ : x.a_ < y.a_;
    }

private:
    Int a_;
    Int b_;
};

/// Per-map data for canonical heights: the integer normalization of F, its
/// bad primes and one LocalHeight per contributing place.
class GlobalHeight {
public:
    explicit GlobalHeight(const MapPair& f);

    const MapPair& integral_map() const { return integral_; }
    const std::vector<Int>& bad_primes() const { return bad_primes_; }
    const LocalHeight& local(const Place& v) const;

    /// hhat(P) = Hhat_inf(a, b) + sum over bad p of Hhat_p(a, b); good primes
    /// contribute log max(|a|_p, |b|_p) = 0 for coprime a, b.
    HeightValue operator()(const RationalPoint& point, double tol = kDefaultTol) const;

    /// Bounds on h(phi(Q)) - d h(Q) for the naive height h:
    /// -lower_gap <= h(phi Q) - d h(Q) <= upper_gap.
    double lower_gap() const { return lower_gap_; }
    double upper_gap() const { return upper_gap_; }

private:
    MapPair integral_;
    std::vector<Int> bad_primes_;
    std::vector<LocalHeight> locals_;  // archimedean first, then bad primes
    double lower_gap_ = 0.0;
    double upper_gap_ = 0.0;
};

HeightValue canonical_height(const MapPair& f, const RationalPoint& point, double tol = kDefaultTol);

/// The image of P under phi, with coordinates reduced by their gcd.
RationalPoint apply(const MapPair& integral_map, const RationalPoint& point);

struct OrbitEstimate {
    double value = 0.0;
    double err = 0.0;
    int steps = 0;
    std::size_t bits = 0;  // coordinate size at the last step (estimated once inexact)
    bool periodic = false; // the orbit revisited a point, so hhat = 0 exactly
};

/// lim h(phi^n P) / d^n along the orbit with coordinates reduced by their gcd.
/// The orbit is iterated exactly until the coordinates exceed
/// limits.max_orbit_bits; after that the gcd (a divisor of Res) is read off
/// exact residues modulo powers of Res while the size of the coordinates is
/// carried by scaled MPFR values. Stops once the truncation error is below
/// target_err or after n_max steps.
OrbitEstimate canonical_height_orbit_oracle(const MapPair& f, const RationalPoint& point, int n_max,
                                            double target_err = 1e-7, const Limits& limits = default_limits());

struct LocalGreenTerm {
    Place place = Place::archimedean();
    double value = 0.0;
    double err = 0.0;
};

struct GreenSumCheck {
    double green_sum = 0.0;    // sum over places of g_v(z, w)
    double height_sum = 0.0;   // hhat(z) + hhat(w)
    double residual = 0.0;
    double err = 0.0;
    std::vector<LocalGreenTerm> terms;
};

/// Places outside {inf} U bad primes U primes dividing z ^ w contribute 0
/// for coprime lifts of an integrally normalized map.
GreenSumCheck green_sum_identity_check(const MapPair& f, const RationalPoint& z, const RationalPoint& w,
                                       double tol = kDefaultTol);

enum class Preperiodicity { preperiodic, wandering, inconclusive };

struct PreperiodicResult {
    Preperiodicity status = Preperiodicity::inconclusive;
    int steps = 0;
    std::optional<int> preperiod;
    std::optional<int> period;
};

/// Exact orbit search for a revisit. The orbit is declared wandering once a
/// point exceeds the naive height lower_gap / (d - 1), since such points have
/// hhat > 0.
PreperiodicResult preperiodic_detect(const MapPair& f, const RationalPoint& point, int max_steps = 64,
                                     const Limits& limits = default_limits());

std::string to_string(Preperiodicity p);

struct CensusEntry {
    RationalPoint point;
    double hhat = 0.0;
    double err = 0.0;
    Preperiodicity preperiodic = Preperiodicity::inconclusive;
};

struct CensusResult {
    double B = 0.0;
    double theta = 0.0;
    long box = 0;               // coordinates bounded by floor(e^B)
    std::size_t enumerated = 0;
    std::vector<CensusEntry> witnesses;  // hhat <= theta, sorted by (b, a)
    std::optional<double> min_positive_height;
    std::optional<RationalPoint> min_positive_point;

    std::size_t count() const { return witnesses.size(); }
};

CensusResult small_point_census(const MapPair& f, double B, double theta, double tol = kDefaultTol,
                                unsigned workers = 1, const Limits& limits = default_limits());

/// x-coordinate doubling map on y^2 = x^3 + a x + b:
///   F1 = x^4 - 2a x^2 y^2 - 8b x y^3 + a^2 y^4,  F2 = 4y(x^3 + a x y^2 + b y^3).
/// Throws DomainError when 4a^3 + 27b^2 = 0.
MapPair lattes_from_curve(const Rat& a, const Rat& b);

}  // namespace dyngreen
