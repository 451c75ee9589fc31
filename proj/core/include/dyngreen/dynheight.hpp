#pragma once

// Homogeneous local dynamical heights
//
//   Hhat_F(z) = lim d^-n log ||F^n(z)||,   ||z|| = max(|z0|_v, |z1|_v),
//
// the Arakelov-Green's function g(z, w) = -log|z ^ w| + Hhat(z) + Hhat(w) - r(F)
// with r(F) = log|Res(F)| / (d(d-1)), and certified escape radii.
//
// Every height carries an error radius `err`: the true value lies in
// [value - err, value + err]. The radius comes from the cofactor identities
// of F, which bound log||F(u)|| on the unit sphere from both sides:
//
//   log(|Res|_v / (2^eps C_g)) <= log||F(u)|| <= log U,
//
// so truncating the telescoping series after n terms leaves a remainder in an
// interval of width (log U - log L) / (d^n (d-1)).

#include <optional>
#include <vector>

#include "dyngreen/forms.hpp"
#include "dyngreen/places.hpp"

namespace dyngreen {

inline constexpr double kDefaultTol = 1e-10;

struct HeightValue {
    double value = 0.0;
    double err = 0.0;
    Place place = Place::archimedean();
    int iterations = 0;
};

struct GreenValue {
    double value = 0.0;
    double err = 0.0;
    bool infinite = false;  // the two points coincide in P^1
};

struct EscapeBound {
    double R_up = 1.0;      // K_F lies in {||z||_v <= R_up}
    double log_R_up = 0.0;
    double C_g = 1.0;       // sup-sphere bound for the cofactor forms
};

enum class Membership { in, out, boundary };

struct MembershipResult {
    Membership kind = Membership::boundary;
    HeightValue height;
};

struct NormalizedLift {
    Lift lift;            // p^shift * z
    HeightValue height;   // of the returned lift, in (-log p, 0] up to err
    long shift = 0;
    bool window_deviation = false;  // Hhat could not be brought to 0 exactly
};

/// Precomputed per-(F, v) data for repeated height evaluations.
class LocalHeight {
public:
    LocalHeight(const MapPair& f, const Place& v);

    const MapPair& map() const { return map_; }
    const Place& place() const { return place_; }
    int degree() const { return map_.degree(); }

    /// Hhat_F(z) with err <= tol whenever double rounding permits.
    /// precision_bits > 53 selects an MPFR evaluation at the archimedean place.
    HeightValue operator()(const Lift& z, double tol = kDefaultTol, unsigned precision_bits = 53) const;
    /// Archimedean place only.
    HeightValue operator()(const ComplexLift& z, double tol = kDefaultTol) const;

    double r() const { return r_; }
    const EscapeBound& escape_bound() const { return escape_; }

    /// Bounds on log||F(u)|| over the unit sup-sphere.
    double log_upper() const { return log_upper_; }
    double log_lower() const { return log_lower_; }

    /// Finite places: maximal valuation jump e = v_p(Res) - v_p(C_g) of the
    /// integer normalization (0 means Hhat is exact).
    long valuation_jump() const { return jump_; }

private:
    HeightValue arch_complex(const ComplexLift& z, double tol) const;
    HeightValue arch_rational(const Lift& z, double tol, unsigned precision_bits) const;
    HeightValue arch_mpfr(const Lift& z, double tol, unsigned precision_bits) const;
    HeightValue finite_rational(const Lift& z, double tol) const;
    int steps_for(double half_width, double tol) const;

    MapPair map_;
    Place place_;
    double r_ = 0.0;
    EscapeBound escape_;
    double log_upper_ = 0.0;
    double log_lower_ = 0.0;
    std::vector<double> f1d_, f2d_;
    std::vector<long double> f1l_, f2l_;
    // finite places
    std::optional<MapPair> integral_;
    long scale_valuation_ = 0;
    long jump_ = 0;
};

HeightValue hhat(const MapPair& f, const Lift& z, const Place& v, double tol = kDefaultTol,
                 unsigned precision_bits = 53);
HeightValue hhat(const MapPair& f, const ComplexLift& z, double tol = kDefaultTol);

/// log|Res(F)|_v / (d(d-1)).
double r_of(const MapPair& f, const Place& v);

GreenValue green(const LocalHeight& h, const Lift& z, const Lift& w, double tol = kDefaultTol);
GreenValue green(const LocalHeight& h, const ComplexLift& z, const ComplexLift& w, double tol = kDefaultTol);
GreenValue green(const MapPair& f, const Lift& z, const Lift& w, const Place& v, double tol = kDefaultTol);
GreenValue green(const MapPair& f, const ComplexLift& z, const ComplexLift& w, double tol = kDefaultTol);

MembershipResult filled_julia_member(const MapPair& f, const Lift& z, const Place& v, double tol = kDefaultTol);
MembershipResult filled_julia_member(const MapPair& f, const ComplexLift& z, double tol = kDefaultTol);

/// Archimedean: z scaled by exp(-Hhat(z)) so that Hhat = 0 up to tol.
ComplexLift normalize_lift(const LocalHeight& h, const ComplexLift& z, double tol = kDefaultTol);
ComplexLift normalize_lift(const MapPair& f, const ComplexLift& z, double tol = kDefaultTol);
/// Finite place: z scaled by a power of p so that Hhat lies in (-log p, 0].
NormalizedLift normalize_lift(const LocalHeight& h, const Lift& z, double tol = kDefaultTol);
NormalizedLift normalize_lift(const MapPair& f, const Lift& z, const Place& v, double tol = kDefaultTol);

/// Archimedean: R_up = (2^(eps+1) C_g / |Res|)^(1/(d-1)).
/// Finite:      R_up = (C_g / |Res|_p)^(1/(d-1)), equal to 1 under good reduction.
EscapeBound escape_radius_bound(const MapPair& f, const Place& v);

}  // namespace dyngreen
