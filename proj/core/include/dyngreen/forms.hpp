#pragma once

// Exact arithmetic on homogeneous binary forms and the maps (F1, F2) built
// from them.
//
// Coefficient convention: index i holds the coefficient of x^(d-i) y^i, so
// {1, 0, 1} is x^2 + y^2 and {0, 2, 0} is 2xy.

#include <complex>
#include <cstddef>
#include <vector>

#include "dyngreen/error.hpp"
#include "dyngreen/rational.hpp"

namespace dyngreen {

class BinaryForm {
public:
    /// The zero form of degree 0.
    BinaryForm() : coeffs_{Rat(0)} {}
    explicit BinaryForm(std::vector<Rat> coeffs);

    static BinaryForm zero(int degree);
    /// c * x^a * y^b
    static BinaryForm monomial(int a, int b, const Rat& c = Rat(1));

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Rat>& coeffs() const { return coeffs_; }
    const Rat& operator[](std::size_t i) const { return coeffs_[i]; }
    bool is_zero() const;

    Rat operator()(const Rat& x, const Rat& y) const;
    Int operator()(const Int& x, const Int& y) const;  // integer-coefficient forms only

    BinaryForm pow(int n) const;
    BinaryForm scaled(const Rat& c) const;
    /// Largest numerator/denominator bit length over all coefficients.
    std::size_t max_bits() const;

    friend BinaryForm operator+(const BinaryForm& a, const BinaryForm& b);
    friend BinaryForm operator-(const BinaryForm& a, const BinaryForm& b);
    friend BinaryForm operator*(const BinaryForm& a, const BinaryForm& b);
    friend bool operator==(const BinaryForm& a, const BinaryForm& b) = default;

private:
    std::vector<Rat> coeffs_;
};

/// Nonzero coordinate pair over Q.
struct Lift {
    Rat z0;
    Rat z1;
    bool is_zero() const { return z0 == 0 && z1 == 0; }
    friend bool operator==(const Lift&, const Lift&) = default;
};

/// Nonzero coordinate pair over C, used at the archimedean place.
struct ComplexLift {
    std::complex<double> z0;
    std::complex<double> z1;
};

ComplexLift to_complex(const Lift& z);

Rat wedge(const Lift& z, const Lift& w);
std::complex<double> wedge(const ComplexLift& z, const ComplexLift& w);

/// Homogeneous Horner evaluation of sum c_i x^(d-i) y^i.
template <class S, class C>
S eval_form(const std::vector<C>& coeffs, const S& x, const S& y) {
    S acc = S(coeffs.front());
    S ypow = S(1);
    for (std::size_t i = 1; i < coeffs.size(); ++i) {
        ypow *= y;
        acc = acc * x + S(coeffs[i]) * ypow;
    }
    return acc;
}

std::vector<double> to_doubles(const BinaryForm& f);

/// Resultant of two forms of degrees m and n (not necessarily equal) as the
/// determinant of the (m+n) x (m+n) Sylvester matrix with the rows of `a`
/// first. For univariate polynomials pass coefficients leading-first.
Rat sylvester_resultant(const std::vector<Rat>& a, const std::vector<Rat>& b);

/// Homogeneous resultant of two degree-d forms, d >= 1.
Rat resultant(const BinaryForm& f1, const BinaryForm& f2);

/// A pair of degree-d forms with no common linear factor, d >= 2.
class MapPair {
public:
    /// Throws DomainError on degree mismatch, d < 2, or Res(F1, F2) = 0.
    MapPair(BinaryForm f1, BinaryForm f2);

    int degree() const { return f1_.degree(); }
    const BinaryForm& f1() const { return f1_; }
    const BinaryForm& f2() const { return f2_; }
    const Rat& resultant() const { return resultant_; }

    Lift operator()(const Lift& z) const;
    /// Largest coefficient bit length of F1 and F2.
    std::size_t max_bits() const;

    friend bool operator==(const MapPair& a, const MapPair& b) {
        return a.f1_ == b.f1_ && a.f2_ == b.f2_;
    }

private:
    BinaryForm f1_;
    BinaryForm f2_;
    Rat resultant_;
};

/// Components of F(G(x, y)).
std::pair<BinaryForm, BinaryForm> compose_forms(const BinaryForm& f1, const BinaryForm& f2,
                                                const BinaryForm& g1, const BinaryForm& g2,
                                                const Limits& limits = default_limits());

MapPair compose(const MapPair& f, const MapPair& g, const Limits& limits = default_limits());
MapPair iterate(const MapPair& f, int n, const Limits& limits = default_limits());

/// Components of F^(1), ..., F^(n) without computing their resultants.
std::vector<std::pair<BinaryForm, BinaryForm>> iterate_forms(const MapPair& f, int n,
                                                             const Limits& limits = default_limits());

struct IntegerNormalization {
    MapPair map;  // scale * F, integer coefficients with content 1
    Rat scale;    // positive
};

IntegerNormalization integer_normalization(const MapPair& f);
MapPair normalize_integer(const MapPair& f);

/// Forms of degree d-1 with
///   g11 F1 + g12 F2 = Res(F) x^(2d-1),  g21 F1 + g22 F2 = Res(F) y^(2d-1).
struct CofactorIdentity {
    BinaryForm g11, g12, g21, g22;
};

CofactorIdentity cofactors(const MapPair& f);

/// Checks that both cofactor identities hold exactly for `f`.
bool holds(const CofactorIdentity& c, const MapPair& f);

struct ResultantPower {
    long long exponent = 0;   // e with Res(F^(k)) = sign * Res(F)^e
    int sign = 0;             // +1, -1, or 0 when unverified
    bool verified = false;
};

/// Compares Res(F^(k)) with Res(F)^e, e = d^(k-1) (d^k - 1)/(d - 1), the
/// exponent forced by comparing degrees in the coefficients of F.
ResultantPower resultant_power_check(const MapPair& f, int k, const Limits& limits = default_limits());

}  // namespace dyngreen
