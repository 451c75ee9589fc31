#pragma once

// Discriminant sums D_phi = sum_{i != j} g_phi(z_i, z_j), the classical
// Mahler-measure and discriminant inequalities, Hadamard and Vandermonde
// utilities, and the explicit lower bounds for D_phi.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "dyngreen/basis.hpp"
#include "dyngreen/dynheight.hpp"

namespace dyngreen {

struct DiscriminantSum {
    double value = 0.0;
    double err = 0.0;
    long long N = 0;
};

/// Throws DomainError on fewer than two points or on two points with the
/// same image in P^1. Pair terms are reduced in a fixed pairwise tree, so the
/// result does not depend on `workers`.
DiscriminantSum dsum(const LocalHeight& h, std::span<const ComplexLift> points, double tol = kDefaultTol,
                     unsigned workers = 1);
DiscriminantSum dsum(const LocalHeight& h, std::span<const Lift> points, double tol = kDefaultTol,
                     unsigned workers = 1);

/// |a_0| prod max(1, |alpha_j|); coefficients leading first.
double mahler_measure(const std::vector<std::complex<double>>& coeffs);
double mahler_measure(const std::vector<Rat>& coeffs);

/// (-1)^(N(N-1)/2) Res(f, f') / a_0, which equals a_0^(2N-2) prod_{i<j} (alpha_i - alpha_j)^2.
Rat discriminant(const std::vector<Rat>& coeffs);
/// Root-product evaluation for floating inputs.
std::complex<double> discriminant(const std::vector<std::complex<double>>& coeffs);

struct MahlerInequality {
    double bound = 0.0;     // N^N M(f)^(2N-2)
    double abs_disc = 0.0;  // |Disc(f)|
    double margin = 0.0;    // bound - abs_disc
    double relative = 0.0;  // margin / bound
};

MahlerInequality mahler_inequality_check(const std::vector<Rat>& coeffs);

/// A point of P^1(C): either a finite complex number or infinity.
struct RiemannPoint {
    std::complex<double> z;
    bool infinity = false;
    static RiemannPoint at_infinity() { return {0.0, true}; }
};

/// -log|z-w| + log+|z| + log+|w|, with log+|z| alone when w = infinity.
double naive_green(const RiemannPoint& z, const RiemannPoint& w);

struct HadamardResult {
    double product_norms = 0.0;          // prod ||h_i|| over the columns
    double abs_det = 0.0;
    double margin = 0.0;                 // product_norms - abs_det
    std::optional<long> valuation_margin;  // finite places: v_p(det) - sum_i min_j v_p(h_ij)
};

/// L^2 column norms.
HadamardResult hadamard_check(const Matrix<double>& m);
/// Exact determinant; L^2 norms at the archimedean place, sup norms at finite places.
HadamardResult hadamard_check(const Matrix<Rat>& m, const Place& v);

struct VandermondeResult {
    double log_wedge_product = 0.0;  // sum_{i != j} log|x_i y_j - x_j y_i|
    double log_det_squared = 0.0;    // 2 log|det S|
    double relative_residual = 0.0;
};

/// S_ij = x_i^(N-1-j) y_i^j. Throws DomainError on repeated projective points.
VandermondeResult vandermonde_check(std::span<const ComplexLift> lifts);

/// r N^2 - eps N log N - 2 log(R_up) alpha N - r (1 + alpha) N.
double technical_rhs(const LocalHeight& h, const SigmaIndex& idx, double R_up);
double technical_rhs(const MapPair& f, const Place& v, const SigmaIndex& idx, double R_up);

/// -eps N log N - (2 log R_up + r) alpha N.
double corollary_rhs(const LocalHeight& h, const SigmaIndex& idx, double R_up);
double corollary_rhs(const MapPair& f, const Place& v, const SigmaIndex& idx, double R_up);

/// A constant C with D_phi >= -C N log N for every N >= 2 distinct points.
///
/// With Q = max(0, 2 log R_up + r) and alpha <= (d-1)(log_d N + 2), every
/// N' in Sigma satisfies D_phi >= -C' N' log N' for
///   C' = eps + Q (d-1) (1/log d + 2/log(2d)).
/// Monotonicity of the normalized infima and (N-1)/2 <= N'-1 give 2C' for
/// N >= 2d. Below 2d the pointwise bound g >= -(eps log 2 + 2 log R_up + r)
/// is used.
struct EffectiveConstant {
    double C = 0.0;
    double C_prime = 0.0;
    double C_small = 0.0;
    double log_R_up = 0.0;
    double r = 0.0;
    int epsilon_K = 0;
    int degree = 0;
};

EffectiveConstant effective_C(const LocalHeight& h);
EffectiveConstant effective_C(const MapPair& f, const Place& v);

struct BoundReport {
    long long N = 0;
    Place place = Place::archimedean();
    double r_F = 0.0;
    double R_up = 0.0;
    long long alpha = 0;  // 0 when N is not in Sigma
    int epsilon_K = 0;
    std::optional<double> rhs_technical;
    std::optional<double> rhs_corollary;
    double C_effective = 0.0;
    double rhs_effective = 0.0;  // -C N log N
    double observed_sum = 0.0;
    double observed_err = 0.0;
    std::optional<double> observed_wedge_sum;  // sum -log|z_i ^ z_j| on normalized lifts

    bool corollary_ok() const;
    bool technical_ok() const;
    bool effective_ok() const;
    bool all_ok() const { return corollary_ok() && technical_ok() && effective_ok(); }
};

BoundReport bound_report(const LocalHeight& h, std::span<const ComplexLift> points, double tol = kDefaultTol,
                         unsigned workers = 1);
BoundReport bound_report(const LocalHeight& h, std::span<const Lift> points, double tol = kDefaultTol,
                         unsigned workers = 1);

}  // namespace dyngreen
