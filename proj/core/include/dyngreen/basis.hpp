#pragma once

// The index set Sigma = { t d^k : 2 <= t <= 2d-1, k >= 1 }, the special basis
// H(m) of degree-m forms built from iterates of F, and the change-of-basis
// determinant det(A) = +-Res(F)^r.

#include <optional>
#include <vector>

#include "dyngreen/forms.hpp"

namespace dyngreen {

struct SigmaIndex {
    long long N = 0;
    int t = 0;
    int k = 0;
    friend bool operator==(const SigmaIndex&, const SigmaIndex&) = default;
};

/// Builds N = t d^k; throws DomainError unless 2 <= t <= 2d-1 and k >= 1.
SigmaIndex make_sigma(int t, int k, int d);

/// All (t, k) witnesses of N in Sigma. For N in Sigma there is exactly one:
/// t d^k = t' d^k' with k' > k forces t >= 2d.
std::vector<SigmaIndex> sigma_decompositions(long long N, int d);

/// The witness with the largest k, or nullopt when N is not in Sigma.
std::optional<SigmaIndex> sigma_decompose(long long N, int d);

/// Largest element of Sigma that is <= N. Requires N >= 2d.
long long nearest_sigma(long long N, int d);

/// alpha = t - 1 + (d - 1) k.
long long alpha(const SigmaIndex& idx, int d);

/// r = N^2 / (2d(d-1)) - N (t + k(d-1)) / (2d(d-1)).
Rat prop_exponent(const SigmaIndex& idx, int d);

struct BasisFamily {
    int m = 0;                                // = N - 1
    std::vector<BinaryForm> members;          // |members| = N
    std::vector<std::vector<int>> exponents;  // (a_0, ..., a_k); b_j is implied
};

/// Products x^a0 y^b0 prod_j (F1^(j))^aj (F2^(j))^bj with a_j + b_j = d-1 for
/// j < k and a_k + b_k = t-1, in lexicographically decreasing order of
/// (a_0, ..., a_k).
BasisFamily build_H(const MapPair& f, const SigmaIndex& idx, const Limits& limits = default_limits());
/// Same construction for an arbitrary pair of degree-d forms (Res may vanish).
BasisFamily build_H(const BinaryForm& f1, const BinaryForm& f2, const SigmaIndex& idx,
                    const Limits& limits = default_limits());

/// Column j holds the coefficients of H_j in the basis x^m, x^(m-1) y, ..., y^m.
Matrix<Rat> change_matrix(const MapPair& f, const SigmaIndex& idx, const Limits& limits = default_limits());

Rat change_matrix_det(const MapPair& f, const SigmaIndex& idx, const Limits& limits = default_limits());
Matrix<Rat> change_matrix(const BinaryForm& f1, const BinaryForm& f2, const SigmaIndex& idx,
                          const Limits& limits = default_limits());
Rat change_matrix_det(const BinaryForm& f1, const BinaryForm& f2, const SigmaIndex& idx,
                      const Limits& limits = default_limits());

struct PropositionCheck {
    SigmaIndex idx;
    Rat r;
    Rat det;
    Rat res_power;  // Res(F)^r
    bool verified = false;  // |det| == |Res(F)|^r exactly
};

PropositionCheck verify_proposition(const MapPair& f, const SigmaIndex& idx, const Limits& limits = default_limits());

}  // namespace dyngreen
