#pragma once

// Homogeneous transfinite diameter of the filled Julia set K_F:
//
//   d0_n(K_F) = sup over z_1..z_n in K_F of (prod_{i != j} |z_i ^ z_j|)^(1/(n(n-1))),
//
// estimated from below by exchange search over configurations of lifts
// normalized to the boundary Hhat_F = 0 (or, at finite places, into the
// window (-log p, 0] reachable with powers of p).

#include <cstdint>
#include <vector>

#include "dyngreen/bounds.hpp"

namespace dyngreen {

struct Configuration {
    Place place = Place::archimedean();
    std::vector<ComplexLift> complex_lifts;  // archimedean place
    std::vector<Lift> rational_lifts;        // finite places, normalized
    /// (1/(n(n-1))) sum_{i != j} log|z_i ^ z_j|_v
    double objective = 0.0;
    /// Largest height error among the lifts (archimedean normalization).
    double height_err = 0.0;

    std::size_t size() const { return place.is_archimedean() ? complex_lifts.size() : rational_lifts.size(); }
};

struct TfdOptions {
    long iterations = 20000;  // proposals per restart
    unsigned restarts = 4;
    unsigned workers = 1;
    double tol = 1e-12;
};

struct D0nEstimate {
    Configuration config;
    double estimate = 0.0;  // exp(objective)
    long iterations = 0;    // total proposals over all restarts
    std::uint64_t best_seed = 0;
};

/// Deterministic in (f, v, n, seed, options) and independent of the worker
/// count. Throws ConvergenceError when no valid configuration is found.
D0nEstimate d0n_estimate(const MapPair& f, const Place& v, int n, std::uint64_t seed,
                         const TfdOptions& options = {});

/// |Res(F)|_v^(-1/(d(d-1))) = exp(-r(F)).
double tfd_bound(const MapPair& f, const Place& v);

/// Checks every emitted configuration: pairwise distinct and Hhat within
/// tolerance of the normalization window.
bool validate_configuration(const LocalHeight& h, const Configuration& c, double tol);

struct TfdRow {
    int n = 0;
    double estimate = 0.0;
    double bound = 0.0;      // tfd_bound
    double slack = 0.0;      // exp(C log n / (n-1)) - 1
    long iterations = 0;
    double objective = 0.0;
    double chain_rhs = 0.0;  // C log n / (n-1) - r(F)
    bool chain_ok = false;   // objective <= chain_rhs
    bool upper_ok = false;   // estimate <= (1 + slack) bound + 1e-6
    bool valid = false;      // configuration re-validated
};

struct TfdReport {
    Place place = Place::archimedean();
    double C = 0.0;
    std::vector<TfdRow> rows;
    bool all_ok() const;
};

TfdReport verify_tfd_inequality(const MapPair& f, const Place& v, const std::vector<int>& n_list, std::uint64_t seed,
                                const TfdOptions& options = {});

}  // namespace dyngreen
