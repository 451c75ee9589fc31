#pragma once

#include <complex>
#include <vector>

namespace dyngreen {

/// All complex roots (with multiplicity) of sum a_i x^(n-i), coefficients
/// leading first, by Aberth-Ehrlich iteration followed by Newton polishing.
/// Leading zeros are dropped. Throws ConvergenceError when the iteration
/// stalls away from a root.
std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> coeffs,
                                                   double rel_tol = 1e-12);

}  // namespace dyngreen
