#include "dyngreen/polyroots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dyngreen/error.hpp"

namespace dyngreen {

namespace {

using C = std::complex<double>;

struct Eval {
    C p;
    C dp;
    double scale;  // sum |a_i| |z|^(n-i), for residual tests
};

Eval horner(const std::vector<C>& a, C z) {
    C p = a[0];
    C dp = 0.0;
    double scale = std::abs(a[0]);
    const double az = std::abs(z);
    for (std::size_t i = 1; i < a.size(); ++i) {
        dp = dp * z + p;
        p = p * z + a[i];
        scale = scale * az + std::abs(a[i]);
    }
    return {p, dp, scale};
}

}  // namespace

std::vector<C> polynomial_roots(std::vector<C> coeffs, double rel_tol) {
    while (!coeffs.empty() && coeffs.front() == 0.0) coeffs.erase(coeffs.begin());
    if (coeffs.empty()) throw DomainError("roots of the zero polynomial");
    std::vector<C> roots;
    while (coeffs.size() > 1 && coeffs.back() == 0.0) {
        coeffs.pop_back();
        roots.emplace_back(0.0);
    }
    const std::size_t n = coeffs.size() - 1;
    if (n == 0) return roots;
    if (n == 1) {
        roots.push_back(-coeffs[1] / coeffs[0]);
        return roots;
    }

    // Initial guesses on a circle whose radius is the geometric mean of the
    // root moduli, rotated off the real axis.
    const double radius = std::pow(std::abs(coeffs[n] / coeffs[0]), 1.0 / static_cast<double>(n));
    std::vector<C> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
        z[k] = std::polar(radius, theta);
    }

    constexpr int kMaxIter = 2000;
    bool converged = false;
    for (int iter = 0; iter < kMaxIter && !converged; ++iter) {
        converged = true;
        for (std::size_t k = 0; k < n; ++k) {
            const auto e = horner(coeffs, z[k]);
            if (e.p == 0.0) continue;
            const C ratio = e.p / e.dp;
            C sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != k) sum += 1.0 / (z[k] - z[j]);
            }
            const C step = ratio / (1.0 - ratio * sum);
            z[k] -= step;
            if (std::abs(step) > rel_tol * std::max(1.0, std::abs(z[k]))) converged = false;
        }
    }
    for (auto& r : z) {
        for (int i = 0; i < 3; ++i) {
            const auto e = horner(coeffs, r);
            if (e.dp == 0.0 || e.p == 0.0) break;
            const C next = r - e.p / e.dp;
            if (std::abs(horner(coeffs, next).p) >= std::abs(e.p)) break;
            r = next;
        }
    }
    if (!converged) {
        // Multiple roots converge only linearly; accept small residuals.
        for (const auto& r : z) {
            const auto e = horner(coeffs, r);
            if (std::abs(e.p) > 1e-6 * e.scale) throw ConvergenceError("Aberth iteration did not converge");
        }
    }
    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

}  // namespace dyngreen
