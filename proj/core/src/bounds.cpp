#include "dyngreen/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dyngreen/polyroots.hpp"
#include "parallel.hpp"

namespace dyngreen {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

// Shared tail of both dsum overloads: heights per point, then pair terms in
// row-major (i < j) order.
template <class LiftT, class WedgeLog>
DiscriminantSum dsum_impl(const LocalHeight& h, std::span<const LiftT> points, double tol, unsigned workers,
                          WedgeLog wedge_log) {
    const std::size_t n = points.size();
    if (n < 2) throw DomainError("discriminant sum needs at least two points");
    std::vector<HeightValue> heights(n);
    detail::parallel_for(n, workers, [&](std::size_t i) { heights[i] = h(points[i], tol); });

    std::vector<double> terms(n * (n - 1) / 2);
    std::vector<std::size_t> row_start(n, 0);
    for (std::size_t i = 1; i < n; ++i) row_start[i] = row_start[i - 1] + (n - i);
    detail::parallel_for(n, workers, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto lw = wedge_log(points[i], points[j]);
            if (!lw) {
                throw DomainError("points " + std::to_string(i) + " and " + std::to_string(j) +
                                  " coincide in P^1; the discriminant sum would be +infinity");
            }
            terms[row_start[i] + (j - i - 1)] = -*lw + heights[i].value + heights[j].value - h.r();
        }
    });
    DiscriminantSum out;
    out.N = static_cast<long long>(n);
    out.value = 2.0 * detail::pairwise_sum(terms.data(), terms.size());
    double err_heights = 0.0;
    double mass = 0.0;
    for (const auto& hv : heights) err_heights += hv.err;
    for (double t : terms) mass += std::abs(t);
    out.err = 2.0 * static_cast<double>(n - 1) * err_heights + 8.0 * kEps * mass * std::log2(terms.size() + 2.0);
    return out;
}

std::optional<double> complex_wedge_log(const ComplexLift& a, const ComplexLift& b) {
    const auto w = wedge(a, b);
    if (w == 0.0) return std::nullopt;
    return std::log(std::abs(w));
}

std::vector<std::complex<double>> to_complex(const std::vector<Rat>& coeffs) {
    std::vector<std::complex<double>> out;
    out.reserve(coeffs.size());
    for (const auto& c : coeffs) out.emplace_back(c.get_d());
    return out;
}

// log|det| of a square complex matrix by LU with partial pivoting; -inf when singular.
double log_abs_det(std::vector<std::vector<std::complex<double>>> a) {
    const std::size_t n = a.size();
    double log_det = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        }
        if (a[piv][k] == 0.0) return -std::numeric_limits<double>::infinity();
        std::swap(a[piv], a[k]);
        log_det += std::log(std::abs(a[k][k]));
        for (std::size_t i = k + 1; i < n; ++i) {
            const auto f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return log_det;
}

bool covers(double observed, double err, double rhs) {
    return observed + err + 1e-9 * (1.0 + std::abs(rhs)) >= rhs;
}

}  // namespace

DiscriminantSum dsum(const LocalHeight& h, std::span<const ComplexLift> points, double tol, unsigned workers) {
    return dsum_impl(h, points, tol, workers, complex_wedge_log);
}

DiscriminantSum dsum(const LocalHeight& h, std::span<const Lift> points, double tol, unsigned workers) {
    const Place v = h.place();
    return dsum_impl(h, points, tol, workers, [&](const Lift& a, const Lift& b) -> std::optional<double> {
        const Rat w = wedge(a, b);
        if (w == 0) return std::nullopt;
        return log_abs(w, v).value;
    });
}

double mahler_measure(const std::vector<std::complex<double>>& coeffs) {
    std::size_t lead = 0;
    while (lead < coeffs.size() && coeffs[lead] == 0.0) ++lead;
    if (lead == coeffs.size()) throw DomainError("Mahler measure of the zero polynomial");
    double m = std::abs(coeffs[lead]);
    for (const auto& root : polynomial_roots(coeffs)) m *= std::max(1.0, std::abs(root));
    return m;
}

double mahler_measure(const std::vector<Rat>& coeffs) { return mahler_measure(to_complex(coeffs)); }

Rat discriminant(const std::vector<Rat>& coeffs) {
    if (coeffs.size() < 3) throw DomainError("discriminant needs degree at least 2");
    if (coeffs[0] == 0) throw DomainError("leading coefficient must be nonzero");
    const std::size_t n = coeffs.size() - 1;
    std::vector<Rat> deriv;
    for (std::size_t i = 0; i < n; ++i) deriv.push_back(coeffs[i] * static_cast<long>(n - i));
    Rat disc = sylvester_resultant(coeffs, deriv) / coeffs[0];
    if ((n * (n - 1) / 2) % 2 == 1) disc = -disc;
    return disc;
}

std::complex<double> discriminant(const std::vector<std::complex<double>>& coeffs) {
    if (coeffs.size() < 3 || coeffs[0] == 0.0) throw DomainError("discriminant needs degree at least 2");
    const auto roots = polynomial_roots(coeffs);
    const std::size_t n = roots.size();
    std::complex<double> out = std::pow(coeffs[0], static_cast<double>(2 * n - 2));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) out *= (roots[i] - roots[j]) * (roots[i] - roots[j]);
    }
    return out;
}

MahlerInequality mahler_inequality_check(const std::vector<Rat>& coeffs) {
    if (coeffs.size() < 3) throw DomainError("Mahler's inequality needs degree at least 2");
    const double n = static_cast<double>(coeffs.size() - 1);
    MahlerInequality out;
    out.bound = std::pow(n, n) * std::pow(mahler_measure(coeffs), 2.0 * n - 2.0);
    out.abs_disc = Rat(abs(discriminant(coeffs))).get_d();
    out.margin = out.bound - out.abs_disc;
    out.relative = out.margin / out.bound;
    return out;
}

double naive_green(const RiemannPoint& z, const RiemannPoint& w) {
    if (z.infinity && w.infinity) throw DomainError("naive_green: z = w");
    if (w.infinity) return log_plus(std::abs(z.z));
    if (z.infinity) return log_plus(std::abs(w.z));
    if (z.z == w.z) throw DomainError("naive_green: z = w");
    return -std::log(std::abs(z.z - w.z)) + log_plus(std::abs(z.z)) + log_plus(std::abs(w.z));
}

HadamardResult hadamard_check(const Matrix<double>& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<std::complex<double>>> a(n);
    HadamardResult out;
    out.product_norms = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw DomainError("Hadamard check needs a square matrix");
        for (double x : m[i]) a[i].emplace_back(x);
    }
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += m[i][j] * m[i][j];
        out.product_norms *= std::sqrt(s);
    }
    out.abs_det = std::exp(log_abs_det(std::move(a)));
    out.margin = out.product_norms - out.abs_det;
    return out;
}

HadamardResult hadamard_check(const Matrix<Rat>& m, const Place& v) {
    const std::size_t n = m.size();
    for (const auto& row : m) {
        if (row.size() != n) throw DomainError("Hadamard check needs a square matrix");
    }
    const Rat det = determinant(m);
    HadamardResult out;
    out.abs_det = det == 0 ? 0.0 : std::exp(log_abs(det, v).value);
    if (v.is_archimedean()) {
        double log_prod = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            Rat s(0);
            for (std::size_t i = 0; i < n; ++i) s += m[i][j] * m[i][j];
            log_prod += s == 0 ? -std::numeric_limits<double>::infinity() : 0.5 * log_abs(s);
        }
        out.product_norms = std::exp(log_prod);
        out.margin = out.product_norms - out.abs_det;
        return out;
    }
    const Int& p = v.prime();
    long sum_min = 0;
    bool zero_column = false;
    for (std::size_t j = 0; j < n; ++j) {
        long best = std::numeric_limits<long>::max();
        for (std::size_t i = 0; i < n; ++i) {
            if (m[i][j] != 0) best = std::min(best, valuation(m[i][j], p));
        }
        if (best == std::numeric_limits<long>::max()) zero_column = true;
        else sum_min += best;
    }
    out.product_norms = zero_column ? 0.0 : std::exp(-static_cast<double>(sum_min) * v.log_prime());
    out.margin = out.product_norms - out.abs_det;
    if (det == 0) out.valuation_margin = std::numeric_limits<long>::max();
    else out.valuation_margin = valuation(det, p) - sum_min;
    return out;
}

VandermondeResult vandermonde_check(std::span<const ComplexLift> lifts) {
    const std::size_t n = lifts.size();
    if (n < 2) throw DomainError("Vandermonde check needs at least two lifts");
    VandermondeResult out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto w = wedge(lifts[i], lifts[j]);
            if (w == 0.0) throw DomainError("Vandermonde check: repeated projective point");
            out.log_wedge_product += std::log(std::abs(w));
        }
    }
    std::vector<std::vector<std::complex<double>>> s(n, std::vector<std::complex<double>>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            s[i][j] = std::pow(lifts[i].z0, static_cast<int>(n - 1 - j)) * std::pow(lifts[i].z1, static_cast<int>(j));
        }
    }
    out.log_det_squared = 2.0 * log_abs_det(std::move(s));
    out.relative_residual = std::abs(std::expm1(out.log_wedge_product - out.log_det_squared));
    return out;
}

double technical_rhs(const LocalHeight& h, const SigmaIndex& idx, double R_up) {
    const double n = static_cast<double>(idx.N);
    const double a = static_cast<double>(alpha(idx, h.degree()));
    const double eps = epsilon_K(h.place());
    const double r = h.r();
    return r * n * n - eps * n * std::log(n) - 2.0 * std::log(R_up) * a * n - r * (1.0 + a) * n;
}

double technical_rhs(const MapPair& f, const Place& v, const SigmaIndex& idx, double R_up) {
    return technical_rhs(LocalHeight(f, v), idx, R_up);
}

double corollary_rhs(const LocalHeight& h, const SigmaIndex& idx, double R_up) {
    const double n = static_cast<double>(idx.N);
    const double a = static_cast<double>(alpha(idx, h.degree()));
    const double eps = epsilon_K(h.place());
    return -eps * n * std::log(n) - (2.0 * std::log(R_up) + h.r()) * a * n;
}

double corollary_rhs(const MapPair& f, const Place& v, const SigmaIndex& idx, double R_up) {
    return corollary_rhs(LocalHeight(f, v), idx, R_up);
}

EffectiveConstant effective_C(const LocalHeight& h) {
    EffectiveConstant out;
    out.degree = h.degree();
    out.epsilon_K = epsilon_K(h.place());
    out.log_R_up = h.escape_bound().log_R_up;
    out.r = h.r();
    const double d = out.degree;
    const double eps = out.epsilon_K;
    const double q = std::max(0.0, 2.0 * out.log_R_up + out.r);
    out.C_prime = eps + q * (d - 1.0) * (1.0 / std::log(d) + 2.0 / std::log(2.0 * d));
    const double pointwise = std::max(0.0, eps * std::log(2.0) + 2.0 * out.log_R_up + out.r);
    out.C_small = pointwise * (2.0 * d - 2.0) / std::log(2.0 * d - 1.0);
    out.C = std::max(2.0 * out.C_prime, out.C_small);
    return out;
}

EffectiveConstant effective_C(const MapPair& f, const Place& v) { return effective_C(LocalHeight(f, v)); }

bool BoundReport::corollary_ok() const {
    return !rhs_corollary || covers(observed_sum, observed_err, *rhs_corollary);
}

bool BoundReport::technical_ok() const {
    return !rhs_technical || !observed_wedge_sum || covers(*observed_wedge_sum, observed_err, *rhs_technical);
}

bool BoundReport::effective_ok() const { return covers(observed_sum, observed_err, rhs_effective); }

namespace {

BoundReport report_skeleton(const LocalHeight& h, long long n, const DiscriminantSum& s) {
    BoundReport out;
    out.N = n;
    out.place = h.place();
    out.r_F = h.r();
    out.R_up = h.escape_bound().R_up;
    out.epsilon_K = epsilon_K(h.place());
    const auto c = effective_C(h);
    out.C_effective = c.C;
    const double nn = static_cast<double>(n);
    out.rhs_effective = -c.C * nn * std::log(nn);
    out.observed_sum = s.value;
    out.observed_err = s.err;
    if (const auto idx = sigma_decompose(n, h.degree())) {
        out.alpha = alpha(*idx, h.degree());
        out.rhs_technical = technical_rhs(h, *idx, out.R_up);
        out.rhs_corollary = corollary_rhs(h, *idx, out.R_up);
    }
    return out;
}

}  // namespace

BoundReport bound_report(const LocalHeight& h, std::span<const ComplexLift> points, double tol, unsigned workers) {
    const auto s = dsum(h, points, tol, workers);
    auto out = report_skeleton(h, s.N, s);
    // Lifts rescaled to Hhat = 0 lie in K_F, and for them
    // sum -log|z_i ^ z_j| = D_phi + N(N-1) r(F).
    const double n = static_cast<double>(s.N);
    out.observed_wedge_sum = s.value + n * (n - 1.0) * h.r();
    return out;
}

BoundReport bound_report(const LocalHeight& h, std::span<const Lift> points, double tol, unsigned workers) {
    const auto s = dsum(h, points, tol, workers);
    auto out = report_skeleton(h, s.N, s);
    const double n = static_cast<double>(s.N);
    if (h.place().is_archimedean()) {
        out.observed_wedge_sum = s.value + n * (n - 1.0) * h.r();
        return out;
    }
    // Window-normalized lifts p^(m_i) z_i; the wedge sum is exact in valuations.
    const Int& p = h.place().prime();
    std::vector<long> shift(points.size());
    detail::parallel_for(points.size(), workers,
                         [&](std::size_t i) { shift[i] = normalize_lift(h, points[i], tol).shift; });
    long total = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            total += valuation(wedge(points[i], points[j]), p) + shift[i] + shift[j];
        }
    }
    out.observed_wedge_sum = 2.0 * static_cast<double>(total) * h.place().log_prime();
    return out;
}

}  // namespace dyngreen
