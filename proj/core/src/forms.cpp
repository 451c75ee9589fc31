#include "dyngreen/forms.hpp"

#include <string>
#include <utility>

namespace dyngreen {

namespace {

void check_bits(const BinaryForm& f, const Limits& limits) {
    if (f.max_bits() > limits.max_coeff_bits) {
        throw ResourceError("coefficient size " + std::to_string(f.max_bits()) + " bits exceeds limit of " +
                            std::to_string(limits.max_coeff_bits));
    }
}

// F(g1, g2) for a single form F.
BinaryForm substitute(const BinaryForm& f, const BinaryForm& g1, const BinaryForm& g2) {
    BinaryForm acc({f[0]});
    BinaryForm g2pow = BinaryForm::monomial(0, 0);
    for (int i = 1; i <= f.degree(); ++i) {
        g2pow = g2pow * g2;
        acc = acc * g1 + g2pow.scaled(f[static_cast<std::size_t>(i)]);
    }
    return acc;
}

}  // namespace

BinaryForm::BinaryForm(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw DomainError("binary form needs at least one coefficient");
}

BinaryForm BinaryForm::zero(int degree) {
    if (degree < 0) throw DomainError("negative degree");
    return BinaryForm(std::vector<Rat>(static_cast<std::size_t>(degree) + 1, Rat(0)));
}

BinaryForm BinaryForm::monomial(int a, int b, const Rat& c) {
    if (a < 0 || b < 0) throw DomainError("negative exponent");
    auto f = zero(a + b);
    f.coeffs_[static_cast<std::size_t>(b)] = c;
    return f;
}

bool BinaryForm::is_zero() const {
    for (const auto& c : coeffs_) {
        if (c != 0) return false;
    }
    return true;
}

Rat BinaryForm::operator()(const Rat& x, const Rat& y) const { return eval_form<Rat>(coeffs_, x, y); }

Int BinaryForm::operator()(const Int& x, const Int& y) const {
    Int acc;
    Int ypow(1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].get_den() != 1) throw DomainError("integer evaluation of a form with rational coefficients");
        if (i == 0) {
            acc = coeffs_[0].get_num();
            continue;
        }
        ypow *= y;
        acc = acc * x + coeffs_[i].get_num() * ypow;
    }
    return acc;
}

BinaryForm BinaryForm::pow(int n) const {
    if (n < 0) throw DomainError("negative power of a form");
    BinaryForm result = monomial(0, 0);
    BinaryForm base = *this;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

BinaryForm BinaryForm::scaled(const Rat& c) const {
    auto out = coeffs_;
    for (auto& x : out) x *= c;
    return BinaryForm(std::move(out));
}

std::size_t BinaryForm::max_bits() const {
    std::size_t bits = 0;
    for (const auto& c : coeffs_) bits = std::max(bits, bit_size(c));
    return bits;
}

BinaryForm operator+(const BinaryForm& a, const BinaryForm& b) {
    if (a.degree() != b.degree()) throw DomainError("adding forms of different degrees");
    auto out = a.coeffs_;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.coeffs_[i];
    return BinaryForm(std::move(out));
}

BinaryForm operator-(const BinaryForm& a, const BinaryForm& b) {
    if (a.degree() != b.degree()) throw DomainError("subtracting forms of different degrees");
    auto out = a.coeffs_;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.coeffs_[i];
    return BinaryForm(std::move(out));
}

BinaryForm operator*(const BinaryForm& a, const BinaryForm& b) {
    std::vector<Rat> out(a.coeffs_.size() + b.coeffs_.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return BinaryForm(std::move(out));
}

ComplexLift to_complex(const Lift& z) { return {z.z0.get_d(), z.z1.get_d()}; }

Rat wedge(const Lift& z, const Lift& w) { return z.z0 * w.z1 - z.z1 * w.z0; }

std::complex<double> wedge(const ComplexLift& z, const ComplexLift& w) { return z.z0 * w.z1 - z.z1 * w.z0; }

std::vector<double> to_doubles(const BinaryForm& f) {
    std::vector<double> out;
    out.reserve(f.coeffs().size());
    for (const auto& c : f.coeffs()) out.push_back(c.get_d());
    return out;
}

Rat sylvester_resultant(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    if (a.empty() || b.empty()) throw DomainError("resultant of an empty coefficient list");
    const std::size_t m = a.size() - 1;
    const std::size_t n = b.size() - 1;
    const std::size_t size = m + n;
    if (size == 0) return Rat(1);
    Matrix<Rat> s(size, std::vector<Rat>(size, Rat(0)));
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t i = 0; i <= m; ++i) s[row][row + i] = a[i];
    }
    for (std::size_t row = 0; row < m; ++row) {
        for (std::size_t i = 0; i <= n; ++i) s[n + row][row + i] = b[i];
    }
    return determinant(s);
}

Rat resultant(const BinaryForm& f1, const BinaryForm& f2) {
    if (f1.degree() != f2.degree()) {
        throw DomainError("resultant: degree mismatch (" + std::to_string(f1.degree()) + " vs " +
                          std::to_string(f2.degree()) + ")");
    }
    if (f1.degree() < 1) throw DomainError("resultant: degree must be at least 1");
    return sylvester_resultant(f1.coeffs(), f2.coeffs());
}

MapPair::MapPair(BinaryForm f1, BinaryForm f2) : f1_(std::move(f1)), f2_(std::move(f2)) {
    if (f1_.degree() != f2_.degree()) throw DomainError("map components have different degrees");
    if (f1_.degree() < 2) throw DomainError("map degree must be at least 2");
    resultant_ = dyngreen::resultant(f1_, f2_);
    if (resultant_ == 0) throw DomainError("Res(F1, F2) = 0: components share a linear factor");
}

Lift MapPair::operator()(const Lift& z) const { return {f1_(z.z0, z.z1), f2_(z.z0, z.z1)}; }

std::size_t MapPair::max_bits() const { return std::max(f1_.max_bits(), f2_.max_bits()); }

std::pair<BinaryForm, BinaryForm> compose_forms(const BinaryForm& f1, const BinaryForm& f2, const BinaryForm& g1,
                                                const BinaryForm& g2, const Limits& limits) {
    auto h1 = substitute(f1, g1, g2);
    check_bits(h1, limits);
    auto h2 = substitute(f2, g1, g2);
    check_bits(h2, limits);
    return {std::move(h1), std::move(h2)};
}

MapPair compose(const MapPair& f, const MapPair& g, const Limits& limits) {
    auto [h1, h2] = compose_forms(f.f1(), f.f2(), g.f1(), g.f2(), limits);
    return MapPair(std::move(h1), std::move(h2));
}

std::vector<std::pair<BinaryForm, BinaryForm>> iterate_forms(const MapPair& f, int n, const Limits& limits) {
    if (n < 1) throw DomainError("iterate: n must be at least 1");
    std::vector<std::pair<BinaryForm, BinaryForm>> out;
    out.reserve(static_cast<std::size_t>(n));
    out.emplace_back(f.f1(), f.f2());
    for (int j = 2; j <= n; ++j) {
        const auto& prev = out.back();
        out.push_back(compose_forms(f.f1(), f.f2(), prev.first, prev.second, limits));
    }
    return out;
}

MapPair iterate(const MapPair& f, int n, const Limits& limits) {
    auto forms = iterate_forms(f, n, limits);
    auto& last = forms.back();
    return MapPair(std::move(last.first), std::move(last.second));
}

IntegerNormalization integer_normalization(const MapPair& f) {
    std::vector<Rat> all = f.f1().coeffs();
    all.insert(all.end(), f.f2().coeffs().begin(), f.f2().coeffs().end());
    const Int l = lcm_of_denominators(all);
    for (auto& c : all) c *= l;
    const Int g = gcd_of_numerators(all);
    Rat scale(l, g);
    scale.canonicalize();
    return {MapPair(f.f1().scaled(scale), f.f2().scaled(scale)), scale};
}

MapPair normalize_integer(const MapPair& f) { return integer_normalization(f).map; }

CofactorIdentity cofactors(const MapPair& f) {
    const int d = f.degree();
    const std::size_t n = static_cast<std::size_t>(2 * d);
    const std::size_t half = static_cast<std::size_t>(d);
    // Unknowns: d coefficients of the F1 multiplier, then d of the F2 multiplier.
    // Equation k matches the coefficient of x^(2d-1-k) y^k.
    Matrix<Rat> m(n, std::vector<Rat>(n, Rat(0)));
    for (std::size_t i = 0; i < half; ++i) {
        for (std::size_t j = 0; j <= half; ++j) {
            m[i + j][i] += f.f1()[j];
            m[i + j][half + i] += f.f2()[j];
        }
    }
    auto solve_for = [&](std::size_t target) {
        std::vector<Rat> rhs(n, Rat(0));
        rhs[target] = f.resultant();
        auto sol = solve(m, rhs);
        if (!sol) throw DomainError("cofactor system is singular; Res(F) = 0");
        std::vector<Rat> a(sol->begin(), sol->begin() + static_cast<long>(half));
        std::vector<Rat> b(sol->begin() + static_cast<long>(half), sol->end());
        return std::pair{BinaryForm(std::move(a)), BinaryForm(std::move(b))};
    };
    auto [g11, g12] = solve_for(0);
    auto [g21, g22] = solve_for(n - 1);
    return {std::move(g11), std::move(g12), std::move(g21), std::move(g22)};
}

bool holds(const CofactorIdentity& c, const MapPair& f) {
    const int top = 2 * f.degree() - 1;
    const auto lhs_x = c.g11 * f.f1() + c.g12 * f.f2();
    const auto lhs_y = c.g21 * f.f1() + c.g22 * f.f2();
    return lhs_x == BinaryForm::monomial(top, 0, f.resultant()) &&
           lhs_y == BinaryForm::monomial(0, top, f.resultant());
}

ResultantPower resultant_power_check(const MapPair& f, int k, const Limits& limits) {
    if (k < 1) throw DomainError("resultant_power_check: k must be at least 1");
    const long long d = f.degree();
    long long dk = 1;
    for (int i = 0; i < k; ++i) dk *= d;
    ResultantPower out;
    out.exponent = (dk / d) * ((dk - 1) / (d - 1));
    const auto fk = iterate_forms(f, k, limits).back();
    const Rat res_k = resultant(fk.first, fk.second);
    Rat power(1);
    mpz_pow_ui(power.get_num_mpz_t(), f.resultant().get_num_mpz_t(), static_cast<unsigned long>(out.exponent));
    mpz_pow_ui(power.get_den_mpz_t(), f.resultant().get_den_mpz_t(), static_cast<unsigned long>(out.exponent));
    power.canonicalize();
    if (res_k == power) {
        out.sign = 1;
        out.verified = true;
    } else if (res_k == -power) {
        out.sign = -1;
        out.verified = true;
    }
    return out;
}

}  // namespace dyngreen
