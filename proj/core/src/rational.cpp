#include "dyngreen/rational.hpp"

#include <cmath>
#include <utility>

#include "dyngreen/error.hpp"

namespace dyngreen {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

Int parse_int(std::string_view s) {
    std::string text(s);
    if (!text.empty() && text[0] == '+') text.erase(0, 1);
    return Int(text, 10);
}

}  // namespace

Rat parse_rat(std::string_view text) {
    const auto s = trim(text);
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) {
        if (!is_integer_literal(s)) throw DomainError("malformed rational: '" + std::string(text) + "'");
        return Rat(parse_int(s));
    }
    const auto num = trim(s.substr(0, slash));
    const auto den = trim(s.substr(slash + 1));
    if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
        throw DomainError("malformed rational: '" + std::string(text) + "'");
    }
    Int q = parse_int(den);
    if (q == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    Rat r(parse_int(num), q);
    r.canonicalize();
    return r;
}

std::string to_string(const Rat& x) { return x.get_str(10); }
std::string to_string(const Int& x) { return x.get_str(10); }

std::size_t bit_size(const Rat& x) {
    const auto n = mpz_sizeinbase(x.get_num_mpz_t(), 2);
    const auto d = mpz_sizeinbase(x.get_den_mpz_t(), 2);
    return n > d ? n : d;
}

double log_abs(const Int& x) {
    if (x == 0) throw DomainError("log of zero");
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

double log_abs(const Rat& x) { return log_abs(Int(x.get_num())) - log_abs(Int(x.get_den())); }

Int bareiss_determinant(Matrix<Int> m) {
    const std::size_t n = m.size();
    if (n == 0) return Int(1);
    for (const auto& row : m) {
        if (row.size() != n) throw DomainError("determinant of a non-square matrix");
    }
    int sign = 1;
    Int prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap = k + 1;
            while (swap < n && m[swap][k] == 0) ++swap;
            if (swap == n) return Int(0);
            std::swap(m[k], m[swap]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Int t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                m[i][j] = std::move(t);
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? Int(m[n - 1][n - 1]) : Int(-m[n - 1][n - 1]);
}

Rat determinant(const Matrix<Rat>& m) {
    Matrix<Int> scaled;
    scaled.reserve(m.size());
    Int scale(1);
    for (const auto& row : m) {
        const Int l = lcm_of_denominators(row);
        std::vector<Int> r;
        r.reserve(row.size());
        for (const auto& x : row) r.emplace_back(Int(x.get_num() * (l / x.get_den())));
        scaled.push_back(std::move(r));
        scale *= l;
    }
    Rat det(bareiss_determinant(std::move(scaled)), scale);
    det.canonicalize();
    return det;
}

std::optional<std::vector<Rat>> solve(Matrix<Rat> m, std::vector<Rat> rhs) {
    const std::size_t n = m.size();
    if (rhs.size() != n) throw DomainError("solve: dimension mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(m[pivot], m[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || m[i][col] == 0) continue;
            const Rat f = m[i][col] / m[col][col];
            for (std::size_t j = col; j < n; ++j) m[i][j] -= f * m[col][j];
            rhs[i] -= f * rhs[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) rhs[i] /= m[i][i];
    return rhs;
}

Int lcm_of_denominators(const std::vector<Rat>& values) {
    Int l(1);
    for (const auto& x : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    return l;
}

Int gcd_of_numerators(const std::vector<Rat>& values) {
    Int g(0);
    for (const auto& x : values) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
    return g;
}

}  // namespace dyngreen
