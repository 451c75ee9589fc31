#include "dyngreen/basis.hpp"

#include <string>

namespace dyngreen {

namespace {

long long checked_power(long long base, int exp) {
    long long out = 1;
    for (int i = 0; i < exp; ++i) {
        if (out > (1LL << 62) / base) throw ResourceError("Sigma index overflows 64 bits");
        out *= base;
    }
    return out;
}

void check_degree(int d) {
    if (d < 2) throw DomainError("degree must be at least 2");
}

}  // namespace

SigmaIndex make_sigma(int t, int k, int d) {
    check_degree(d);
    if (t < 2 || t > 2 * d - 1) throw DomainError("t must lie in [2, 2d-1]");
    if (k < 1) throw DomainError("k must be at least 1");
    return {static_cast<long long>(t) * checked_power(d, k), t, k};
}

std::vector<SigmaIndex> sigma_decompositions(long long N, int d) {
    check_degree(d);
    std::vector<SigmaIndex> out;
    long long dk = d;
    for (int k = 1; dk <= N; ++k) {
        if (N % dk == 0) {
            const long long t = N / dk;
            if (t >= 2 && t <= 2 * d - 1) out.push_back({N, static_cast<int>(t), k});
        }
        if (dk > N / d) break;
        dk *= d;
    }
    return out;
}

std::optional<SigmaIndex> sigma_decompose(long long N, int d) {
    if (N < 2) return std::nullopt;
    auto all = sigma_decompositions(N, d);
    if (all.empty()) return std::nullopt;
    return all.back();
}

long long nearest_sigma(long long N, int d) {
    check_degree(d);
    if (N < 2LL * d) throw DomainError("nearest_sigma needs N >= 2d");
    for (long long n = N;; --n) {
        if (sigma_decompose(n, d)) return n;
    }
}

long long alpha(const SigmaIndex& idx, int d) { return idx.t - 1 + static_cast<long long>(d - 1) * idx.k; }

Rat prop_exponent(const SigmaIndex& idx, int d) {
    const Int n(static_cast<long>(idx.N));
    const Int denom = Int(2 * d) * Int(d - 1);
    Rat r(n * n - n * (Int(idx.t) + Int(idx.k) * Int(d - 1)), denom);
    r.canonicalize();
    return r;
}

BasisFamily build_H(const BinaryForm& f1, const BinaryForm& f2, const SigmaIndex& idx, const Limits& limits) {
    const int d = f1.degree();
    if (d < 2 || f2.degree() != d) throw DomainError("build_H: forms must share a degree d >= 2");
    if (make_sigma(idx.t, idx.k, d).N != idx.N) throw DomainError("inconsistent Sigma index");
    if (static_cast<std::size_t>(idx.N) > limits.max_basis_size) {
        throw ResourceError("basis size " + std::to_string(idx.N) + " exceeds limit " +
                            std::to_string(limits.max_basis_size));
    }
    std::vector<std::pair<BinaryForm, BinaryForm>> iterates{{f1, f2}};
    for (int j = 2; j <= idx.k; ++j)
        iterates.push_back(compose_forms(f1, f2, iterates.back().first, iterates.back().second, limits));

    // factors[j][a] = the level-j factor with exponent a on the first slot.
    std::vector<std::vector<BinaryForm>> factors(static_cast<std::size_t>(idx.k) + 1);
    for (int j = 0; j <= idx.k; ++j) {
        const int total = (j < idx.k) ? d - 1 : idx.t - 1;
        const BinaryForm first = (j == 0) ? BinaryForm::monomial(1, 0) : iterates[static_cast<std::size_t>(j - 1)].first;
        const BinaryForm second = (j == 0) ? BinaryForm::monomial(0, 1) : iterates[static_cast<std::size_t>(j - 1)].second;
        for (int a = 0; a <= total; ++a) factors[static_cast<std::size_t>(j)].push_back(first.pow(a) * second.pow(total - a));
    }

    BasisFamily out;
    out.m = static_cast<int>(idx.N - 1);
    std::vector<int> exps;
    auto recurse = [&](auto&& self, std::size_t level, const BinaryForm& prefix) -> void {
        if (level == factors.size()) {
            out.members.push_back(prefix);
            out.exponents.push_back(exps);
            return;
        }
        const auto& options = factors[level];
        for (int a = static_cast<int>(options.size()) - 1; a >= 0; --a) {
            exps.push_back(a);
            self(self, level + 1, prefix * options[static_cast<std::size_t>(a)]);
            exps.pop_back();
        }
    };
    recurse(recurse, 0, BinaryForm::monomial(0, 0));
    return out;
}

BasisFamily build_H(const MapPair& f, const SigmaIndex& idx, const Limits& limits) {
    return build_H(f.f1(), f.f2(), idx, limits);
}

Matrix<Rat> change_matrix(const BinaryForm& f1, const BinaryForm& f2, const SigmaIndex& idx, const Limits& limits) {
    const auto family = build_H(f1, f2, idx, limits);
    const std::size_t n = family.members.size();
    Matrix<Rat> a(n, std::vector<Rat>(n, Rat(0)));
    for (std::size_t j = 0; j < n; ++j) {
        const auto& h = family.members[j];
        if (static_cast<std::size_t>(h.degree()) + 1 != n) throw DomainError("basis member has the wrong degree");
        for (std::size_t i = 0; i < n; ++i) a[i][j] = h[i];
    }
    return a;
}

Matrix<Rat> change_matrix(const MapPair& f, const SigmaIndex& idx, const Limits& limits) {
    return change_matrix(f.f1(), f.f2(), idx, limits);
}

Rat change_matrix_det(const BinaryForm& f1, const BinaryForm& f2, const SigmaIndex& idx, const Limits& limits) {
    return determinant(change_matrix(f1, f2, idx, limits));
}

Rat change_matrix_det(const MapPair& f, const SigmaIndex& idx, const Limits& limits) {
    return change_matrix_det(f.f1(), f.f2(), idx, limits);
}

PropositionCheck verify_proposition(const MapPair& f, const SigmaIndex& idx, const Limits& limits) {
    PropositionCheck out;
    out.idx = idx;
    out.r = prop_exponent(idx, f.degree());
    out.det = change_matrix_det(f, idx, limits);
    if (out.r.get_den() != 1 || out.r < 0) return out;
    const unsigned long r = out.r.get_num().get_ui();
    Rat power;
    mpz_pow_ui(power.get_num_mpz_t(), f.resultant().get_num_mpz_t(), r);
    mpz_pow_ui(power.get_den_mpz_t(), f.resultant().get_den_mpz_t(), r);
    power.canonicalize();
    out.res_power = power;
    out.verified = abs(out.det) == abs(power);
    return out;
}

}  // namespace dyngreen
