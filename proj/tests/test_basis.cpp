#include "doctest.h"
#include "oracles.hpp"

#include "dyngreen/basis.hpp"

using namespace dyngreen;

namespace {

const MapPair kSquare(BinaryForm({1, 0, 0}), BinaryForm({0, 0, 1}));
const MapPair kNewton(BinaryForm({1, 0, 1}), BinaryForm({0, 2, 0}));
const MapPair kSumProduct(BinaryForm({1, 0, 1}), BinaryForm({0, 1, 0}));

MapPair random_map(oracle::SplitMix& rng, int d, long bound = 4) {
    for (;;) {
        auto a = oracle::random_int_coeffs(rng, d, bound);
        auto b = oracle::random_int_coeffs(rng, d, bound);
        if (oracle::leibniz_resultant(a, b) != 0) return MapPair(BinaryForm(a), BinaryForm(b));
    }
}

// Sigma membership by enumeration of t d^k.
std::vector<std::pair<int, int>> enumerate_sigma(long long N, int d) {
    std::vector<std::pair<int, int>> out;
    long long pk = d;
    for (int k = 1; pk <= N; ++k, pk *= d)
        for (int t = 2; t <= 2 * d - 1; ++t)
            if (t * pk == N) out.emplace_back(t, k);
    return out;
}

}  // namespace

TEST_CASE("Sigma decomposition") {
    CHECK(sigma_decompose(4, 2) == SigmaIndex{4, 2, 1});
    CHECK_FALSE(sigma_decompose(5, 2).has_value());
    CHECK(sigma_decompose(6, 3) == SigmaIndex{6, 2, 1});
    for (int d = 2; d <= 5; ++d)
        for (long long N = 2; N <= 20000; ++N) {
            const auto all = enumerate_sigma(N, d);
            CHECK(all.size() <= 1);
            CHECK(sigma_decompositions(N, d).size() == all.size());
            const auto s = sigma_decompose(N, d);
            CHECK(s.has_value() == !all.empty());
            if (s) CHECK(std::make_pair(s->t, s->k) == all.front());
        }
    CHECK_THROWS_AS(make_sigma(1, 1, 2), DomainError);
    CHECK_THROWS_AS(make_sigma(4, 1, 2), DomainError);
    CHECK_THROWS_AS(make_sigma(2, 0, 2), DomainError);
}

TEST_CASE("nearest element of Sigma") {
    CHECK(nearest_sigma(5, 2) == 4);
    CHECK(nearest_sigma(4, 2) == 4);
    CHECK_THROWS_AS(nearest_sigma(3, 2), DomainError);
    for (int d = 2; d <= 4; ++d)
        for (long long N = 2 * d; N <= 10000; ++N) {
            const long long M = nearest_sigma(N, d);
            CHECK(M <= N);
            CHECK(!enumerate_sigma(M, d).empty());
            for (long long K = M + 1; K <= N; ++K) CHECK(enumerate_sigma(K, d).empty());
            CHECK(2 * (M - 1) >= N - 1);
        }
}

TEST_CASE("alpha and its bounds") {
    CHECK(alpha(make_sigma(2, 1, 2), 2) == 2);
    CHECK(alpha(make_sigma(3, 2, 2), 2) == 4);
    for (int d = 2; d <= 4; ++d)
        for (long long N = 2; N <= 10000; ++N)
            if (auto s = sigma_decompose(N, d)) {
                const long long a = alpha(*s, d);
                CHECK(a >= 2);
                CHECK(static_cast<double>(a) <= (d - 1) * (std::log(static_cast<double>(N)) / std::log(d) + 2) + 1e-12);
            }
}

TEST_CASE("proposition exponent") {
    CHECK(prop_exponent(make_sigma(2, 1, 2), 2) == 1);
    CHECK(prop_exponent(make_sigma(2, 2, 2), 2) == 8);
    CHECK(prop_exponent(make_sigma(3, 1, 2), 2) == 3);
    CHECK(prop_exponent(make_sigma(2, 1, 3), 3) == 1);
    for (int d = 2; d <= 4; ++d)
        for (long long N = 2; N <= 1000; ++N)
            if (auto s = sigma_decompose(N, d)) {
                const Rat r = prop_exponent(*s, d);
                CHECK(r.get_den() == 1);
                CHECK(r >= 0);
            }
}

TEST_CASE("basis family") {
    const BasisFamily h = build_H(kNewton, make_sigma(2, 1, 2));
    REQUIRE(h.members.size() == 4);
    const BinaryForm x = BinaryForm::monomial(1, 0), y = BinaryForm::monomial(0, 1);
    CHECK(h.members[0] == x * kNewton.f1());
    CHECK(h.members[1] == x * kNewton.f2());
    CHECK(h.members[2] == y * kNewton.f1());
    CHECK(h.members[3] == y * kNewton.f2());

    oracle::SplitMix rng(131);
    for (const auto& [t, k, d] : std::vector<std::tuple<int, int, int>>{{2, 1, 2}, {3, 1, 2}, {2, 2, 2}, {3, 2, 2}, {2, 1, 3}, {5, 1, 3}, {2, 1, 4}}) {
        const SigmaIndex idx = make_sigma(t, k, d);
        const BasisFamily b = build_H(random_map(rng, d), idx);
        CHECK(static_cast<long long>(b.members.size()) == idx.N);
        for (const auto& m : b.members) CHECK(m.degree() == idx.N - 1);
    }
    Limits small;
    small.max_basis_size = 8;
    CHECK_THROWS_AS(build_H(kSquare, make_sigma(3, 2, 2), small), ResourceError);
}

TEST_CASE("change of basis determinants") {
    const Rat sq = change_matrix_det(kSquare, make_sigma(2, 1, 2));
    CHECK(abs(sq) == 1);
    CHECK(change_matrix_det(kSumProduct, make_sigma(2, 1, 2)) == -1);
    CHECK(change_matrix_det(kNewton, make_sigma(2, 1, 2)) == -4);
    const Matrix<Rat> a = change_matrix(kNewton, make_sigma(2, 1, 2));
    CHECK(change_matrix_det(kNewton, make_sigma(2, 1, 2)) == oracle::leibniz_det(a));

    // Monomial specialization gives a permutation matrix.
    for (const auto& [t, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {3, 2}}) {
        const Matrix<Rat> m = change_matrix(kSquare, make_sigma(t, k, 2));
        for (const auto& row : m) {
            int ones = 0;
            for (const auto& v : row) {
                CHECK((v == 0 || v == 1));
                ones += v == 1;
            }
            CHECK(ones == 1);
        }
    }
}

TEST_CASE("det(A) = +-Res^r") {
    for (const auto& f : {kSquare, kSumProduct, kNewton}) {
        const PropositionCheck c = verify_proposition(f, make_sigma(2, 1, 2));
        CHECK(c.verified);
        CHECK(c.r == 1);
    }
    const PropositionCheck s = verify_proposition(kSquare, make_sigma(2, 2, 2));
    CHECK(s.verified);
    CHECK(s.r == 8);
    CHECK(abs(s.det) == 1);

    oracle::SplitMix rng(137);
    for (const auto& [t, k, d] : std::vector<std::tuple<int, int, int>>{{2, 1, 2}, {3, 1, 2}, {2, 2, 2}, {2, 1, 3}}) {
        for (int i = 0; i < 5; ++i) {
            const MapPair f = random_map(rng, d, 3);
            const PropositionCheck c = verify_proposition(f, make_sigma(t, k, d));
            CHECK(c.verified);
            Rat power = 1;
            for (long j = 0; j < c.r.get_num().get_si(); ++j) power *= f.resultant();
            CHECK(abs(c.det) == abs(power));
        }
    }
}

TEST_CASE("common factor forces det(A) = 0") {
    oracle::SplitMix rng(139);
    for (int i = 0; i < 10; ++i) {
        // F1 = (x - c y) g1, F2 = (x - c y) g2.
        const BinaryForm l({1, -rng.range(-3, 3)});
        const BinaryForm g1(oracle::random_int_coeffs(rng, 1, 4)), g2(oracle::random_int_coeffs(rng, 1, 4));
        const BinaryForm f1 = l * g1, f2 = l * g2;
        CHECK(resultant(f1, f2) == 0);
        CHECK(change_matrix_det(f1, f2, make_sigma(2, 1, 2)) == 0);
        CHECK(change_matrix_det(f1, f2, make_sigma(3, 1, 2)) == 0);
    }
}

TEST_CASE("det(A) scales by |gamma|^(2d r)") {
    oracle::SplitMix rng(149);
    for (int i = 0; i < 5; ++i) {
        const MapPair f = random_map(rng, 2, 3);
        const Rat g = oracle::q(rng.range(1, 5), rng.range(1, 5));
        const MapPair gf(f.f1().scaled(g), f.f2().scaled(g));
        for (const auto& [t, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}}) {
            const SigmaIndex idx = make_sigma(t, k, 2);
            const long e = 4 * prop_exponent(idx, 2).get_num().get_si();
            Rat ge = 1;
            for (long j = 0; j < e; ++j) ge *= g;
            CHECK(abs(change_matrix_det(gf, idx)) == ge * abs(change_matrix_det(f, idx)));
        }
    }
}
