#include "doctest.h"
#include "oracles.hpp"

#include "dyngreen/dynheight.hpp"

using namespace dyngreen;

namespace {

const double kLog2 = std::log(2.0);

const MapPair kSquare(BinaryForm({1, 0, 0}), BinaryForm({0, 0, 1}));
const MapPair kNewton(BinaryForm({1, 0, 1}), BinaryForm({0, 2, 0}));

MapPair random_map(oracle::SplitMix& rng, int d, long bound = 5) {
    for (;;) {
        auto a = oracle::random_int_coeffs(rng, d, bound);
        auto b = oracle::random_int_coeffs(rng, d, bound);
        if (oracle::leibniz_resultant(a, b) != 0) return MapPair(BinaryForm(a), BinaryForm(b));
    }
}

Lift random_lift(oracle::SplitMix& rng) {
    for (;;) {
        Lift z{oracle::q(rng.range(-30, 30), rng.range(1, 12)), oracle::q(rng.range(-30, 30), rng.range(1, 12))};
        if (!z.is_zero()) return z;
    }
}

// Hhat_p for an integer-coefficient map from the recursion
// (a, b) <- F(a, b) / p^m, m = min valuation, carried modulo p^K:
//   Hhat_p(z) = -(v_0 + sum_k m_k / d^k) log p.
double valuation_recursion(const MapPair& f, Int a, Int b, const Int& p, int steps = 60) {
    const long v0 = std::min(a == 0 ? 1000000 : oracle::valuation(a, p), b == 0 ? 1000000 : oracle::valuation(b, p));
    Int pk;
    mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), 200);
    Int pv;
    mpz_pow_ui(pv.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(v0));
    a /= pv;
    b /= pv;
    double total = static_cast<double>(v0);
    double scale = 1.0;
    const int d = f.degree();
    for (int k = 1; k <= steps; ++k) {
        scale /= d;
        Int x = Int(Rat(f.f1()(Rat(a), Rat(b))).get_num()) % pk;
        Int y = Int(Rat(f.f2()(Rat(a), Rat(b))).get_num()) % pk;
        const long vx = x == 0 ? 200 : oracle::valuation(x, p);
        const long vy = y == 0 ? 200 : oracle::valuation(y, p);
        const long m = std::min(vx, vy);
        REQUIRE(m < 150);
        Int pm;
        mpz_pow_ui(pm.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(m));
        a = x / pm;
        b = y / pm;
        total += static_cast<double>(m) * scale;
    }
    return -total * std::log(p.get_d());
}

}  // namespace

TEST_CASE("height examples") {
    const HeightValue h = hhat(kSquare, Lift{2, 1}, Place::archimedean(), 1e-12);
    CHECK(std::abs(h.value - kLog2) <= 1e-12);
    CHECK(h.err <= 1e-12);
    CHECK(std::abs(hhat(kSquare, Lift{3, 1}, Place::finite(3ul)).value) <= 1e-15);
    const HeightValue n = hhat(kNewton, Lift{1, 1}, Place::finite(2ul), 1e-12);
    CHECK(std::abs(n.value + kLog2) <= 1e-10);
    CHECK(std::abs(n.value + kLog2) <= n.err + 1e-15);
    const HeightValue c = hhat(kSquare, ComplexLift{{0.6, 0.8}, 1.0});
    CHECK(std::abs(c.value) <= 1e-10);
}

TEST_CASE("high-precision mode agrees and tightens the error") {
    const HeightValue lo = hhat(kNewton, Lift{3, 7}, Place::archimedean(), 1e-12);
    const HeightValue hi = hhat(kNewton, Lift{3, 7}, Place::archimedean(), 1e-14, 160);
    CHECK(std::abs(lo.value - hi.value) <= lo.err + hi.err);
    CHECK(hi.err <= 1e-14);
    CHECK(std::abs(hhat(kSquare, Lift{2, 1}, Place::archimedean(), 1e-15, 128).value - kLog2) <= 1e-15);
}

TEST_CASE("p-adic heights match the valuation recursion") {
    oracle::SplitMix rng(101);
    for (int i = 0; i < 60; ++i) {
        const MapPair f = random_map(rng, static_cast<int>(rng.range(2, 3)), 6);
        const Int p(i % 2 ? 2 : 3);
        const Int a(rng.range(-40, 40)), b(rng.range(-40, 40));
        if (a == 0 && b == 0) continue;
        const HeightValue h = hhat(f, Lift{Rat(a), Rat(b)}, Place::finite(p), 1e-11);
        const double expected = valuation_recursion(f, a, b, p);
        CHECK(std::abs(h.value - expected) <= h.err + 1e-12);
        CHECK(h.err <= 1e-11);
    }
}

TEST_CASE("r(F)") {
    CHECK(r_of(kSquare, Place::archimedean()) == 0.0);
    CHECK(r_of(kSquare, Place::finite(5ul)) == 0.0);
    CHECK(r_of(kNewton, Place::archimedean()) == doctest::Approx(kLog2));
    CHECK(r_of(kNewton, Place::finite(2ul)) == doctest::Approx(-kLog2));
}

TEST_CASE("functional equation and scale law") {
    oracle::SplitMix rng(103);
    for (int i = 0; i < 200; ++i) {
        const int d = static_cast<int>(rng.range(2, 3));
        const MapPair f = random_map(rng, d);
        const Place v = i % 2 ? Place::archimedean() : Place::finite(static_cast<unsigned long>(i % 4 ? 2 : 5));
        const LocalHeight H(f, v);
        const Lift z = random_lift(rng);
        const HeightValue hz = H(z, 1e-11);
        const HeightValue hfz = H(f(z), 1e-11);
        CHECK(std::abs(hfz.value - d * hz.value) <= hfz.err + d * hz.err + 1e-12);
        CHECK(std::abs(hfz.value - d * hz.value) <= 1e-9);

        const Rat c = oracle::q(rng.range(1, 40) * (rng.range(0, 1) ? 1 : -1), rng.range(1, 40));
        const HeightValue hcz = H(Lift{c * z.z0, c * z.z1}, 1e-11);
        CHECK(std::abs(hcz.value - hz.value - log_abs(c, v).value) <= hcz.err + hz.err + 1e-12);
    }
}

TEST_CASE("rounding amplified along the orbit is caught") {
    // Reference values from a 300-digit evaluation of the sup-norm series.
    const MapPair f(BinaryForm({3, -5, -1, 1}), BinaryForm({0, 0, 5, -1}));
    const LocalHeight H(f, Place::archimedean());
    const Lift z{oracle::q(11, 3), oracle::q(-11, 2)};
    const HeightValue hz = H(z, 1e-11);
    const HeightValue hfz = H(f(z), 1e-11);
    CHECK(std::abs(hz.value - 2.1259495971515401859) <= hz.err);
    CHECK(std::abs(hfz.value - 6.3778487914546205576) <= hfz.err);
    CHECK(hz.err <= 1e-11);
    CHECK(hfz.err <= 1e-11);
}

TEST_CASE("complex and rational evaluations agree") {
    oracle::SplitMix rng(107);
    for (int i = 0; i < 50; ++i) {
        const MapPair f = random_map(rng, static_cast<int>(rng.range(2, 4)));
        const LocalHeight H(f, Place::archimedean());
        const Lift z = random_lift(rng);
        const HeightValue a = H(z, 1e-11), b = H(to_complex(z), 1e-11);
        CHECK(std::abs(a.value - b.value) <= a.err + b.err + 1e-12);
    }
}

TEST_CASE("green examples") {
    const GreenValue g = green(kSquare, Lift{2, 1}, Lift{0, 1}, Place::archimedean());
    CHECK(std::abs(g.value) <= 1e-9);
    CHECK(green(kSquare, Lift{2, 1}, Lift{4, 2}, Place::archimedean()).infinite);
    for (unsigned long p : {2ul, 3ul, 7ul})
        CHECK(std::abs(green(kSquare, Lift{1, 1}, Lift{0, 1}, Place::finite(p)).value) <= 1e-12);
    CHECK(green(kSquare, ComplexLift{1.0, 1.0}, ComplexLift{1.0, 1.0}).infinite);
}

TEST_CASE("green symmetry, lift independence and good-reduction positivity") {
    oracle::SplitMix rng(109);
    for (int i = 0; i < 100; ++i) {
        const MapPair f = random_map(rng, static_cast<int>(rng.range(2, 3)));
        const Place v = i % 2 ? Place::archimedean() : Place::finite(static_cast<unsigned long>(i % 4 ? 2 : 3));
        const LocalHeight H(f, v);
        const Lift z = random_lift(rng), w = random_lift(rng);
        if (wedge(z, w) == 0) continue;
        const GreenValue a = green(H, z, w, 1e-11), b = green(H, w, z, 1e-11);
        CHECK(std::abs(a.value - b.value) <= a.err + b.err + 1e-12);
        const Rat c = oracle::q(rng.range(1, 20), rng.range(1, 20));
        const GreenValue s = green(H, Lift{c * z.z0, c * z.z1}, w, 1e-11);
        CHECK(std::abs(s.value - a.value) <= s.err + a.err + 1e-12);
        if (v.is_finite() && good_reduction(f, v.prime())) CHECK(a.value >= -a.err);
    }
}

TEST_CASE("filled Julia set membership") {
    CHECK(filled_julia_member(kSquare, Lift{1, 1}, Place::archimedean()).kind != Membership::out);
    CHECK(filled_julia_member(kSquare, Lift{2, 1}, Place::archimedean()).kind == Membership::out);
    CHECK(filled_julia_member(kSquare, Lift{Rat(1, 2), Rat(1, 2)}, Place::archimedean()).kind == Membership::in);
    CHECK(filled_julia_member(kSquare, Lift{3, 1}, Place::finite(3ul)).kind != Membership::out);
}

TEST_CASE("normalized lifts") {
    const ComplexLift n = normalize_lift(kSquare, ComplexLift{2.0, 1.0});
    CHECK(std::abs(n.z0 - 1.0) <= 1e-9);
    CHECK(std::abs(n.z1 - 0.5) <= 1e-9);
    const NormalizedLift p = normalize_lift(kSquare, Lift{3, 1}, Place::finite(3ul));
    CHECK(p.lift == Lift{3, 1});
    CHECK(p.shift == 0);
    CHECK(std::abs(p.height.value) <= 1e-15);
    const NormalizedLift q = normalize_lift(kNewton, Lift{1, 1}, Place::finite(2ul));
    CHECK(q.height.value <= q.height.err);
    CHECK(q.height.value > -kLog2 - q.height.err);

    oracle::SplitMix rng(113);
    for (int i = 0; i < 50; ++i) {
        const MapPair f = random_map(rng, 2);
        const Lift z = random_lift(rng);
        const NormalizedLift r = normalize_lift(f, z, Place::finite(3ul));
        const double lp = std::log(3.0);
        CHECK(r.height.value <= r.height.err + 1e-12);
        CHECK(r.height.value > -lp - r.height.err - 1e-12);
        const ComplexLift c = normalize_lift(f, to_complex(z));
        CHECK(std::abs(hhat(f, c).value) <= 1e-8);
    }
}

TEST_CASE("escape radius") {
    const EscapeBound sq = escape_radius_bound(kSquare, Place::archimedean());
    CHECK(sq.R_up == doctest::Approx(4.0));
    CHECK(sq.C_g == doctest::Approx(1.0));
    CHECK(escape_radius_bound(kSquare, Place::finite(3ul)).R_up == doctest::Approx(1.0));
    CHECK(escape_radius_bound(kNewton, Place::finite(3ul)).R_up == doctest::Approx(1.0));
    CHECK(escape_radius_bound(kNewton, Place::finite(2ul)).R_up >= 1.0);
}

TEST_CASE("points beyond the escape radius escape") {
    oracle::SplitMix rng(127);
    std::vector<MapPair> maps{kSquare, kNewton};
    for (int i = 0; i < 3; ++i) maps.push_back(random_map(rng, static_cast<int>(rng.range(2, 3))));
    long checked = 0, failures = 0;
    for (const auto& f : maps) {
        const EscapeBound e = escape_radius_bound(f, Place::archimedean());
        const auto c1 = to_doubles(f.f1()), c2 = to_doubles(f.f2());
        const int samples = f == kSquare || f == kNewton ? 1000000 : 100000;
        for (int s = 0; s < samples; ++s) {
            const double r = e.R_up * (1.0 + 1e-9 + rng.uniform() * 3.0);
            std::complex<double> z0 = std::polar(1.0, rng.uniform(0, 6.283185307179586));
            std::complex<double> z1 = std::polar(rng.uniform(), rng.uniform(0, 6.283185307179586));
            if (rng.range(0, 1)) std::swap(z0, z1);
            z0 *= r;
            z1 *= r;
            // Orbit as (log norm, unit vector): L <- d L + log||F(u)||.
            double L = std::log(r);
            const double L0 = L;
            double s0 = std::max(std::abs(z0), std::abs(z1));
            std::complex<double> u0 = z0 / s0, u1 = z1 / s0;
            for (int n = 1; n <= 50; ++n) {
                const auto w0 = eval_form(c1, u0, u1), w1 = eval_form(c2, u0, u1);
                const double wn = std::max(std::abs(w0), std::abs(w1));
                L = f.degree() * L + std::log(wn);
                u0 = w0 / wn;
                u1 = w1 / wn;
                if (L < L0 + n * std::log(2.0) - 1e-9) {
                    ++failures;
                    break;
                }
            }
            ++checked;
        }
    }
    CHECK(failures == 0);
    CHECK(checked > 1000000);
}
