#include "dyngreen/global.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <map>
#include <numeric>

#include "mpfr_real.hpp"
#include "parallel.hpp"

namespace dyngreen {

namespace {

Int gcd_int(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

std::size_t int_bits(const Int& x) { return x == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2); }

double log_max_abs(const Int& a, const Int& b) {
    const Int m = abs(a) > abs(b) ? Int(abs(a)) : Int(abs(b));
    return log_abs(m);
}

// Exact orbit step: (A, B) / gcd(A, B); the gcd divides Res for coprime inputs.
RationalPoint step(const MapPair& g, const Int& res_abs, const RationalPoint& q) {
    Int A = g.f1()(q.a(), q.b());
    Int B = g.f2()(q.a(), q.b());
    if (res_abs == 1) return RationalPoint(std::move(A), std::move(B));
    Int am = A % res_abs;
    Int g1 = gcd_int(am, res_abs);
    if (g1 != 1) {
        Int bm = B % g1;
        Int gg = gcd_int(bm, g1);
        if (gg != 1) {
            mpz_divexact(A.get_mpz_t(), A.get_mpz_t(), gg.get_mpz_t());
            mpz_divexact(B.get_mpz_t(), B.get_mpz_t(), gg.get_mpz_t());
        }
    }
    return RationalPoint(std::move(A), std::move(B));
}

}  // namespace

RationalPoint::RationalPoint(Int a, Int b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_ == 0 && b_ == 0) throw DomainError("RationalPoint: [0:0] is not a point");
    const Int g = gcd_int(a_, b_);
    if (g != 1) {
        mpz_divexact(a_.get_mpz_t(), a_.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(b_.get_mpz_t(), b_.get_mpz_t(), g.get_mpz_t());
    }
    if (b_ < 0 || (b_ == 0 && a_ < 0)) {
        a_ = -a_;
        b_ = -b_;
    }
}

RationalPoint RationalPoint::from_lift(const Lift& z) {
    if (z.is_zero()) throw DomainError("RationalPoint: zero lift");
    const Int l = lcm_of_denominators({z.z0, z.z1});
    const Rat a = z.z0 * l;
    const Rat b = z.z1 * l;
    return RationalPoint(a.get_num(), b.get_num());
}

RationalPoint RationalPoint::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) return from_lift({parse_rat(text), Rat(1)});
    return from_lift({parse_rat(text.substr(0, colon)), parse_rat(text.substr(colon + 1))});
}

double RationalPoint::naive_height() const { return log_max_abs(a_, b_); }

std::string RationalPoint::to_string() const { return dyngreen::to_string(a_) + ":" + dyngreen::to_string(b_); }

GlobalHeight::GlobalHeight(const MapPair& f)
    : integral_(normalize_integer(f)), bad_primes_(prime_divisors(integral_.resultant().get_num())) {
    locals_.emplace_back(integral_, Place::archimedean());
    for (const auto& p : bad_primes_) locals_.emplace_back(integral_, Place::finite(p));
    const LocalHeight& arch = locals_.front();
    upper_gap_ = arch.log_upper();
    lower_gap_ = log_abs(integral_.resultant()) - arch.log_lower();
}

const LocalHeight& GlobalHeight::local(const Place& v) const {
    for (const auto& h : locals_)
        if (h.place() == v) return h;
    throw DomainError("GlobalHeight: " + v.to_string() + " is a place of good reduction");
}

HeightValue GlobalHeight::operator()(const RationalPoint& point, double tol) const {
    const Lift z = point.lift();
    const double each = tol / static_cast<double>(locals_.size());
    HeightValue total;
    std::vector<double> parts;
    parts.reserve(locals_.size());
    for (const auto& h : locals_) {
        const HeightValue v = h(z, each);
        parts.push_back(v.value);
        total.err += v.err;
        total.iterations = std::max(total.iterations, v.iterations);
    }
    total.value = detail::pairwise_sum(parts.data(), parts.size());
    return total;
}

HeightValue canonical_height(const MapPair& f, const RationalPoint& point, double tol) {
    return GlobalHeight(f)(point, tol);
}

RationalPoint apply(const MapPair& integral_map, const RationalPoint& point) {
    const Int res = abs(integral_map.resultant().get_num());
    return step(integral_map, res, point);
}

namespace {

void eval_mpfr(const BinaryForm& f, const detail::MpfrReal& x, const detail::MpfrReal& y, detail::MpfrReal& out,
               detail::MpfrReal& tmp) {
    // out = sum c_i x^(d-i) y^i, accumulated as out <- out x + c_i y^i.
    const auto& c = f.coeffs();
    detail::MpfrReal ypow(out.precision());
    mpfr_set_ui(ypow.get(), 1, MPFR_RNDN);
    mpfr_set_ui(out.get(), 0, MPFR_RNDN);
    for (std::size_t i = 0; i < c.size(); ++i) {
        mpfr_mul(out.get(), out.get(), x.get(), MPFR_RNDN);
        mpfr_mul_q(tmp.get(), ypow.get(), c[i].get_mpq_t(), MPFR_RNDN);
        mpfr_add(out.get(), out.get(), tmp.get(), MPFR_RNDN);
        if (i + 1 < c.size()) mpfr_mul(ypow.get(), ypow.get(), y.get(), MPFR_RNDN);
    }
}

double log_abs_mpfr(const detail::MpfrReal& x) {
    long e = 0;
    const double m = mpfr_get_d_2exp(&e, x.get(), MPFR_RNDN);
    return std::log(std::abs(m)) + static_cast<double>(e) * std::numbers::ln2;
}

}  // namespace

OrbitEstimate canonical_height_orbit_oracle(const MapPair& f, const RationalPoint& point, int n_max,
                                            double target_err, const Limits& limits) {
    const MapPair g = normalize_integer(f);
    const Int res = abs(g.resultant().get_num());
    const LocalHeight arch(g, Place::archimedean());
    // -lo <= h(phi Q) - d h(Q) <= hi
    const double hi = arch.log_upper();
    const double lo = log_abs(g.resultant()) - arch.log_lower();
    const double width = std::max(0.0, std::max(hi, lo));
    const int d = g.degree();

    OrbitEstimate out;
    auto finish = [&](double h, int n) {
        const double scale = std::pow(static_cast<double>(d), -n);
        out.steps = n;
        out.value = h * scale;
        out.err = width * scale / (d - 1.0) + 1e-15 * std::abs(out.value);
        return out.err <= target_err || n >= n_max;
    };

    // Exact phase.
    std::set<RationalPoint> seen{point};
    RationalPoint q = point;
    int n = 0;
    for (;; ++n) {
        out.bits = std::max(int_bits(q.a()), int_bits(q.b()));
        if (finish(q.naive_height(), n)) return out;
        if (out.bits * static_cast<std::size_t>(d) > limits.max_orbit_bits) break;
        q = step(g, res, q);
        if (!seen.insert(q).second) {
            out.value = 0.0;
            out.err = 0.0;
            out.periodic = true;
            out.steps = n + 1;
            return out;
        }
    }

    // Residue phase: the coordinates are known modulo M = Res^K exactly and as
    // scaled MPFR values u * exp(L) with max(|u0|, |u1|) = 1.
    const int remaining = std::max(1, n_max - n);
    const mpfr_prec_t prec = 256 + 32 * static_cast<mpfr_prec_t>(remaining);
    detail::MpfrReal u0(Rat(q.a()), prec), u1(Rat(q.b()), prec), A(prec), B(prec), tmp(prec);
    double L = q.naive_height();
    {
        detail::MpfrReal norm = abs(q.a()) > abs(q.b()) ? u0.abs() : u1.abs();
        mpfr_div(u0.get(), u0.get(), norm.get(), MPFR_RNDN);
        mpfr_div(u1.get(), u1.get(), norm.get(), MPFR_RNDN);
    }
    Int modulus = 1;
    if (res > 1) mpz_pow_ui(modulus.get_mpz_t(), res.get_mpz_t(), static_cast<unsigned long>(remaining) + 2);
    Int ra = res > 1 ? Int(q.a() % modulus) : Int(0);
    Int rb = res > 1 ? Int(q.b() % modulus) : Int(0);

    for (;;) {
        eval_mpfr(g.f1(), u0, u1, A, tmp);
        eval_mpfr(g.f2(), u0, u1, B, tmp);
        const bool a_big = mpfr_cmpabs(A.get(), B.get()) >= 0;
        detail::MpfrReal norm = a_big ? A.abs() : B.abs();
        double log_g = 0.0;
        if (res > 1) {
            Int xa = g.f1()(ra, rb) % modulus, xb = g.f2()(ra, rb) % modulus;
            const Int ga = gcd_int(Int(xa % res), res);
            const Int gg = gcd_int(Int(xb % ga), ga);
            if (gg != 1) {
                mpz_divexact(xa.get_mpz_t(), xa.get_mpz_t(), gg.get_mpz_t());
                mpz_divexact(xb.get_mpz_t(), xb.get_mpz_t(), gg.get_mpz_t());
                log_g = log_abs(gg);
            }
            mpz_divexact(modulus.get_mpz_t(), modulus.get_mpz_t(), res.get_mpz_t());
            ra = xa % modulus;
            rb = xb % modulus;
        }
        L = d * L + log_abs_mpfr(norm) - log_g;
        mpfr_div(u0.get(), A.get(), norm.get(), MPFR_RNDN);
        mpfr_div(u1.get(), B.get(), norm.get(), MPFR_RNDN);
        ++n;
        out.bits = static_cast<std::size_t>(L / std::numbers::ln2) + 1;
        if (finish(L, n)) return out;
    }
}

GreenSumCheck green_sum_identity_check(const MapPair& f, const RationalPoint& z, const RationalPoint& w,
                                       double tol) {
    const GlobalHeight gh(f);
    const Lift zl = z.lift();
    const Lift wl = w.lift();
    const Rat wz = wedge(zl, wl);
    if (wz == 0) throw DomainError("green_sum_identity_check: z and w coincide");

    std::set<Int> primes(gh.bad_primes().begin(), gh.bad_primes().end());
    for (const auto& p : prime_divisors(wz.get_num())) primes.insert(p);

    std::vector<Place> places{Place::archimedean()};
    for (const auto& p : primes) places.push_back(Place::finite(p));
    const double each = tol / static_cast<double>(places.size() + 2);

    GreenSumCheck out;
    std::vector<double> parts;
    for (const auto& v : places) {
        const bool bad = v.is_archimedean() ||
                         std::binary_search(gh.bad_primes().begin(), gh.bad_primes().end(), v.prime());
        const GreenValue g = bad ? green(gh.local(v), zl, wl, each) : green(LocalHeight(gh.integral_map(), v), zl, wl, each);
        out.terms.push_back({v, g.value, g.err});
        parts.push_back(g.value);
        out.err += g.err;
    }
    out.green_sum = detail::pairwise_sum(parts.data(), parts.size());
    const HeightValue hz = gh(z, each);
    const HeightValue hw = gh(w, each);
    out.height_sum = hz.value + hw.value;
    out.err += hz.err + hw.err;
    out.residual = std::abs(out.green_sum - out.height_sum);
    return out;
}

std::string to_string(Preperiodicity p) {
    switch (p) {
        case Preperiodicity::preperiodic: return "preperiodic";
        case Preperiodicity::wandering: return "wandering";
        case Preperiodicity::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

PreperiodicResult detect(const MapPair& g, const Int& res, double height_cut, const RationalPoint& point,
                         int max_steps, const Limits& limits) {
    PreperiodicResult out;
    std::map<RationalPoint, int> seen{{point, 0}};
    RationalPoint q = point;
    for (int n = 0;; ++n) {
        out.steps = n;
        if (q.naive_height() > height_cut) {
            out.status = Preperiodicity::wandering;
            return out;
        }
        if (n >= max_steps) return out;
        if (std::max(int_bits(q.a()), int_bits(q.b())) * static_cast<std::size_t>(g.degree()) > limits.max_orbit_bits)
            return out;
        q = step(g, res, q);
        auto [it, fresh] = seen.emplace(q, n + 1);
        if (!fresh) {
            out.status = Preperiodicity::preperiodic;
            out.steps = n + 1;
            out.preperiod = it->second;
            out.period = n + 1 - it->second;
            return out;
        }
    }
}

}  // namespace

PreperiodicResult preperiodic_detect(const MapPair& f, const RationalPoint& point, int max_steps,
                                     const Limits& limits) {
    const GlobalHeight gh(f);
    const Int res = abs(gh.integral_map().resultant().get_num());
    const double cut = gh.lower_gap() / (gh.integral_map().degree() - 1) + 1e-12;
    return detect(gh.integral_map(), res, cut, point, max_steps, limits);
}

CensusResult small_point_census(const MapPair& f, double B, double theta, double tol, unsigned workers,
                                const Limits& limits) {
    if (!std::isfinite(B) || B < 0.0) throw DomainError("small_point_census: B must be finite and >= 0");
    if (!std::isfinite(theta)) throw DomainError("small_point_census: theta must be finite");
    const double box_d = std::floor(std::exp(B) + 1e-9);
    if (box_d > 1e9) throw ResourceError("small_point_census: box too large");
    const long box = static_cast<long>(box_d);
    const double expected = (2.0 * box_d + 1.0) * (box_d + 1.0);
    if (expected * 0.61 > static_cast<double>(limits.max_census_points) * 1.0 && expected > 64.0)
        throw ResourceError("small_point_census: more than " + std::to_string(limits.max_census_points) +
                            " points");

    const GlobalHeight gh(f);
    const Int res = abs(gh.integral_map().resultant().get_num());
    const double cut = gh.lower_gap() / (gh.integral_map().degree() - 1) + 1e-12;

    CensusResult out;
    out.B = B;
    out.theta = theta;
    out.box = box;

    // Row b in [0, box]; row 0 holds only [1:0].
    struct Row {
        std::size_t enumerated = 0;
        std::vector<CensusEntry> witnesses;
        std::optional<CensusEntry> min_positive;
    };
    std::vector<Row> rows(static_cast<std::size_t>(box) + 1);
    detail::parallel_for(rows.size(), workers, [&](std::size_t bi) {
        Row& row = rows[bi];
        const long b = static_cast<long>(bi);
        auto visit = [&](long a) {
            const RationalPoint P{Int(a), Int(b)};
            ++row.enumerated;
            const HeightValue h = gh(P, tol);
            if (h.value <= theta) {
                CensusEntry e{P, h.value, h.err, Preperiodicity::inconclusive};
                e.preperiodic = detect(gh.integral_map(), res, cut, P, 64, limits).status;
                row.witnesses.push_back(std::move(e));
            }
            if (h.value > h.err && (!row.min_positive || h.value < row.min_positive->hhat))
                row.min_positive = CensusEntry{P, h.value, h.err, Preperiodicity::wandering};
        };
        if (b == 0) {
            visit(1);
            return;
        }
        for (long a = -box; a <= box; ++a)
            if (std::gcd(a < 0 ? -a : a, b) == 1) visit(a);
    });

    for (auto& row : rows) {
        out.enumerated += row.enumerated;
        for (auto& e : row.witnesses) out.witnesses.push_back(std::move(e));
        if (row.min_positive && (!out.min_positive_height || row.min_positive->hhat < *out.min_positive_height)) {
            out.min_positive_height = row.min_positive->hhat;
            out.min_positive_point = row.min_positive->point;
        }
    }
    return out;
}

MapPair lattes_from_curve(const Rat& a, const Rat& b) {
    const Rat disc = 4 * a * a * a + 27 * b * b;
    if (disc == 0) throw DomainError("lattes_from_curve: singular curve (4a^3 + 27b^2 = 0)");
    BinaryForm f1({Rat(1), Rat(0), Rat(-2 * a), Rat(-8 * b), Rat(a * a)});
    BinaryForm f2({Rat(0), Rat(4), Rat(0), Rat(4 * a), Rat(4 * b)});
    return MapPair(std::move(f1), std::move(f2));
}

}  // namespace dyngreen
