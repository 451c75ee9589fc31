#include "dyngreen/dynheight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpfr_real.hpp"

namespace dyngreen {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double log_sum_abs(const BinaryForm& f) {
    Rat s(0);
    for (const auto& c : f.coeffs()) s += abs(c);
    return log_abs(s);
}

double log_cofactor_bound_arch(const CofactorIdentity& c) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto* g : {&c.g11, &c.g12, &c.g21, &c.g22}) {
        if (!g->is_zero()) best = std::max(best, log_sum_abs(*g));
    }
    return best;
}

long min_valuation(const BinaryForm& f, const Int& p) {
    long best = std::numeric_limits<long>::max();
    for (const auto& c : f.coeffs()) {
        if (c != 0) best = std::min(best, valuation(c, p));
    }
    return best;
}

long min_valuation(const CofactorIdentity& c, const Int& p) {
    long best = std::numeric_limits<long>::max();
    for (const auto* g : {&c.g11, &c.g12, &c.g21, &c.g22}) best = std::min(best, min_valuation(*g, p));
    return best;
}

// v_p of an integer known modulo p^precision; returns `precision` for 0.
long valuation_mod(const Int& x, const Int& p, long precision) {
    if (x == 0) return precision;
    return std::min(valuation(x, p), precision);
}

Int reduce_mod(const Rat& x, const Int& modulus) {
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), x.get_den_mpz_t(), modulus.get_mpz_t()) == 0) {
        throw DomainError("denominator is not a unit at this place");
    }
    Int out = Int(x.get_num()) * inv;
    mpz_mod(out.get_mpz_t(), out.get_mpz_t(), modulus.get_mpz_t());
    return out;
}

std::vector<long double> to_long_doubles(const BinaryForm& f) {
    std::vector<long double> out;
    mpfr_t x;
    mpfr_init2(x, 128);
    for (const auto& c : f.coeffs()) {
        mpfr_set_q(x, c.get_mpq_t(), MPFR_RNDN);
        out.push_back(mpfr_get_ld(x, MPFR_RNDN));
    }
    mpfr_clear(x);
    return out;
}

}  // namespace

LocalHeight::LocalHeight(const MapPair& f, const Place& v) : map_(f), place_(v) {
    const int d = f.degree();
    const double dd = static_cast<double>(d);
    r_ = log_abs(f.resultant(), v).value / (dd * (dd - 1.0));
    const auto cof = cofactors(f);
    if (v.is_archimedean()) {
        f1d_ = to_doubles(f.f1());
        f2d_ = to_doubles(f.f2());
        f1l_ = to_long_doubles(f.f1());
        f2l_ = to_long_doubles(f.f2());
        const double log_cg = log_cofactor_bound_arch(cof);
        const double log_res = log_abs(f.resultant());
        log_upper_ = std::max(log_sum_abs(f.f1()), log_sum_abs(f.f2()));
        log_lower_ = log_res - std::log(2.0) - log_cg;
        escape_.C_g = std::exp(log_cg);
        escape_.log_R_up = (std::log(4.0) + log_cg - log_res) / (dd - 1.0);
    } else {
        const Int& p = v.prime();
        const double lp = v.log_prime();
        const long vres = valuation(f.resultant(), p);
        const long vcof = min_valuation(cof, p);
        const long vf = std::min(min_valuation(f.f1(), p), min_valuation(f.f2(), p));
        log_upper_ = -static_cast<double>(vf) * lp;
        log_lower_ = -static_cast<double>(vres - vcof) * lp;
        escape_.C_g = std::exp(-static_cast<double>(vcof) * lp);
        escape_.log_R_up = static_cast<double>(vres - vcof) * lp / (dd - 1.0);

        auto norm = integer_normalization(f);
        scale_valuation_ = valuation(norm.scale, p);
        const auto int_cof = cofactors(norm.map);
        jump_ = valuation(norm.map.resultant(), p) - min_valuation(int_cof, p);
        integral_.emplace(std::move(norm.map));
    }
    escape_.R_up = std::exp(escape_.log_R_up);
}

int LocalHeight::steps_for(double half_width, double tol) const {
    const double d = static_cast<double>(degree());
    if (half_width <= 0.0) return 1;
    const double n = std::ceil(std::log(half_width / ((d - 1.0) * tol)) / std::log(d));
    return std::max(1, static_cast<int>(n));
}

HeightValue LocalHeight::operator()(const Lift& z, double tol, unsigned precision_bits) const {
    if (z.is_zero()) throw DomainError("height of the zero lift");
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    if (place_.is_archimedean()) return arch_rational(z, tol, precision_bits);
    return finite_rational(z, tol);
}

HeightValue LocalHeight::operator()(const ComplexLift& z, double tol) const {
    if (!place_.is_archimedean()) throw DomainError("complex lifts are only supported at the archimedean place");
    if (z.z0 == 0.0 && z.z1 == 0.0) throw DomainError("height of the zero lift");
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    return arch_complex(z, tol);
}

namespace {

struct SeriesSum {
    double sum = 0.0;
    double mass = 0.0;
};

// sum_{n<steps} d^-(n+1) log||F(u_n)|| with u_{n+1} = F(u_n)/||F(u_n)||, evaluated in T.
template <class T>
SeriesSum arch_series(const std::vector<T>& c1, const std::vector<T>& c2, std::complex<T> u0, std::complex<T> u1,
                      int d, int steps) {
    using C = std::complex<T>;
    T sum = 0, w = 1;
    double mass = 0.0;
    for (int n = 0; n < steps; ++n) {
        w /= d;
        const C a = eval_form<C>(c1, u0, u1);
        const C b = eval_form<C>(c2, u0, u1);
        const T nrm = std::max(std::abs(a), std::abs(b));
        const T t = std::log(nrm);
        sum += w * t;
        mass += static_cast<double>(w * (1 + std::abs(t)));
        u0 = a / nrm;
        u1 = b / nrm;
    }
    return {static_cast<double>(sum), mass};
}

}  // namespace

// Telescoping series on unit-normalized iterates:
//   Hhat(z) = log||z|| + sum_{n>=0} d^-(n+1) log||F(u_n)||,  u_{n+1} = F(u_n)/||F(u_n)||.
// Rounding can be amplified along the orbit, so the series is also run in
// long double and the discrepancy is charged to the error.
HeightValue LocalHeight::arch_complex(const ComplexLift& z, double tol) const {
    const int d = degree();
    const double half = 0.5 * (log_upper_ - log_lower_);
    const double mid = 0.5 * (log_upper_ + log_lower_);
    const int steps = steps_for(half, 0.5 * tol);

    const double norm = std::max(std::abs(z.z0), std::abs(z.z1));
    const double log_norm = std::log(norm);
    const auto s = arch_series<double>(f1d_, f2d_, z.z0 / norm, z.z1 / norm, d, steps);
    const std::complex<long double> l0(z.z0.real(), z.z0.imag()), l1(z.z1.real(), z.z1.imag());
    const auto ls = arch_series<long double>(f1l_, f2l_, l0 / static_cast<long double>(norm),
                                             l1 / static_cast<long double>(norm), d, steps);
    const double tail_weight = std::pow(static_cast<double>(d), -steps) / (d - 1.0);
    HeightValue out;
    out.place = place_;
    out.iterations = steps;
    out.value = log_norm + s.sum + mid * tail_weight;
    const double rounding =
        16.0 * kEps * (std::abs(log_norm) + steps * (1.0 + std::abs(out.value)) + (d + 4.0) * s.mass);
    out.err = half * tail_weight + rounding + 2.0 * std::abs(s.sum - ls.sum);
    return out;
}

HeightValue LocalHeight::arch_rational(const Lift& z, double tol, unsigned precision_bits) const {
    if (precision_bits > 53) return arch_mpfr(z, tol, precision_bits);
    const Rat norm = std::max(abs(z.z0), abs(z.z1));
    auto h = arch_complex(ComplexLift{Rat(z.z0 / norm).get_d(), Rat(z.z1 / norm).get_d()}, tol);
    const double log_norm = log_abs(norm);
    h.value += log_norm;
    h.err += 4.0 * kEps * std::abs(log_norm);
    // Escalate when rounding amplified along the orbit dominates.
    for (unsigned bits = 128; h.err > tol && bits <= 4096; bits *= 2) {
        auto m = arch_mpfr(z, tol, bits);
        if (m.err < h.err) h = m;
    }
    return h;
}

// Same series in MPFR, run at two precisions so amplified rounding shows up in err.
HeightValue LocalHeight::arch_mpfr(const Lift& z, double tol, unsigned precision_bits) const {
    using detail::MpfrReal;
    const int d = degree();
    const double half = 0.5 * (log_upper_ - log_lower_);
    const double mid = 0.5 * (log_upper_ + log_lower_);
    const int steps = steps_for(half, 0.5 * tol);
    const Rat norm = std::max(abs(z.z0), abs(z.z1));

    double mass = 0.0;
    auto run = [&](mpfr_prec_t bits) {
        std::vector<MpfrReal> c1, c2;
        for (const auto& c : map_.f1().coeffs()) c1.emplace_back(c, bits);
        for (const auto& c : map_.f2().coeffs()) c2.emplace_back(c, bits);
        auto eval = [&](const std::vector<MpfrReal>& c, const MpfrReal& x, const MpfrReal& y) {
            MpfrReal acc = c.front();
            MpfrReal ypow(Rat(1), bits);
            for (std::size_t i = 1; i < c.size(); ++i) {
                ypow *= y;
                acc = acc * x + c[i] * ypow;
            }
            return acc;
        };
        MpfrReal u0(z.z0 / norm, bits);
        MpfrReal u1(z.z1 / norm, bits);
        MpfrReal sum(bits);
        MpfrReal w(Rat(1), bits);
        mass = 0.0;
        for (int n = 0; n < steps; ++n) {
            w.div_ui(static_cast<unsigned long>(d));
            MpfrReal a = eval(c1, u0, u1);
            MpfrReal b = eval(c2, u0, u1);
            MpfrReal nrm = std::max(a.abs(), b.abs());
            MpfrReal t = nrm.log();
            sum += w * t;
            mass += w.to_double() * (1.0 + std::abs(t.to_double()));
            u0 = a / nrm;
            u1 = b / nrm;
        }
        MpfrReal tail = w;
        tail.div_ui(static_cast<unsigned long>(d - 1));
        return MpfrReal(norm, bits).log() + sum + tail * MpfrReal(Rat(mid), bits);
    };

    const auto bits = static_cast<mpfr_prec_t>(precision_bits);
    const double coarse = run(bits).to_double();
    const double fine = run(bits + 32).to_double();
    HeightValue out;
    out.place = place_;
    out.iterations = steps;
    out.value = fine;
    const double unit = std::ldexp(1.0, -static_cast<int>(precision_bits));
    out.err = half * std::pow(static_cast<double>(d), -steps) / (d - 1.0) +
              16.0 * unit * (std::abs(log_abs(norm)) + steps + (d + 4.0) * mass) + 2.0 * std::abs(fine - coarse) +
              kEps * std::abs(out.value);
    return out;
}

// Valuation recursion on p-adic integral coordinates known modulo p^M:
//   Hhat(z) = -log p * (v_min(z) + sum_{n>=0} d^-(n+1) v_n),
// where v_n = v_min(F(u_n)) in [0, e] and u_{n+1} = F(u_n) / p^(v_n).
// Each step consumes at most e digits of precision.
HeightValue LocalHeight::finite_rational(const Lift& z, double tol) const {
    const Int& p = place_.prime();
    const double lp = place_.log_prime();
    const int d = degree();
    const double shift = static_cast<double>(scale_valuation_) * lp / (d - 1.0);

    long vz = std::numeric_limits<long>::max();
    if (z.z0 != 0) vz = std::min(vz, valuation(z.z0, p));
    if (z.z1 != 0) vz = std::min(vz, valuation(z.z1, p));

    HeightValue out;
    out.place = place_;
    if (jump_ == 0) {
        out.value = -static_cast<double>(vz) * lp + shift;
        return out;
    }

    const double half = 0.5 * static_cast<double>(jump_) * lp;
    const int steps = steps_for(half, tol);
    long precision = jump_ * steps + 1;
    Int modulus;
    mpz_pow_ui(modulus.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(precision));

    Rat scale(1);
    if (vz >= 0) {
        mpz_pow_ui(scale.get_den_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(vz));
    } else {
        mpz_pow_ui(scale.get_num_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(-vz));
    }
    Int a = reduce_mod(z.z0 * scale, modulus);
    Int b = reduce_mod(z.z1 * scale, modulus);

    const auto& f1 = integral_->f1();
    const auto& f2 = integral_->f2();
    double sum = 0.0;
    double w = 1.0;
    for (int n = 0; n < steps; ++n) {
        w /= d;
        Int fa = f1(a, b);
        Int fb = f2(a, b);
        mpz_mod(fa.get_mpz_t(), fa.get_mpz_t(), modulus.get_mpz_t());
        mpz_mod(fb.get_mpz_t(), fb.get_mpz_t(), modulus.get_mpz_t());
        const long vn = std::min(valuation_mod(fa, p, precision), valuation_mod(fb, p, precision));
        if (vn > jump_) throw ConvergenceError("p-adic valuation step exceeded the cofactor bound");
        sum += w * static_cast<double>(vn);
        Int unit;
        mpz_pow_ui(unit.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(vn));
        mpz_divexact(modulus.get_mpz_t(), modulus.get_mpz_t(), unit.get_mpz_t());
        mpz_divexact(a.get_mpz_t(), fa.get_mpz_t(), unit.get_mpz_t());
        mpz_divexact(b.get_mpz_t(), fb.get_mpz_t(), unit.get_mpz_t());
        mpz_mod(a.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t());
        mpz_mod(b.get_mpz_t(), b.get_mpz_t(), modulus.get_mpz_t());
        precision -= vn;
    }
    const double tail_weight = w / (d - 1.0);
    const double mid_valuation = 0.5 * static_cast<double>(jump_);
    out.iterations = steps;
    out.value = -lp * (static_cast<double>(vz) + sum + mid_valuation * tail_weight) + shift;
    out.err = half * tail_weight + 8.0 * kEps * (std::abs(out.value) + lp * (std::abs(static_cast<double>(vz)) + 1.0));
    return out;
}

HeightValue hhat(const MapPair& f, const Lift& z, const Place& v, double tol, unsigned precision_bits) {
    return LocalHeight(f, v)(z, tol, precision_bits);
}

HeightValue hhat(const MapPair& f, const ComplexLift& z, double tol) {
    return LocalHeight(f, Place::archimedean())(z, tol);
}

double r_of(const MapPair& f, const Place& v) {
    const double d = static_cast<double>(f.degree());
    return log_abs(f.resultant(), v).value / (d * (d - 1.0));
}

GreenValue green(const LocalHeight& h, const Lift& z, const Lift& w, double tol) {
    const Rat wz = wedge(z, w);
    if (wz == 0) return {std::numeric_limits<double>::infinity(), 0.0, true};
    const auto hz = h(z, tol);
    const auto hw = h(w, tol);
    GreenValue g;
    const double lw = log_abs(wz, h.place()).value;
    g.value = -lw + hz.value + hw.value - h.r();
    g.err = hz.err + hw.err + 4.0 * kEps * (std::abs(lw) + std::abs(h.r()) + std::abs(g.value));
    return g;
}

GreenValue green(const LocalHeight& h, const ComplexLift& z, const ComplexLift& w, double tol) {
    const auto wz = wedge(z, w);
    if (wz == 0.0) return {std::numeric_limits<double>::infinity(), 0.0, true};
    const auto hz = h(z, tol);
    const auto hw = h(w, tol);
    GreenValue g;
    const double lw = std::log(std::abs(wz));
    g.value = -lw + hz.value + hw.value - h.r();
    g.err = hz.err + hw.err + 4.0 * kEps * (std::abs(lw) + std::abs(h.r()) + std::abs(g.value));
    return g;
}

GreenValue green(const MapPair& f, const Lift& z, const Lift& w, const Place& v, double tol) {
    return green(LocalHeight(f, v), z, w, tol);
}

GreenValue green(const MapPair& f, const ComplexLift& z, const ComplexLift& w, double tol) {
    return green(LocalHeight(f, Place::archimedean()), z, w, tol);
}

namespace {

MembershipResult classify(const HeightValue& h, double tol) {
    MembershipResult out;
    out.height = h;
    if (std::abs(h.value) <= tol + h.err) {
        out.kind = Membership::boundary;
    } else {
        out.kind = h.value < 0.0 ? Membership::in : Membership::out;
    }
    return out;
}

}  // namespace

MembershipResult filled_julia_member(const MapPair& f, const Lift& z, const Place& v, double tol) {
    return classify(hhat(f, z, v, tol), tol);
}

MembershipResult filled_julia_member(const MapPair& f, const ComplexLift& z, double tol) {
    return classify(hhat(f, z, tol), tol);
}

ComplexLift normalize_lift(const LocalHeight& h, const ComplexLift& z, double tol) {
    const double s = std::exp(-h(z, tol).value);
    return {z.z0 * s, z.z1 * s};
}

ComplexLift normalize_lift(const MapPair& f, const ComplexLift& z, double tol) {
    return normalize_lift(LocalHeight(f, Place::archimedean()), z, tol);
}

NormalizedLift normalize_lift(const LocalHeight& h, const Lift& z, double tol) {
    if (!h.place().is_finite()) throw DomainError("rational window normalization needs a finite place");
    const Int& p = h.place().prime();
    const double lp = h.place().log_prime();
    const auto base = h(z, tol);
    // Hhat = -V log p; scaling by p^m moves V to V + m, and we want V + m in [0, 1).
    const double v = -base.value / lp;
    const double slack = base.err / lp + 1e-9;
    const long m = -static_cast<long>(std::floor(v + slack));
    NormalizedLift out;
    out.shift = m;
    Rat factor(1);
    if (m >= 0) {
        mpz_pow_ui(factor.get_num_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(m));
    } else {
        mpz_pow_ui(factor.get_den_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(-m));
    }
    out.lift = {z.z0 * factor, z.z1 * factor};
    out.height = base;
    out.height.value = base.value - static_cast<double>(m) * lp;
    out.window_deviation = std::abs(v + static_cast<double>(m)) > slack;
    return out;
}

NormalizedLift normalize_lift(const MapPair& f, const Lift& z, const Place& v, double tol) {
    return normalize_lift(LocalHeight(f, v), z, tol);
}

EscapeBound escape_radius_bound(const MapPair& f, const Place& v) { return LocalHeight(f, v).escape_bound(); }

}  // namespace dyngreen
