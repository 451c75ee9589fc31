#pragma once

// Minimal RAII wrapper over mpfr_t with a fixed precision per value.

#include <gmp.h>
#include <mpfr.h>

#include <gmpxx.h>

namespace dyngreen::detail {

class MpfrReal {
public:
    explicit MpfrReal(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_ui(v_, 0, MPFR_RNDN); }
    MpfrReal(const mpq_class& q, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
    MpfrReal(const MpfrReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    MpfrReal& operator=(const MpfrReal& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    ~MpfrReal() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    MpfrReal& operator+=(const MpfrReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    MpfrReal& operator*=(const MpfrReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    MpfrReal& operator/=(const MpfrReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    MpfrReal& div_ui(unsigned long d) { mpfr_div_ui(v_, v_, d, MPFR_RNDN); return *this; }

    friend MpfrReal operator+(MpfrReal a, const MpfrReal& b) { return a += b; }
    friend MpfrReal operator*(MpfrReal a, const MpfrReal& b) { return a *= b; }
    friend MpfrReal operator/(MpfrReal a, const MpfrReal& b) { return a /= b; }
    friend bool operator<(const MpfrReal& a, const MpfrReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }

    MpfrReal abs() const { MpfrReal r(precision()); mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
    MpfrReal log() const { MpfrReal r(precision()); mpfr_log(r.v_, v_, MPFR_RNDN); return r; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }

private:
    mpfr_t v_;
};

}  // namespace dyngreen::detail
