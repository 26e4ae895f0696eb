#pragma once

// Thin RAII holder over an mpfr_t. Private to the library.

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace jlm::detail {

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  BigFloat(const mpq_class& q, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  BigFloat(double d, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat pi(mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  BigFloat& operator+=(const BigFloat& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator-=(const BigFloat& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator*=(const BigFloat& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator/=(const BigFloat& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator*=(const mpq_class& q) { mpfr_mul_q(v_, v_, q.get_mpq_t(), MPFR_RNDN); return *this; }

  friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
  friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
  friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
  friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }

  BigFloat tanh() const { BigFloat r(precision()); mpfr_tanh(r.v_, v_, MPFR_RNDN); return r; }
  BigFloat coth() const { BigFloat r(precision()); mpfr_coth(r.v_, v_, MPFR_RNDN); return r; }
  BigFloat log() const { BigFloat r(precision()); mpfr_log(r.v_, v_, MPFR_RNDN); return r; }
  BigFloat log1p() const { BigFloat r(precision()); mpfr_log1p(r.v_, v_, MPFR_RNDN); return r; }
  BigFloat exp() const { BigFloat r(precision()); mpfr_exp(r.v_, v_, MPFR_RNDN); return r; }
  BigFloat expm1() const { BigFloat r(precision()); mpfr_expm1(r.v_, v_, MPFR_RNDN); return r; }
  BigFloat abs() const { BigFloat r(precision()); mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
  BigFloat pow_si(long k) const {
    BigFloat r(precision());
    mpfr_pow_si(r.v_, v_, k, MPFR_RNDN);
    return r;
  }

  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  double to_double_up() const { return mpfr_get_d(v_, MPFR_RNDU); }

  /// Exact rational value of the binary float.
  mpq_class to_mpq() const {
    if (mpfr_zero_p(v_)) return 0;
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
    mpq_class r(m);
    if (e >= 0) {
      mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
    } else {
      mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
    }
    return r;
  }

  /// Scientific notation with `digits` significant digits.
  std::string to_string(int digits) const;

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

/// Binary precision sufficient for the requested decimal digits plus guard bits.
inline mpfr_prec_t bits_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(digits * 3.3219280948873623) + 32;
}

}  // namespace jlm::detail
