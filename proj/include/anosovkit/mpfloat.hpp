#pragma once

#include <algorithm>
#include <string>
#include <utility>

#include <mpfr.h>

#include "anosovkit/intpoly.hpp"

namespace anosovkit {

/// Owning wrapper around an mpfr_t. Every value carries its own precision;
/// binary operations produce a result at the larger operand precision and
/// round to nearest.
class MpFloat {
 public:
  explicit MpFloat(long bits = 53) { mpfr_init2(v_, clamp(bits)); mpfr_set_zero(v_, 1); }
  MpFloat(double x, long bits) { mpfr_init2(v_, clamp(bits)); mpfr_set_d(v_, x, MPFR_RNDN); }
  MpFloat(const BigInt& x, long bits, mpfr_rnd_t rnd = MPFR_RNDN) {
    mpfr_init2(v_, clamp(bits));
    mpfr_set_str(v_, x.str().c_str(), 10, rnd);
  }
  MpFloat(const std::string& decimal, long bits) {
    mpfr_init2(v_, clamp(bits));
    mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN);
  }
  MpFloat(const MpFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  MpFloat(MpFloat&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  MpFloat& operator=(const MpFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  MpFloat& operator=(MpFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~MpFloat() { mpfr_clear(v_); }

  long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }
  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }
  /// Scientific notation with `digits` significant digits.
  std::string str(int digits = 20) const;
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  friend MpFloat operator+(const MpFloat& a, const MpFloat& b) { return binary(mpfr_add, a, b); }
  friend MpFloat operator-(const MpFloat& a, const MpFloat& b) { return binary(mpfr_sub, a, b); }
  friend MpFloat operator*(const MpFloat& a, const MpFloat& b) { return binary(mpfr_mul, a, b); }
  friend MpFloat operator/(const MpFloat& a, const MpFloat& b) { return binary(mpfr_div, a, b); }
  friend MpFloat operator-(const MpFloat& a) {
    MpFloat r(a.precision());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  MpFloat& operator+=(const MpFloat& o) { return *this = *this + o; }
  MpFloat& operator-=(const MpFloat& o) { return *this = *this - o; }
  MpFloat& operator*=(const MpFloat& o) { return *this = *this * o; }
  MpFloat& operator/=(const MpFloat& o) { return *this = *this / o; }

  friend bool operator<(const MpFloat& a, const MpFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const MpFloat& a, const MpFloat& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const MpFloat& a, const MpFloat& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const MpFloat& a, const MpFloat& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const MpFloat& a, const MpFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  friend MpFloat abs(const MpFloat& a) {
    MpFloat r(a.precision());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpFloat sqrt(const MpFloat& a) {
    MpFloat r(a.precision());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

 private:
  static mpfr_prec_t clamp(long bits) { return static_cast<mpfr_prec_t>(std::max<long>(bits, MPFR_PREC_MIN)); }

  template <class Fn>
  static MpFloat binary(Fn fn, const MpFloat& a, const MpFloat& b) {
    MpFloat r(std::max(a.precision(), b.precision()));
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
};

/// Directed-rounding helpers for building rigorous interval endpoints.
namespace mp {
MpFloat add(const MpFloat& a, const MpFloat& b, mpfr_rnd_t rnd);
MpFloat sub(const MpFloat& a, const MpFloat& b, mpfr_rnd_t rnd);
MpFloat mul(const MpFloat& a, const MpFloat& b, mpfr_rnd_t rnd);
MpFloat div(const MpFloat& a, const MpFloat& b, mpfr_rnd_t rnd);
MpFloat hypot(const MpFloat& a, const MpFloat& b, mpfr_rnd_t rnd);
/// a^(1/k) for a >= 0.
MpFloat rootn(const MpFloat& a, unsigned long k, mpfr_rnd_t rnd);
/// a^k for integer k (may be negative).
MpFloat pow_si(const MpFloat& a, long k, mpfr_rnd_t rnd);
/// Exact conversion of a rational number's endpoints: round in direction rnd.
MpFloat from_rational(const Rational& q, long bits, mpfr_rnd_t rnd);
}  // namespace mp

}  // namespace anosovkit
