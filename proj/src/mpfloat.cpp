#include "anosovkit/mpfloat.hpp"

#include <vector>

namespace anosovkit {

std::string MpFloat::str(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, v_);
  return std::string(buf.data());
}

namespace mp {

namespace {
long max_prec(const MpFloat& a, const MpFloat& b) { return std::max(a.precision(), b.precision()); }
}  // namespace

MpFloat add(const MpFloat& a, const MpFloat& b, mpfr_rnd_t rnd) {
  MpFloat r(max_prec(a, b));
  mpfr_add(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}

MpFloat sub(const MpFloat& a, const MpFloat& b, mpfr_rnd_t rnd) {
  MpFloat r(max_prec(a, b));
  mpfr_sub(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}

MpFloat mul(const MpFloat& a, const MpFloat& b, mpfr_rnd_t rnd) {
  MpFloat r(max_prec(a, b));
  mpfr_mul(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}

MpFloat div(const MpFloat& a, const MpFloat& b, mpfr_rnd_t rnd) {
  MpFloat r(max_prec(a, b));
  mpfr_div(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}

MpFloat hypot(const MpFloat& a, const MpFloat& b, mpfr_rnd_t rnd) {
  MpFloat r(max_prec(a, b));
  mpfr_hypot(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}

MpFloat rootn(const MpFloat& a, unsigned long k, mpfr_rnd_t rnd) {
  MpFloat r(a.precision());
  mpfr_rootn_ui(r.raw(), a.raw(), k, rnd);
  return r;
}

MpFloat pow_si(const MpFloat& a, long k, mpfr_rnd_t rnd) {
  MpFloat r(a.precision());
  mpfr_pow_si(r.raw(), a.raw(), k, rnd);
  return r;
}

MpFloat from_rational(const Rational& q, long bits, mpfr_rnd_t rnd) {
  // Numerator and denominator are converted with enough precision to be exact,
  // then divided once under the requested rounding.
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  const long nb = static_cast<long>(num == 0 ? 1 : boost::multiprecision::msb(abs(num)) + 2);
  const long db = static_cast<long>(boost::multiprecision::msb(den) + 2);
  MpFloat n(num, nb);
  MpFloat d(den, db);
  MpFloat r(bits);
  mpfr_div(r.raw(), n.raw(), d.raw(), rnd);
  return r;
}

}  // namespace mp
}  // namespace anosovkit
