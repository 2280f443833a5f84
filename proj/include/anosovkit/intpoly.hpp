#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

namespace anosovkit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Thrown when an operation's algebraic precondition does not hold
/// (non-monic input, unit constant term required, degree limits).
class PolyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown by parse_poly; `position` is the 0-based offset of the offending
/// character in the input text.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Univariate polynomial with arbitrary-precision integer coefficients.
///
/// Coefficients are stored in ascending order (constant term first) and the
/// representation is canonical: the leading coefficient is never zero. The
/// zero polynomial has no coefficients and degree -1.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coeffs);
  IntPolynomial(std::initializer_list<long long> coeffs);

  static IntPolynomial monomial(int degree, BigInt coeff = 1);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }

  const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }
  /// Coefficient of X^i; zero beyond the degree.
  BigInt coeff(int i) const;
  const BigInt& leading() const;
  BigInt constant_term() const { return coeff(0); }

  IntPolynomial derivative() const;

  BigInt evaluate(const BigInt& x) const;
  Rational evaluate(const Rational& x) const;
  std::complex<double> evaluate(std::complex<double> x) const;

  /// Human-readable form, e.g. "x^3 - x - 1". parse_poly(render()) == *this.
  std::string render(char var = 'x') const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;
  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const BigInt& c, const IntPolynomial& p);

 private:
  void trim();
  std::vector<BigInt> coeffs_;
};

/// Accepts either an ascending comma-separated coefficient list ("1,-3,1")
/// (optionally in brackets, "[1,-3,1]") or an expression such as "x^2 - 3x + 1" / "X^3-2*X^2+X-1".
IntPolynomial parse_poly(std::string_view text);

/// X^deg * P(1/X). With `normalize_sign` the result is multiplied by P(0)
/// when P(0) = -1 so that it is monic again.
/// Requires P monic with P(0) = +-1.
IntPolynomial reverse(const IntPolynomial& p, bool normalize_sign = true);

/// Power sums p_1..p_k of the roots of a monic P via Newton's recurrence.
std::vector<BigInt> power_sums(const IntPolynomial& p, int k);

/// Monic polynomial whose roots are the m-th powers of the roots of P,
/// obtained exactly from the power sums p_m, p_2m, ..., p_nm.
IntPolynomial power_transform(const IntPolynomial& p, int m);

/// Sylvester resultant, computed by fraction-free Gaussian elimination.
BigInt resultant(const IntPolynomial& a, const IntPolynomial& b);

/// (-1)^(n(n-1)/2) Res(P, P') / lc(P).
BigInt discriminant(const IntPolynomial& p);

/// Quotient of a by b if b divides a exactly over Z, std::nullopt otherwise.
/// b must be monic.
std::optional<IntPolynomial> exact_divide(const IntPolynomial& a, const IntPolynomial& b);

struct Factorization {
  bool irreducible = false;
  /// Monic irreducible factors in discovery order (product equals the input).
  std::vector<IntPolynomial> factors;
};

/// Brute-force factor search over all monic candidate divisors of degree
/// <= deg/2 whose coefficients satisfy the Mignotte bound. Exponential; meant
/// as a trusted oracle, not a production factorizer.
Factorization factor_oracle(const IntPolynomial& p, int max_degree = 8);

/// Coefficients as JSON numbers when they fit in 64 bits, decimal strings otherwise.
nlohmann::json bigint_to_json(const BigInt& v);
nlohmann::json to_json(const IntPolynomial& p);
IntPolynomial poly_from_json(const nlohmann::json& j);

}  // namespace anosovkit
