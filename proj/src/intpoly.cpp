#include "anosovkit/intpoly.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <sstream>

namespace anosovkit {

IntPolynomial::IntPolynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

IntPolynomial::IntPolynomial(std::initializer_list<long long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long long c : coeffs) coeffs_.emplace_back(c);
  trim();
}

IntPolynomial IntPolynomial::monomial(int degree, BigInt coeff) {
  if (degree < 0) throw PolyError("monomial: negative degree");
  std::vector<BigInt> c(static_cast<std::size_t>(degree) + 1);
  c.back() = std::move(coeff);
  return IntPolynomial(std::move(c));
}

void IntPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

BigInt IntPolynomial::coeff(int i) const {
  if (i < 0 || i > degree()) return 0;
  return coeffs_[static_cast<std::size_t>(i)];
}

const BigInt& IntPolynomial::leading() const {
  if (coeffs_.empty()) throw PolyError("leading coefficient of the zero polynomial");
  return coeffs_.back();
}

IntPolynomial IntPolynomial::derivative() const {
  if (degree() < 1) return {};
  std::vector<BigInt> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<long long>(i);
  return IntPolynomial(std::move(d));
}

BigInt IntPolynomial::evaluate(const BigInt& x) const {
  BigInt acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Rational IntPolynomial::evaluate(const Rational& x) const {
  // Horner on n/d: acc = sum c_i n^i d^(deg-i), result = acc / d^deg.
  if (coeffs_.empty()) return Rational(0);
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  BigInt acc = 0;
  BigInt den_pow = 1;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * num + *it * den_pow;
    den_pow *= den;
  }
  den_pow /= den;
  return Rational(acc, den_pow);
}

std::complex<double> IntPolynomial::evaluate(std::complex<double> x) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->convert_to<double>();
  return acc;
}

std::string IntPolynomial::render(char var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const BigInt& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    BigInt mag = abs(c);
    if (first) {
      if (c < 0) out << '-';
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (mag != 1 || i == 0) out << mag;
    if (i >= 1) out << var;
    if (i >= 2) out << '^' << i;
  }
  return out.str();
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<BigInt> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return IntPolynomial(std::move(c));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<BigInt> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
  return IntPolynomial(std::move(c));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<BigInt> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return IntPolynomial(std::move(c));
}

IntPolynomial operator*(const BigInt& k, const IntPolynomial& p) {
  std::vector<BigInt> c(p.coeffs_);
  for (auto& v : c) v *= k;
  return IntPolynomial(std::move(c));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  IntPolynomial parse() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError("empty polynomial", pos_);
    const bool has_letter = std::any_of(text_.begin(), text_.end(),
                                        [](char ch) { return std::isalpha(static_cast<unsigned char>(ch)); });
    return has_letter ? parse_expression() : parse_list();
  }

 private:
  // "c0,c1,...,cn", optionally wrapped in [ ].
  IntPolynomial parse_list() {
    std::vector<BigInt> coeffs;
    const bool bracketed = text_[pos_] == '[';
    if (bracketed) ++pos_;
    while (true) {
      skip_ws();
      coeffs.push_back(parse_signed_integer());
      skip_ws();
      if (bracketed && pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("trailing input after ']'", pos_);
        break;
      }
      if (pos_ == text_.size()) {
        if (bracketed) throw ParseError("missing ']'", pos_);
        break;
      }
      if (text_[pos_] != ',') throw ParseError("expected ','", pos_);
      ++pos_;
    }
    return IntPolynomial(std::move(coeffs));
  }

  IntPolynomial parse_expression() {
    std::vector<BigInt> coeffs;
    bool first = true;
    while (true) {
      skip_ws();
      if (pos_ == text_.size()) {
        if (first) throw ParseError("empty polynomial", pos_);
        break;
      }
      int sign = 1;
      if (text_[pos_] == '+' || text_[pos_] == '-') {
        sign = text_[pos_] == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        throw ParseError("expected '+' or '-'", pos_);
      }
      first = false;
      auto [c, power] = parse_term();
      if (coeffs.size() <= power) coeffs.resize(power + 1);
      coeffs[power] += sign * c;
    }
    return IntPolynomial(std::move(coeffs));
  }

  std::pair<BigInt, std::size_t> parse_term() {
    BigInt c = 1;
    bool have_coeff = false;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      c = parse_unsigned_integer();
      have_coeff = true;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        skip_ws();
        if (pos_ == text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_])))
          throw ParseError("expected variable after '*'", pos_);
      }
    }
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      const char v = text_[pos_];
      if (var_ == 0) {
        var_ = v;
      } else if (v != var_) {
        throw ParseError(std::string("second variable '") + v + "'", pos_);
      }
      ++pos_;
      skip_ws();
      std::size_t power = 1;
      if (pos_ < text_.size() && (text_[pos_] == '^' || text_.substr(pos_, 2) == "**")) {
        pos_ += text_[pos_] == '^' ? 1 : 2;
        skip_ws();
        const std::size_t at = pos_;
        BigInt e = parse_unsigned_integer();
        if (e > 4096) throw ParseError("exponent too large", at);
        power = e.convert_to<std::size_t>();
      }
      return {c, power};
    }
    if (!have_coeff) throw ParseError("expected coefficient or variable", pos_);
    return {c, 0};
  }

  BigInt parse_signed_integer() {
    int sign = 1;
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      sign = text_[pos_] == '-' ? -1 : 1;
      ++pos_;
    }
    return sign * parse_unsigned_integer();
  }

  BigInt parse_unsigned_integer() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) throw ParseError("expected integer", pos_);
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == '/' || text_[pos_] == 'e' ||
                                text_[pos_] == 'E')) {
      // 'e' only counts as a non-integer marker when followed by a digit.
      if (text_[pos_] == '.' || text_[pos_] == '/' ||
          (pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))))
        throw ParseError("non-integer coefficient", pos_);
    }
    return BigInt(std::string(text_.substr(start, pos_ - start)));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  char var_ = 0;
};

}  // namespace

IntPolynomial parse_poly(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Reversal and Newton identities

IntPolynomial reverse(const IntPolynomial& p, bool normalize_sign) {
  if (!p.is_monic()) throw PolyError("reverse: polynomial must be monic");
  const BigInt c0 = p.constant_term();
  if (c0 != 1 && c0 != -1) throw PolyError("reverse: constant term must be +1 or -1");
  std::vector<BigInt> r(p.coeffs().rbegin(), p.coeffs().rend());
  if (normalize_sign && c0 == -1)
    for (auto& v : r) v = -v;
  return IntPolynomial(std::move(r));
}

std::vector<BigInt> power_sums(const IntPolynomial& p, int k) {
  if (k < 1) throw PolyError("power_sums: k must be positive");
  if (!p.is_monic()) throw PolyError("power_sums: polynomial must be monic");
  const int n = p.degree();
  // With P = X^n + c_{n-1} X^{n-1} + ... + c_0:
  //   p_m + c_{n-1} p_{m-1} + ... + c_{n-m+1} p_1 + m c_{n-m} = 0   (m <= n)
  //   p_m + c_{n-1} p_{m-1} + ... + c_0 p_{m-n} = 0                 (m > n)
  std::vector<BigInt> s(static_cast<std::size_t>(k) + 1);
  for (int m = 1; m <= k; ++m) {
    BigInt acc = 0;
    for (int i = 1; i <= std::min(m - 1, n); ++i) acc += p.coeff(n - i) * s[static_cast<std::size_t>(m - i)];
    if (m <= n) acc += BigInt(m) * p.coeff(n - m);
    s[static_cast<std::size_t>(m)] = -acc;
  }
  s.erase(s.begin());
  return s;
}

IntPolynomial power_transform(const IntPolynomial& p, int m) {
  if (m < 1) throw PolyError("power_transform: m must be positive");
  if (!p.is_monic()) throw PolyError("power_transform: polynomial must be monic");
  const int n = p.degree();
  if (n < 1) throw PolyError("power_transform: degree must be at least 1");
  if (m == 1) return p;
  const auto sums = power_sums(p, m * n);
  // Power sums of the powered roots, then inverse Newton for the coefficients d_i.
  std::vector<BigInt> pw(static_cast<std::size_t>(n) + 1);
  for (int j = 1; j <= n; ++j) pw[static_cast<std::size_t>(j)] = sums[static_cast<std::size_t>(j * m - 1)];
  std::vector<BigInt> d(static_cast<std::size_t>(n) + 1);
  d[static_cast<std::size_t>(n)] = 1;
  for (int j = 1; j <= n; ++j) {
    BigInt acc = pw[static_cast<std::size_t>(j)];
    for (int i = 1; i < j; ++i) acc += d[static_cast<std::size_t>(n - i)] * pw[static_cast<std::size_t>(j - i)];
    BigInt q, r;
    boost::multiprecision::divide_qr(acc, BigInt(j), q, r);
    if (r != 0) throw PolyError("power_transform: non-integral elementary symmetric function");
    d[static_cast<std::size_t>(n - j)] = -q;
  }
  return IntPolynomial(std::move(d));
}

// ---------------------------------------------------------------------------
// Resultant / discriminant

BigInt resultant(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  const int m = a.degree();
  const int n = b.degree();
  if (m == 0 && n == 0) return 1;
  if (m == 0) return boost::multiprecision::pow(a.leading(), static_cast<unsigned>(n));
  if (n == 0) return boost::multiprecision::pow(b.leading(), static_cast<unsigned>(m));
  const int size = m + n;
  std::vector<std::vector<BigInt>> s(static_cast<std::size_t>(size), std::vector<BigInt>(static_cast<std::size_t>(size)));
  // Rows 0..n-1 hold shifted copies of a, rows n..n+m-1 of b; descending powers.
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) s[r][r + i] = a.coeff(m - i);
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) s[n + r][r + i] = b.coeff(n - i);

  // Bareiss elimination; every division below is exact.
  int sign = 1;
  BigInt prev = 1;
  for (int k = 0; k < size - 1; ++k) {
    if (s[k][k] == 0) {
      int swap = -1;
      for (int r = k + 1; r < size; ++r)
        if (s[r][k] != 0) {
          swap = r;
          break;
        }
      if (swap < 0) return 0;
      std::swap(s[k], s[swap]);
      sign = -sign;
    }
    for (int i = k + 1; i < size; ++i) {
      for (int j = k + 1; j < size; ++j) s[i][j] = (s[i][j] * s[k][k] - s[i][k] * s[k][j]) / prev;
      s[i][k] = 0;
    }
    prev = s[k][k];
  }
  return sign * s[size - 1][size - 1];
}

BigInt discriminant(const IntPolynomial& p) {
  const int n = p.degree();
  if (n < 2) throw PolyError("discriminant: degree must be at least 2");
  BigInt res = resultant(p, p.derivative());
  const bool negate = ((n * (n - 1) / 2) % 2) == 1;
  BigInt d = res / p.leading();
  return negate ? BigInt(-d) : d;
}

// ---------------------------------------------------------------------------
// Division and the factor oracle

std::optional<IntPolynomial> exact_divide(const IntPolynomial& a, const IntPolynomial& b) {
  if (!b.is_monic()) throw PolyError("exact_divide: divisor must be monic");
  if (a.is_zero()) return IntPolynomial{};
  if (a.degree() < b.degree()) return std::nullopt;
  std::vector<BigInt> rem = a.coeffs();
  const int db = b.degree();
  std::vector<BigInt> q(static_cast<std::size_t>(a.degree() - db) + 1);
  for (int i = a.degree(); i >= db; --i) {
    const BigInt c = rem[static_cast<std::size_t>(i)];
    q[static_cast<std::size_t>(i - db)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(i - db + j)] -= c * b.coeff(j);
  }
  for (int i = 0; i < db; ++i)
    if (rem[static_cast<std::size_t>(i)] != 0) return std::nullopt;
  return IntPolynomial(std::move(q));
}

namespace {

BigInt isqrt_ceil(const BigInt& v) {
  BigInt r = boost::multiprecision::sqrt(v);
  if (r * r < v) ++r;
  return r;
}

BigInt binomial(int n, int k) {
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<BigInt> signed_divisors(const BigInt& v) {
  std::vector<BigInt> out;
  const BigInt a = abs(v);
  for (BigInt d = 1; d * d <= a; ++d) {
    if (a % d == 0) {
      out.push_back(d);
      if (d * d != a) out.push_back(a / d);
    }
  }
  std::sort(out.begin(), out.end());
  std::vector<BigInt> both;
  for (const auto& d : out) {
    both.push_back(d);
    both.push_back(-d);
  }
  return both;
}

// Smallest-degree monic divisor of p with 1 <= deg <= deg(p)/2, if any.
std::optional<IntPolynomial> smallest_divisor(const IntPolynomial& p) {
  const int n = p.degree();
  BigInt norm2 = 0;
  for (const auto& c : p.coeffs()) norm2 += c * c;
  const BigInt norm = isqrt_ceil(norm2);
  const BigInt c0 = p.constant_term();
  // Values at a few small integers; a divisor's value must divide them.
  const std::vector<BigInt> probes = {1, -1, 2, -2};
  std::vector<BigInt> probe_vals;
  for (const auto& x : probes) probe_vals.push_back(p.evaluate(x));

  for (int d = 1; d <= n / 2; ++d) {
    std::vector<BigInt> bound(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) bound[i] = binomial(d, i) * norm;
    std::vector<BigInt> constants;
    if (c0 != 0) {
      constants = signed_divisors(c0);
    } else {
      for (BigInt v = -bound[0]; v <= bound[0]; ++v) constants.push_back(v);
    }
    std::vector<BigInt> coeffs(static_cast<std::size_t>(d) + 1);
    coeffs[d] = 1;
    for (const auto& b0 : constants) {
      if (abs(b0) > bound[0]) continue;
      coeffs[0] = b0;
      for (int i = 1; i < d; ++i) coeffs[i] = -bound[i];
      while (true) {
        bool plausible = true;
        for (std::size_t t = 0; t < probes.size() && plausible; ++t) {
          BigInt v = 0;
          for (int i = d; i >= 0; --i) v = v * probes[t] + coeffs[i];
          if (v == 0) {
            plausible = probe_vals[t] == 0;
          } else if (probe_vals[t] != 0 && probe_vals[t] % v != 0) {
            plausible = false;
          }
        }
        if (plausible) {
          IntPolynomial cand(coeffs);
          if (exact_divide(p, cand)) return cand;
        }
        int i = 1;
        while (i < d && coeffs[i] == bound[i]) {
          coeffs[i] = -bound[i];
          ++i;
        }
        if (i >= d) break;
        ++coeffs[i];
      }
    }
  }
  return std::nullopt;
}

}  // namespace

Factorization factor_oracle(const IntPolynomial& p, int max_degree) {
  if (!p.is_monic()) throw PolyError("factor_oracle: polynomial must be monic");
  if (p.degree() < 1) throw PolyError("factor_oracle: degree must be at least 1");
  if (p.degree() > max_degree)
    throw PolyError("factor_oracle: degree " + std::to_string(p.degree()) + " exceeds limit " +
                    std::to_string(max_degree));
  Factorization out;
  IntPolynomial rest = p;
  while (rest.degree() >= 1) {
    auto f = smallest_divisor(rest);
    if (!f) {
      out.factors.push_back(rest);
      break;
    }
    out.factors.push_back(*f);
    rest = *exact_divide(rest, *f);
  }
  out.irreducible = out.factors.size() == 1;
  return out;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json bigint_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return v.convert_to<std::int64_t>();
  return v.str();
}

nlohmann::json to_json(const IntPolynomial& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(bigint_to_json(c));
  return {{"coeffs", coeffs}};
}

IntPolynomial poly_from_json(const nlohmann::json& j) {
  std::vector<BigInt> coeffs;
  for (const auto& c : j.at("coeffs")) {
    if (c.is_string()) {
      coeffs.emplace_back(c.get<std::string>());
    } else {
      coeffs.emplace_back(c.get<std::int64_t>());
    }
  }
  return IntPolynomial(std::move(coeffs));
}

}  // namespace anosovkit
