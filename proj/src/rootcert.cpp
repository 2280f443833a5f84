#include "anosovkit/rootcert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace anosovkit {

// ---------------------------------------------------------------------------
// Sturm chain

namespace {

int sign_of(const BigInt& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

BigInt content(const IntPolynomial& p) {
  BigInt g = 0;
  for (const auto& c : p.coeffs()) g = boost::multiprecision::gcd(g, c);
  return g;
}

// r with lc(b)^(da-db+1) * a = q * b + r, deg r < deg b.
IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<BigInt> r = a.coeffs();
  const int db = b.degree();
  const BigInt& lb = b.leading();
  for (int i = a.degree(); i >= db; --i) {
    const BigInt lead = r[static_cast<std::size_t>(i)];
    for (auto& c : r) c *= lb;
    if (lead != 0)
      for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= lead * b.coeff(j);
    r[static_cast<std::size_t>(i)] = 0;
  }
  return IntPolynomial(std::move(r));
}

}  // namespace

SturmChain::SturmChain(const IntPolynomial& p) {
  if (p.degree() < 1) throw PolyError("SturmChain: degree must be at least 1");
  chain_.push_back(p);
  chain_.push_back(p.derivative());
  while (chain_.back().degree() > 0) {
    const IntPolynomial& a = chain_[chain_.size() - 2];
    const IntPolynomial& b = chain_.back();
    IntPolynomial r = pseudo_remainder(a, b);
    if (r.is_zero()) break;
    const int exponent = a.degree() - b.degree() + 1;
    // Multiplier lc(b)^exponent may be negative; flip so the remainder keeps
    // the sign of the true rational remainder.
    const bool flip = b.leading() < 0 && (exponent % 2 == 1);
    BigInt g = content(r);
    if (flip) g = -g;
    // Sturm convention: next = -rem.
    std::vector<BigInt> c = r.coeffs();
    for (auto& v : c) v = -v / g;
    chain_.emplace_back(std::move(c));
  }
}

int SturmChain::variations_at(const Rational& t) const {
  const BigInt num = boost::multiprecision::numerator(t);
  const BigInt den = boost::multiprecision::denominator(t);
  int prev = 0;
  int changes = 0;
  for (const auto& s : chain_) {
    // sign of den^deg * s(num/den); den > 0.
    BigInt acc = 0;
    BigInt dp = 1;
    for (auto it = s.coeffs().rbegin(); it != s.coeffs().rend(); ++it) {
      acc = acc * num + *it * dp;
      dp *= den;
    }
    const int sg = sign_of(acc);
    if (sg == 0) continue;
    if (prev != 0 && sg != prev) ++changes;
    prev = sg;
  }
  return changes;
}

int SturmChain::variations_at_infinity(bool positive) const {
  int prev = 0;
  int changes = 0;
  for (const auto& s : chain_) {
    int sg = sign_of(s.leading());
    if (!positive && s.degree() % 2 == 1) sg = -sg;
    if (prev != 0 && sg != prev) ++changes;
    prev = sg;
  }
  return changes;
}

int SturmChain::count_greater(const Rational& t) const { return variations_at(t) - variations_at_infinity(true); }

int SturmChain::count_in(const Rational& a, const Rational& b) const { return variations_at(a) - variations_at(b); }

int SturmChain::count_real() const { return variations_at_infinity(false) - variations_at_infinity(true); }

int count_real_roots_gt(const IntPolynomial& p, const Rational& threshold) {
  SturmChain chain(p);
  if (!chain.squarefree()) throw NotSquarefreeError("count_real_roots_gt: polynomial is not squarefree");
  return chain.count_greater(threshold);
}

// ---------------------------------------------------------------------------
// Generic arithmetic for the double and MPFR stages

namespace {

template <class T>
struct Num;

template <>
struct Num<double> {
  static double from_int(const BigInt& c, long) { return c.convert_to<double>(); }
  static double from_double(double x, long) { return x; }
  static double unit(long) { return 0x1p-53; }
  static double hyp(const double& a, const double& b) { return std::hypot(a, b); }
  static bool finite(const double& x) { return std::isfinite(x); }
  static MpFloat to_mp(const double& x, long) { return MpFloat(x, 53); }
};

template <>
struct Num<MpFloat> {
  static MpFloat from_int(const BigInt& c, long bits) { return MpFloat(c, bits); }
  static MpFloat from_double(double x, long bits) { return MpFloat(x, bits); }
  static MpFloat unit(long bits) {
    MpFloat r(1.0, bits);
    mpfr_mul_2si(r.raw(), r.raw(), -bits, MPFR_RNDN);
    return r;
  }
  static MpFloat hyp(const MpFloat& a, const MpFloat& b) { return mp::hypot(a, b, MPFR_RNDN); }
  static bool finite(const MpFloat& x) { return mpfr_number_p(x.raw()) != 0; }
  static MpFloat to_mp(const MpFloat& x, long) { return x; }
};

template <class T>
struct Cx {
  T re;
  T im;
};

template <class T>
Cx<T> operator+(const Cx<T>& a, const Cx<T>& b) {
  return {a.re + b.re, a.im + b.im};
}
template <class T>
Cx<T> operator-(const Cx<T>& a, const Cx<T>& b) {
  return {a.re - b.re, a.im - b.im};
}
template <class T>
Cx<T> operator*(const Cx<T>& a, const Cx<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class T>
Cx<T> operator/(const Cx<T>& a, const Cx<T>& b) {
  const T d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
template <class T>
T cabs(const Cx<T>& a) {
  return Num<T>::hyp(a.re, a.im);
}

MpFloat with_precision(const MpFloat& x, long bits) {
  MpFloat r(bits);
  mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

template <class T>
class Stage {
 public:
  Stage(const IntPolynomial& p, long bits) : n_(p.degree()), bits_(bits) {
    const IntPolynomial dp = p.derivative();
    for (const auto& c : p.coeffs()) {
      coeffs_.push_back(Num<T>::from_int(c, bits));
      abs_coeffs_.push_back(Num<T>::from_int(abs(c), bits));
    }
    for (const auto& c : dp.coeffs()) {
      dcoeffs_.push_back(Num<T>::from_int(c, bits));
      abs_dcoeffs_.push_back(Num<T>::from_int(abs(c), bits));
    }
    u_ = Num<T>::unit(bits);
    one_ = c(1.0);
    zero_ = c(0.0);
  }

  T c(double v) const { return Num<T>::from_double(v, bits_); }

  Cx<T> horner(const std::vector<T>& a, const Cx<T>& x) const {
    Cx<T> acc{zero_, zero_};
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
      acc = acc * x;
      acc.re = acc.re + *it;
    }
    return acc;
  }

  T horner_abs(const std::vector<T>& a, const T& ax) const {
    T acc = zero_;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * ax + *it;
    return acc;
  }

  Cx<T> value(const Cx<T>& x) const { return horner(coeffs_, x); }
  Cx<T> deriv(const Cx<T>& x) const { return horner(dcoeffs_, x); }

  void aberth(std::vector<Cx<T>>& z, int max_iter) const {
    const T tol = c(16.0) * u_;
    for (int iter = 0; iter < max_iter; ++iter) {
      bool converged = true;
      for (int i = 0; i < n_; ++i) {
        const Cx<T> pv = value(z[i]);
        if (pv.re == zero_ && pv.im == zero_) continue;
        const Cx<T> w = pv / deriv(z[i]);
        Cx<T> s{zero_, zero_};
        for (int j = 0; j < n_; ++j) {
          if (j == i) continue;
          const Cx<T> d = z[i] - z[j];
          if (d.re == zero_ && d.im == zero_) continue;
          s = s + Cx<T>{one_, zero_} / d;
        }
        const Cx<T> denom = Cx<T>{one_, zero_} - w * s;
        const Cx<T> corr = (denom.re == zero_ && denom.im == zero_) ? w : w / denom;
        if (!Num<T>::finite(corr.re) || !Num<T>::finite(corr.im)) continue;
        z[i] = z[i] - corr;
        T scale = cabs(z[i]);
        if (scale < one_) scale = one_;
        if (cabs(corr) > tol * scale) converged = false;
      }
      if (converged) break;
    }
  }

  void newton(Cx<T>& x, int steps) const {
    for (int k = 0; k < steps; ++k) {
      const Cx<T> d = deriv(x);
      if (d.re == zero_ && d.im == zero_) return;
      const Cx<T> corr = value(x) / d;
      if (!Num<T>::finite(corr.re) || !Num<T>::finite(corr.im)) return;
      x = x - corr;
    }
  }

  /// Puts the `real_count` roots closest to the axis exactly on it and makes
  /// the rest conjugate-symmetric.
  void symmetrize(std::vector<Cx<T>>& z, int real_count) const {
    std::vector<int> order(static_cast<std::size_t>(n_));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      using std::abs;
      return abs(z[a].im) < abs(z[b].im);
    });
    for (int k = 0; k < real_count && k < n_; ++k) {
      Cx<T>& x = z[order[k]];
      x.im = zero_;
      newton(x, 4);
    }
    std::vector<bool> used(static_cast<std::size_t>(n_), false);
    for (int k = real_count; k < n_; ++k) {
      const int i = order[k];
      if (used[i] || !(z[i].im > zero_)) continue;
      int partner = -1;
      T best = zero_;
      for (int t = real_count; t < n_; ++t) {
        const int j = order[t];
        if (j == i || used[j] || !(z[j].im < zero_)) continue;
        const T d = Num<T>::hyp(z[i].re - z[j].re, z[i].im + z[j].im);
        if (partner < 0 || d < best) {
          partner = j;
          best = d;
        }
      }
      if (partner < 0) continue;
      const T half = c(0.5);
      Cx<T> upper{(z[i].re + z[partner].re) * half, (z[i].im - z[partner].im) * half};
      newton(upper, 2);
      z[i] = upper;
      z[partner] = Cx<T>{upper.re, zero_ - upper.im};
      used[i] = used[partner] = true;
    }
  }

  /// Rigorous upper bound of the inclusion radius; negative if it cannot be formed.
  T radius(const Cx<T>& x) const {
    const T nn = c(static_cast<double>(n_));
    const T np1 = c(static_cast<double>(n_ + 1));
    const T ax = cabs(x) * (one_ + c(2.0) * u_);
    const T grow = one_ + c(4.0) * np1 * u_;
    const T err_p = c(8.0) * np1 * u_ * horner_abs(abs_coeffs_, ax) * grow;
    const T err_d = c(8.0) * np1 * u_ * horner_abs(abs_dcoeffs_, ax) * grow;
    const T pv = cabs(value(x)) * (one_ + c(2.0) * u_) + err_p;
    const T dv = cabs(deriv(x)) * (one_ - c(2.0) * u_) - err_d;
    if (!(dv > zero_) || !Num<T>::finite(pv)) return c(-1.0);
    return nn * pv / dv * (one_ + c(8.0) * u_);
  }

  bool separated(const Cx<T>& a, const T& ra, const Cx<T>& b, const T& rb) const {
    const T d = cabs(a - b) * (one_ - c(8.0) * u_);
    return d > (ra + rb) * (one_ + c(4.0) * u_);
  }

  int degree() const { return n_; }

 private:
  int n_;
  long bits_;
  std::vector<T> coeffs_, abs_coeffs_, dcoeffs_, abs_dcoeffs_;
  T u_{}, one_{}, zero_{};
};

template <class T>
std::vector<RootEnclosure> certify(const Stage<T>& st, const std::vector<Cx<T>>& z, long bits, bool& all_ok) {
  const int n = st.degree();
  std::vector<T> r;
  r.reserve(z.size());
  all_ok = true;
  for (const auto& x : z) {
    r.push_back(st.radius(x));
    if (r.back() < st.c(0.0)) all_ok = false;
  }
  if (all_ok) {
    for (int i = 0; i < n && all_ok; ++i)
      for (int j = i + 1; j < n && all_ok; ++j)
        if (!st.separated(z[i], r[i], z[j], r[j])) all_ok = false;
  }
  std::vector<RootEnclosure> out;
  out.reserve(z.size());
  for (int i = 0; i < n; ++i) {
    RootEnclosure e;
    e.re = Num<T>::to_mp(z[i].re, bits);
    e.im = Num<T>::to_mp(z[i].im, bits);
    if (r[i] < st.c(0.0)) {
      e.radius = MpFloat(INFINITY, 53);
    } else {
      e.radius = Num<T>::to_mp(r[i], bits);
    }
    e.certified = all_ok;
    e.is_real_certified = all_ok && e.im.is_zero();
    e.precision_bits = bits;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<std::complex<double>> companion_seeds(const IntPolynomial& p) {
  const int n = p.degree();
  const double lead = p.leading().convert_to<double>();
  if (n == 1) return {std::complex<double>(-p.coeff(0).convert_to<double>() / lead, 0.0)};
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) c(i, n - 1) = -p.coeff(i).convert_to<double>() / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
  std::vector<std::complex<double>> out;
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

}  // namespace

RealInterval modulus_interval(const RootEnclosure& e) {
  const long bits = std::max({e.re.precision(), e.im.precision(), e.radius.precision()});
  MpFloat re = with_precision(e.re, bits);
  MpFloat im = with_precision(e.im, bits);
  MpFloat lo = mp::sub(mp::hypot(re, im, MPFR_RNDD), e.radius, MPFR_RNDD);
  if (lo.sign() < 0) lo = MpFloat(0.0, bits);
  MpFloat hi = mp::add(mp::hypot(re, im, MPFR_RNDU), e.radius, MPFR_RNDU);
  return {std::move(lo), std::move(hi)};
}

// ---------------------------------------------------------------------------
// RootIsolator

RootIsolator::RootIsolator(const IntPolynomial& p, int real_root_count, IsolationOptions options)
    : poly_(p), real_count_(real_root_count), options_(options) {
  if (p.degree() < 1) throw PolyError("isolate: degree must be at least 1");
  seeds_ = companion_seeds(p);
  run_stage();
}

RootIsolator::RootIsolator(const IntPolynomial& p, const SturmChain& chain, IsolationOptions options)
    : RootIsolator(p, chain.count_real(), options) {}

double RootIsolator::max_radius() const {
  double r = 0.0;
  for (const auto& e : enclosures_) r = std::max(r, e.radius.to_double(MPFR_RNDU));
  return r;
}

bool RootIsolator::refine() {
  const long next = bits_ == 53 ? 128 : bits_ * 2;
  if (next > options_.max_bits) return false;
  bits_ = next;
  run_stage();
  return true;
}

void RootIsolator::run_stage() {
  const int n = poly_.degree();
  if (bits_ == 53) {
    Stage<double> st(poly_, 53);
    std::vector<Cx<double>> z;
    for (const auto& s : seeds_) z.push_back({s.real(), s.imag()});
    st.aberth(z, 200);
    st.symmetrize(z, real_count_);
    enclosures_ = certify(st, z, 53, all_certified_);
    return;
  }
  Stage<MpFloat> st(poly_, bits_);
  std::vector<Cx<MpFloat>> z;
  z.reserve(static_cast<std::size_t>(n));
  for (const auto& e : enclosures_) z.push_back({with_precision(e.re, bits_), with_precision(e.im, bits_)});
  st.aberth(z, 60);
  st.symmetrize(z, real_count_);
  enclosures_ = certify(st, z, bits_, all_certified_);
}

IsolationResult isolate_roots(const IntPolynomial& p, double target_radius, IsolationOptions options) {
  if (p.degree() < 1) throw PolyError("isolate_roots: degree must be at least 1");
  SturmChain chain(p);
  if (!chain.squarefree()) throw NotSquarefreeError("isolate_roots: polynomial " + p.render() + " is not squarefree");
  RootIsolator iso(p, chain, options);
  while (true) {
    if (iso.all_certified() && iso.max_radius() <= target_radius)
      return {iso.enclosures(), IsolationStatus::Certified, iso.precision()};
    if (!iso.refine()) return {iso.enclosures(), IsolationStatus::PrecisionExhausted, iso.precision()};
  }
}

// ---------------------------------------------------------------------------

Rational to_rational(const MpFloat& x) {
  if (x.is_zero()) return Rational(0);
  mpz_t m;
  mpz_init(m);
  const mpfr_exp_t e = mpfr_get_z_2exp(m, x.raw());
  std::vector<char> buf(mpz_sizeinbase(m, 10) + 2);
  mpz_get_str(buf.data(), 10, m);
  mpz_clear(m);
  Rational r{BigInt(std::string(buf.data()))};
  if (e >= 0) {
    r *= Rational(BigInt(1) << static_cast<unsigned>(e));
  } else {
    r /= Rational(BigInt(1) << static_cast<unsigned>(-e));
  }
  return r;
}

nlohmann::json to_json(const RootEnclosure& e) {
  return {{"re", e.re.to_double()},
          {"im", e.im.to_double()},
          {"radius", e.radius.to_double(MPFR_RNDU)},
          {"real", e.is_real_certified},
          {"certified", e.certified},
          {"precision_bits", e.precision_bits}};
}

nlohmann::json to_json(const RealInterval& iv) {
  return {{"lo", iv.lo.to_double(MPFR_RNDD)}, {"hi", iv.hi.to_double(MPFR_RNDU)}};
}

}  // namespace anosovkit
