#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "anosovkit/intpoly.hpp"
#include "anosovkit/mpfloat.hpp"

namespace anosovkit {

class NotSquarefreeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Closed real interval [lo, hi] with outward-rounded endpoints.
struct RealInterval {
  MpFloat lo;
  MpFloat hi;

  bool contains(const MpFloat& x) const { return lo <= x && x <= hi; }
  bool contains(const RealInterval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool intersects(const RealInterval& o) const { return !(hi < o.lo || o.hi < lo); }
  double mid() const { return 0.5 * (lo.to_double() + hi.to_double()); }
  double width() const { return hi.to_double(MPFR_RNDU) - lo.to_double(MPFR_RNDD); }
};

/// A disk {|x - center| <= radius} in the complex plane.
struct RootEnclosure {
  MpFloat re;
  MpFloat im;
  MpFloat radius;
  /// The disk is proven to hold exactly one root of the source polynomial.
  bool certified = false;
  /// Center lies on the real axis and the disk is certified, so the root is real.
  bool is_real_certified = false;
  long precision_bits = 53;

  std::complex<double> center() const { return {re.to_double(), im.to_double()}; }
};

/// Interval guaranteed to contain |root|.
RealInterval modulus_interval(const RootEnclosure& e);

/// Sturm sequence kept as integer polynomials. Each remainder is a positive
/// rational multiple of the classical one, so sign sequences are unchanged.
class SturmChain {
 public:
  explicit SturmChain(const IntPolynomial& p);

  /// gcd(P, P') is constant, i.e. the discriminant is non-zero.
  bool squarefree() const { return chain_.back().degree() == 0; }
  /// Number of distinct real roots strictly greater than t.
  int count_greater(const Rational& t) const;
  /// Number of distinct real roots in (a, b].
  int count_in(const Rational& a, const Rational& b) const;
  int count_real() const;
  const std::vector<IntPolynomial>& chain() const { return chain_; }

 private:
  int variations_at(const Rational& t) const;
  int variations_at_infinity(bool positive) const;
  std::vector<IntPolynomial> chain_;
};

/// Exact count of real roots > threshold. Requires P squarefree.
int count_real_roots_gt(const IntPolynomial& p, const Rational& threshold);

enum class IsolationStatus { Certified, PrecisionExhausted };

struct IsolationOptions {
  long max_bits = 4096;
};

/// Stateful root isolation over a precision ladder (53 bits in hardware
/// doubles, then 128, 256, ... bits in MPFR). Initial guesses come from the
/// companion-matrix eigenvalues; each stage runs Aberth iterations, pins the
/// known number of real roots onto the real axis and certifies every disk by
/// the inclusion radius n |P(x)| / |P'(x)| with rigorous rounding bounds.
class RootIsolator {
 public:
  /// `real_root_count` is the exact (Sturm) number of real roots.
  RootIsolator(const IntPolynomial& p, int real_root_count, IsolationOptions options = {});
  RootIsolator(const IntPolynomial& p, const SturmChain& chain, IsolationOptions options = {});

  /// Moves to the next precision level; false when the ceiling is reached.
  bool refine();
  long precision() const { return bits_; }
  bool all_certified() const { return all_certified_; }
  const std::vector<RootEnclosure>& enclosures() const { return enclosures_; }
  double max_radius() const;

 private:
  void run_stage();

  IntPolynomial poly_;
  int real_count_;
  IsolationOptions options_;
  long bits_ = 53;
  std::vector<std::complex<double>> seeds_;
  std::vector<RootEnclosure> enclosures_;
  bool all_certified_ = false;
};

struct IsolationResult {
  std::vector<RootEnclosure> roots;
  IsolationStatus status = IsolationStatus::PrecisionExhausted;
  long precision_bits = 0;
};

/// Certified, pairwise-disjoint enclosures with radius <= target_radius.
/// Throws NotSquarefreeError when P has a repeated root.
IsolationResult isolate_roots(const IntPolynomial& p, double target_radius, IsolationOptions options = {});

nlohmann::json to_json(const RootEnclosure& e);
nlohmann::json to_json(const RealInterval& iv);

/// Exact dyadic value of an MPFR number.
Rational to_rational(const MpFloat& x);

}  // namespace anosovkit
