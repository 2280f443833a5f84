#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "anosovkit/intpoly.hpp"
#include "anosovkit/spectra.hpp"

namespace anosovkit {

/// Monic polynomials X^n + c_{n-1}X^{n-1} + ... + c_0 with |c_i| <= bound for
/// 1 <= i < n and c_0 = (-1)^n (det_one) or c_0 in {-1, +1}. Emitted in
/// lexicographic order of the tuple (c_{n-1}, ..., c_1, c_0).
class Enumerator {
 public:
  Enumerator(int degree, int bound, bool det_one);
  /// Restricts to c_{n-1} = leading (one shard).
  Enumerator(int degree, int bound, bool det_one, int leading);

  std::optional<IntPolynomial> next();
  /// Number of polynomials this enumerator emits in total.
  std::uint64_t size() const;

 private:
  void init(int degree, int bound, bool det_one);
  int degree_;
  int bound_;
  bool det_one_;
  std::vector<int> digits_;  // digits_[k] is the coefficient of X^(n-1-k); last is c_0
  int lead_lo_;
  int lead_hi_;
  bool done_ = false;
};

std::vector<IntPolynomial> enumerate(int degree, int bound, bool det_one);
std::uint64_t candidate_count(int degree, int bound, bool det_one);

struct SearchOptions {
  int degree = 2;
  int bound = 1;
  bool det_one = true;
  int workers = 1;
  ClassifyOptions classify;
  /// Replay rejected candidates that still have a dominant real root.
  bool replay_near_misses = true;
};

struct AcceptedEntry {
  SpectralProfile profile;
  ReplayReport replay;
};

struct NearMissStats {
  std::uint64_t replayed = 0;
  std::uint64_t exact_contradictions = 0;
  std::uint64_t without_contradiction = 0;
  std::map<std::string, std::uint64_t> by_step;
};

struct SearchReport {
  int degree = 0;
  int coeff_bound = 0;
  bool det_one = true;
  std::uint64_t candidate_count = 0;
  std::vector<AcceptedEntry> accepted;
  std::map<std::string, std::uint64_t> rejected;
  std::vector<SpectralProfile> undecided;
  NearMissStats near_misses;
  double wall_time_seconds = 0.0;

  std::uint64_t rejected_count() const;
};

/// Classifies every candidate. Shards are the values of c_{n-1}; workers pull
/// shards from a shared counter and results are merged in shard order, so the
/// report does not depend on the worker count.
SearchReport search(const SearchOptions& options);

struct Discrepancy {
  IntPolynomial poly;
  std::string certified;
  std::string oracle;
  /// "acceptance" (must not occur), "near_boundary" (allowed) or "undecided".
  std::string severity;
  std::string note;
};

/// Hardware-precision verdict: companion eigenvalues in double precision,
/// accept iff exactly one root exceeds 1 + tol in modulus, it is real and
/// positive, and every other modulus is within tol of r^(-1/q).
bool oracle_accepts(const IntPolynomial& p, double tol = 1e-6, double* margin = nullptr);

/// Re-derives every candidate's verdict with oracle_accepts and lists disagreements.
std::vector<Discrepancy> cross_check(const SearchReport& report, double tol = 1e-6);

/// Canonical JSON; wall time is included only on request so that reports
/// remain byte-identical across runs and worker counts.
nlohmann::json to_json(const SearchReport& report, bool include_timing = false);
nlohmann::json to_json(const Discrepancy& d);
/// One row per accepted polynomial: coeffs, q, lambda (15 digits), certification.
std::string to_csv(const SearchReport& report);

}  // namespace anosovkit
