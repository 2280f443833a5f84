#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "anosovkit/intpoly.hpp"
#include "anosovkit/rootcert.hpp"

namespace anosovkit {

// Sign convention used throughout: mu_A(X) = det(X Id - A), so the constant
// term of mu_A is (-1)^(q+1) det A.

enum class Certification { ExactQ1, ExactQ2, IntervalCertified, Rejected, Undecided };

enum class RejectReason {
  None,
  WrongConstantTerm,
  NotSquarefree,
  RealRootCount,
  BoundaryRoot,
  ModulusSeparation,
};

std::string to_string(Certification c);
std::string to_string(RejectReason r);

struct ClassifyOptions {
  /// Relax det A = 1 to det A = +-1 (|P(0)| = 1). Exploratory only.
  bool allow_gl = false;
  /// Skip the exact degree-2/3 tests and use the interval route everywhere.
  bool force_interval = false;
  long max_precision_bits = 4096;
  /// The interval route only accepts once this precision has been reached.
  long min_accept_bits = 256;
};

/// Outcome of classification. A profile is accepted when the polynomial is
/// the characteristic polynomial of some A in SL_{q+1}(Z) with one real
/// eigenvalue lambda^q > 1 and all other eigenvalues of modulus 1/lambda.
struct SpectralProfile {
  IntPolynomial poly;
  int q = 0;
  Certification certification = Certification::Undecided;
  RejectReason reason = RejectReason::None;
  std::string detail;
  /// Present whenever a unique real root > 1 was found (also on rejections).
  std::optional<RealInterval> lambda;
  std::optional<RootEnclosure> big_root;
  std::vector<RootEnclosure> small_roots;
  long precision_bits = 0;
  /// big root * prod |small roots| encloses 1 (prod z_j = 1). Accepted profiles only.
  bool unit_product_consistent = false;

  bool accepted() const {
    return certification == Certification::ExactQ1 || certification == Certification::ExactQ2 ||
           certification == Certification::IntervalCertified;
  }
};

/// Throws PolyError for non-monic input or degree < 2; every other outcome
/// (including squarefreeness and constant-term failures) is reported in the profile.
SpectralProfile classify(const IntPolynomial& p, const ClassifyOptions& options = {});

struct ExactVerdict {
  bool accepted = false;
  std::optional<RealInterval> lambda;
  std::string reason;
};

/// Degree 2 with constant term +1: accepted iff P = X^2 - tX + 1 with t >= 3.
ExactVerdict exact_test_q1(const IntPolynomial& p);

/// Degree 3 with constant term -1: accepted iff disc(P) < 0 and P(1) < 0.
/// The product of the roots is 1, so the complex pair has modulus
/// (real root)^(-1/2) automatically.
ExactVerdict exact_test_q2(const IntPolynomial& p);

/// True when the profile certifies one root of modulus > 1 and every other
/// root of modulus < 1 for a monic P with |P(0)| = 1: any monic integer factor
/// would then have all its roots inside the unit disk, hence a constant term
/// of modulus < 1. std::nullopt when those facts are not certified.
std::optional<bool> irreducible_by_modulus(const IntPolynomial& p, const SpectralProfile& profile);

enum class ReplayCase { Even, Odd };

enum class StepStatus { Holds, Fails, Undetermined, Skipped };

struct ReplayStep {
  std::string name;
  StepStatus status = StepStatus::Undetermined;
  std::string detail;
};

struct ReplayReport {
  ReplayCase replay_case = ReplayCase::Even;
  int q = 0;
  /// Q for the even case, reverse(P) for the odd case.
  IntPolynomial constructed_poly;
  /// power_transform(constructed_poly, q/2) or power_transform(reverse(P), q).
  IntPolynomial transformed_poly;
  /// transformed_poly == P as exact integer polynomials.
  bool identity_holds = false;
  std::optional<std::string> contradiction;
  /// The verdict used exact integer arithmetic only.
  bool exact = true;
  std::vector<ReplayStep> steps;
};

/// Even q = 2p. Requires profile.lambda. Throws PolyError for odd q.
ReplayReport replay_case_even(const IntPolynomial& p, const SpectralProfile& profile);
/// Odd q. Requires profile.lambda. Throws PolyError for even q.
ReplayReport replay_case_odd(const IntPolynomial& p, const SpectralProfile& profile);
/// Dispatches on the parity of profile.q.
ReplayReport replay(const IntPolynomial& p, const SpectralProfile& profile);

std::string to_string(StepStatus s);
nlohmann::json to_json(const SpectralProfile& profile);
nlohmann::json to_json(const ReplayReport& report);

}  // namespace anosovkit
