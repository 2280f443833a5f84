#include "anosovkit/spectra.hpp"

#include <sstream>

namespace anosovkit {

std::string to_string(Certification c) {
  switch (c) {
    case Certification::ExactQ1: return "ExactQ1";
    case Certification::ExactQ2: return "ExactQ2";
    case Certification::IntervalCertified: return "IntervalCertified";
    case Certification::Rejected: return "Rejected";
    case Certification::Undecided: return "Undecided";
  }
  return "?";
}

std::string to_string(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "None";
    case RejectReason::WrongConstantTerm: return "WrongConstantTerm";
    case RejectReason::NotSquarefree: return "NotSquarefree";
    case RejectReason::RealRootCount: return "RealRootCount";
    case RejectReason::BoundaryRoot: return "BoundaryRoot";
    case RejectReason::ModulusSeparation: return "ModulusSeparation";
  }
  return "?";
}

std::string to_string(StepStatus s) {
  switch (s) {
    case StepStatus::Holds: return "holds";
    case StepStatus::Fails: return "fails";
    case StepStatus::Undetermined: return "undetermined";
    case StepStatus::Skipped: return "skipped";
  }
  return "?";
}

namespace {

MpFloat one_at(long bits) { return MpFloat(1.0, bits); }

RealInterval interval_root(const RealInterval& x, int k) {
  return {mp::rootn(x.lo, static_cast<unsigned long>(k), MPFR_RNDD),
          mp::rootn(x.hi, static_cast<unsigned long>(k), MPFR_RNDU)};
}

// 1/x for x > 0.
RealInterval interval_inverse(const RealInterval& x) {
  const long bits = std::max(x.lo.precision(), x.hi.precision());
  return {mp::div(one_at(bits), x.hi, MPFR_RNDD), mp::div(one_at(bits), x.lo, MPFR_RNDU)};
}

// Product of non-negative intervals.
RealInterval interval_mul(const RealInterval& a, const RealInterval& b) {
  return {mp::mul(a.lo, b.lo, MPFR_RNDD), mp::mul(a.hi, b.hi, MPFR_RNDU)};
}

// x^k for x >= 0, k any integer.
RealInterval interval_pow(const RealInterval& x, long k) {
  if (k >= 0) return {mp::pow_si(x.lo, k, MPFR_RNDD), mp::pow_si(x.hi, k, MPFR_RNDU)};
  return {mp::pow_si(x.hi, k, MPFR_RNDD), mp::pow_si(x.lo, k, MPFR_RNDU)};
}

RealInterval real_part_interval(const RootEnclosure& e) {
  return {mp::sub(e.re, e.radius, MPFR_RNDD), mp::add(e.re, e.radius, MPFR_RNDU)};
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

void ensure_certified(RootIsolator& iso) {
  while (!iso.all_certified() && iso.refine()) {
  }
}

// Splits certified enclosures into the dominant real root (> 1) and the rest.
// Returns false when the dominant root cannot be located at this precision.
bool split_roots(const std::vector<RootEnclosure>& roots, SpectralProfile& prof) {
  int found = -1;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto& e = roots[i];
    if (!e.is_real_certified) continue;
    if (mp::sub(e.re, e.radius, MPFR_RNDD) > one_at(e.re.precision())) {
      if (found >= 0) return false;
      found = static_cast<int>(i);
    }
  }
  if (found < 0) return false;
  prof.big_root = roots[static_cast<std::size_t>(found)];
  prof.small_roots.clear();
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (static_cast<int>(i) != found) prof.small_roots.push_back(roots[i]);
  prof.lambda = interval_root(real_part_interval(*prof.big_root), prof.q);
  return true;
}

void check_unit_product(SpectralProfile& prof) {
  RealInterval prod = modulus_interval(*prof.big_root);
  for (const auto& e : prof.small_roots) prod = interval_mul(prod, modulus_interval(e));
  prof.unit_product_consistent = prod.contains(one_at(prod.lo.precision()));
}

enum class Decision { Accept, Reject, Pending };

Decision decide_by_intervals(SpectralProfile& prof, const std::vector<RootEnclosure>& roots, long bits,
                             const ClassifyOptions& opt) {
  if (!split_roots(roots, prof)) return Decision::Pending;
  const RealInterval target = interval_inverse(*prof.lambda);
  bool all_intersect = true;
  int boundary = -1;
  int separated = -1;
  for (std::size_t i = 0; i < prof.small_roots.size(); ++i) {
    const RealInterval m = modulus_interval(prof.small_roots[i]);
    if (!m.intersects(target)) {
      if (separated < 0) separated = static_cast<int>(i);
      if (boundary < 0 && m.contains(one_at(m.lo.precision()))) boundary = static_cast<int>(i);
    }
    all_intersect = all_intersect && m.intersects(target);
  }
  if (separated >= 0) {
    const int idx = boundary >= 0 ? boundary : separated;
    prof.reason = boundary >= 0 ? RejectReason::BoundaryRoot : RejectReason::ModulusSeparation;
    const auto c = prof.small_roots[static_cast<std::size_t>(idx)].center();
    prof.detail = "root " + fmt(c.real()) + (c.imag() < 0 ? " - " : " + ") + fmt(std::abs(c.imag())) +
                  "i has modulus ~" + fmt(modulus_interval(prof.small_roots[static_cast<std::size_t>(idx)]).mid()) +
                  ", 1/lambda ~" + fmt(target.mid());
    return Decision::Reject;
  }
  if (all_intersect && bits >= opt.min_accept_bits) return Decision::Accept;
  return Decision::Pending;
}

SpectralProfile reject(SpectralProfile prof, RejectReason reason, std::string detail) {
  prof.certification = Certification::Rejected;
  prof.reason = reason;
  prof.detail = std::move(detail);
  return prof;
}

struct ExactQ2Core {
  bool accepted;
  std::string reason;
};

ExactQ2Core exact_q2_core(const IntPolynomial& p) {
  const BigInt disc = discriminant(p);
  const BigInt a = p.coeff(2);
  const BigInt b = p.coeff(1);
  if (disc == 0) return {false, "discriminant is 0 (repeated root)"};
  if (disc > 0) return {false, "discriminant " + disc.str() + " > 0: three real roots"};
  if (a + b >= 0) return {false, "P(1) = " + BigInt(a + b).str() + " >= 0: real root is not > 1"};
  return {true, "discriminant " + disc.str() + " < 0 and P(1) = " + BigInt(a + b).str() + " < 0"};
}

}  // namespace

ExactVerdict exact_test_q1(const IntPolynomial& p) {
  if (p.degree() != 2 || !p.is_monic() || p.constant_term() != 1)
    throw PolyError("exact_test_q1: expects X^2 - tX + 1");
  const BigInt t = -p.coeff(1);
  ExactVerdict v;
  if (t < 3) {
    v.reason = t == 2 ? "t = 2: double root 1" : "t = " + t.str() + " <= 2: no real root > 1";
    return v;
  }
  constexpr long bits = 128;
  const MpFloat tf(t, bits);
  const MpFloat d(BigInt(t * t - 4), bits);
  const MpFloat two(2.0, bits);
  MpFloat s_lo = sqrt(d);
  MpFloat s_hi = s_lo;
  mpfr_sqrt(s_lo.raw(), d.raw(), MPFR_RNDD);
  mpfr_sqrt(s_hi.raw(), d.raw(), MPFR_RNDU);
  v.accepted = true;
  v.lambda = RealInterval{mp::div(mp::add(tf, s_lo, MPFR_RNDD), two, MPFR_RNDD),
                          mp::div(mp::add(tf, s_hi, MPFR_RNDU), two, MPFR_RNDU)};
  v.reason = "t = " + t.str() + " >= 3";
  return v;
}

ExactVerdict exact_test_q2(const IntPolynomial& p) {
  if (p.degree() != 3 || !p.is_monic() || p.constant_term() != -1)
    throw PolyError("exact_test_q2: expects X^3 + aX^2 + bX - 1");
  const ExactQ2Core core = exact_q2_core(p);
  ExactVerdict v;
  v.accepted = core.accepted;
  v.reason = core.reason;
  if (!core.accepted) return v;
  const auto iso = isolate_roots(p, 1e-30);
  for (const auto& e : iso.roots) {
    if (e.is_real_certified) v.lambda = interval_root(real_part_interval(e), 2);
  }
  return v;
}

SpectralProfile classify(const IntPolynomial& p, const ClassifyOptions& opt) {
  if (!p.is_monic()) throw PolyError("classify: polynomial must be monic");
  if (p.degree() < 2) throw PolyError("classify: degree must be at least 2");
  SpectralProfile prof;
  prof.poly = p;
  prof.q = p.degree() - 1;

  const BigInt c0 = p.constant_term();
  const int sl_constant = p.degree() % 2 == 0 ? 1 : -1;
  const bool sl_ok = c0 == sl_constant;
  if (opt.allow_gl ? abs(c0) != 1 : !sl_ok) {
    return reject(std::move(prof), RejectReason::WrongConstantTerm,
                  "constant term " + c0.str() + ", expected " +
                      (opt.allow_gl ? std::string("+-1") : std::to_string(sl_constant)));
  }

  const SturmChain chain(p);
  if (!chain.squarefree()) return reject(std::move(prof), RejectReason::NotSquarefree, "gcd(P, P') is not constant");
  const int above_one = chain.count_greater(Rational(1));
  if (above_one != 1)
    return reject(std::move(prof), RejectReason::RealRootCount,
                  std::to_string(above_one) + " distinct real roots > 1 (need exactly 1)");

  RootIsolator iso(p, chain, IsolationOptions{opt.max_precision_bits});

  const bool exact_path = !opt.force_interval && sl_ok && (p.degree() == 2 || p.degree() == 3);
  if (exact_path) {
    ensure_certified(iso);
    prof.precision_bits = iso.precision();
    if (iso.all_certified()) split_roots(iso.enclosures(), prof);
    if (p.degree() == 2) {
      const ExactVerdict v = exact_test_q1(p);
      if (!v.accepted) return reject(std::move(prof), RejectReason::RealRootCount, v.reason);
      prof.certification = Certification::ExactQ1;
      prof.lambda = v.lambda;
      prof.detail = v.reason;
    } else {
      const ExactQ2Core v = exact_q2_core(p);
      if (!v.accepted) return reject(std::move(prof), RejectReason::ModulusSeparation, v.reason);
      prof.certification = Certification::ExactQ2;
      prof.detail = v.reason;
    }
    if (!prof.big_root) {
      // Enclosures could not be certified below the ceiling; the exact verdict stands.
      prof.detail += "; root enclosures not certified";
      return prof;
    }
    check_unit_product(prof);
    return prof;
  }

  while (true) {
    if (iso.all_certified()) {
      const Decision d = decide_by_intervals(prof, iso.enclosures(), iso.precision(), opt);
      prof.precision_bits = iso.precision();
      if (d == Decision::Accept) {
        prof.certification = Certification::IntervalCertified;
        prof.detail = "all non-dominant root moduli overlap 1/lambda at " + std::to_string(iso.precision()) + " bits";
        check_unit_product(prof);
        return prof;
      }
      if (d == Decision::Reject) {
        prof.certification = Certification::Rejected;
        return prof;
      }
    }
    if (!iso.refine()) break;
  }
  prof.certification = Certification::Undecided;
  prof.precision_bits = iso.precision();
  prof.detail = "precision ceiling of " + std::to_string(opt.max_precision_bits) + " bits reached";
  if (iso.all_certified()) split_roots(iso.enclosures(), prof);
  return prof;
}

std::optional<bool> irreducible_by_modulus(const IntPolynomial& p, const SpectralProfile& profile) {
  if (!p.is_monic() || abs(p.constant_term()) != 1) return std::nullopt;
  if (!profile.big_root || !(profile.poly == p)) return std::nullopt;
  if (!profile.big_root->certified) return std::nullopt;
  const long bits = profile.big_root->re.precision();
  if (!(modulus_interval(*profile.big_root).lo > one_at(bits))) return std::nullopt;
  if (static_cast<int>(profile.small_roots.size()) != p.degree() - 1) return std::nullopt;
  for (const auto& e : profile.small_roots) {
    if (!e.certified) return std::nullopt;
    if (!(modulus_interval(e).hi < one_at(bits))) return std::nullopt;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Proof replay

namespace {

void require_lambda(const SpectralProfile& profile) {
  if (!profile.lambda || !profile.big_root)
    throw PolyError("replay: profile has no certified dominant real root");
}

// An exact (integer identity) failure outranks interval-based ones.
const ReplayStep* first_failure(const std::vector<ReplayStep>& steps, const std::string& exact_step) {
  for (const auto& s : steps)
    if (s.status == StepStatus::Fails && s.name == exact_step) return &s;
  for (const auto& s : steps)
    if (s.status == StepStatus::Fails) return &s;
  return nullptr;
}

}  // namespace

ReplayReport replay_case_even(const IntPolynomial& p, const SpectralProfile& profile) {
  if (profile.q % 2 != 0) throw PolyError("replay_case_even: q must be even");
  require_lambda(profile);
  const int q = profile.q;
  const int half = q / 2;
  ReplayReport rep;
  rep.replay_case = ReplayCase::Even;
  rep.q = q;

  // Q(X) = X^(2p+1) + a_{2p} X^(p+1) + a_1 X^p - 1.
  std::vector<BigInt> qc(static_cast<std::size_t>(q) + 2);
  qc[static_cast<std::size_t>(q + 1)] += 1;
  qc[static_cast<std::size_t>(half + 1)] += p.coeff(q);
  qc[static_cast<std::size_t>(half)] += p.coeff(1);
  qc[0] += -1;
  rep.constructed_poly = IntPolynomial(std::move(qc));
  const IntPolynomial& Q = rep.constructed_poly;

  const RealInterval& lam = *profile.lambda;
  const RealInterval lam_sq = interval_pow(lam, 2);

  const SturmChain qchain(Q);
  {
    ReplayStep s{"lambda_squared_is_root_of_Q", StepStatus::Undetermined, ""};
    const int hits = qchain.count_in(to_rational(lam_sq.lo), to_rational(lam_sq.hi));
    s.status = hits >= 1 ? StepStatus::Holds : StepStatus::Fails;
    s.detail = std::to_string(hits) + " root(s) of Q inside the lambda^2 enclosure [" + fmt(lam_sq.lo.to_double()) +
               ", " + fmt(lam_sq.hi.to_double()) + "]";
    rep.steps.push_back(std::move(s));
  }

  rep.transformed_poly = power_transform(Q, half);
  rep.identity_holds = rep.transformed_poly == p;
  rep.steps.push_back({"power_transform_of_Q_equals_mu_A", rep.identity_holds ? StepStatus::Holds : StepStatus::Fails,
                       "power_transform(Q, " + std::to_string(half) + ") = " + rep.transformed_poly.render()});

  if (half == 1) {
    rep.steps.push_back({"p_at_least_two_relations", StepStatus::Skipped, "p = 1: Q coincides with mu_A"});
  } else {
    std::vector<RootEnclosure> others;
    bool have_roots = false;
    if (qchain.squarefree()) {
      const auto iso = isolate_roots(Q, 1e-12);
      if (iso.status == IsolationStatus::Certified) {
        have_roots = true;
        bool removed = false;
        for (const auto& e : iso.roots) {
          if (!removed && e.is_real_certified && real_part_interval(e).intersects(lam_sq)) {
            removed = true;
            continue;
          }
          others.push_back(e);
        }
        have_roots = removed;
      }
    }
    if (!have_roots) {
      rep.steps.push_back({"sum_of_other_roots_is_minus_lambda_squared", StepStatus::Undetermined,
                           "roots of Q could not be matched to lambda^2"});
      rep.steps.push_back({"scaled_roots_have_unit_modulus", StepStatus::Undetermined, "roots of Q unavailable"});
    } else {
      // Sum of the other roots: real parts add, imaginary parts cancel in conjugate pairs.
      const long bits = lam.lo.precision();
      MpFloat re_sum(0.0, bits);
      MpFloat rad_sum(0.0, bits);
      for (const auto& e : others) {
        re_sum = re_sum + e.re;
        rad_sum = mp::add(rad_sum, e.radius, MPFR_RNDU);
      }
      const RealInterval sum{mp::sub(re_sum, rad_sum, MPFR_RNDD), mp::add(re_sum, rad_sum, MPFR_RNDU)};
      const RealInterval minus_lam_sq{-lam_sq.hi, -lam_sq.lo};
      const bool ok = sum.intersects(minus_lam_sq);
      rep.steps.push_back({"sum_of_other_roots_is_minus_lambda_squared", ok ? StepStatus::Holds : StepStatus::Fails,
                           "sum r_j ~ " + fmt(sum.mid()) + ", -lambda^2 ~ " + fmt(minus_lam_sq.mid())});

      const RealInterval scale = interval_root(lam, half);
      bool all_contain = true;
      std::string bad;
      for (const auto& e : others) {
        const RealInterval m = interval_mul(scale, modulus_interval(e));
        if (!m.contains(one_at(bits))) all_contain = false;
        if (!m.intersects(RealInterval{one_at(bits), one_at(bits)}) && bad.empty())
          bad = "|lambda^(1/p) r| ~ " + fmt(m.mid()) + " for r ~ " + fmt(e.center().real()) + " + " +
                fmt(e.center().imag()) + "i";
      }
      const StepStatus st = !bad.empty() ? StepStatus::Fails : (all_contain ? StepStatus::Holds : StepStatus::Undetermined);
      rep.steps.push_back({"scaled_roots_have_unit_modulus", st, bad.empty() ? "all scaled moduli enclose 1" : bad});
    }
    // -lambda^-2 = -lambda^(2/p) lambda^2 would force lambda^(4 + 2/p) = 1.
    const RealInterval lhs = interval_pow(lam, 4);
    const RealInterval rhs = interval_mul(lhs, interval_pow(interval_root(lam, half), 2));
    const bool impossible = rhs.lo > one_at(rhs.lo.precision());
    rep.steps.push_back({"reciprocal_sum_relation", impossible ? StepStatus::Fails : StepStatus::Undetermined,
                         "would require lambda^(4+2/p) = 1, but lambda^(4+2/p) >= " + fmt(rhs.lo.to_double()) +
                             " since lambda > 1"});
  }

  if (const ReplayStep* f = first_failure(rep.steps, "power_transform_of_Q_equals_mu_A")) {
    rep.contradiction = f->name + ": " + f->detail;
    rep.exact = f->name == "power_transform_of_Q_equals_mu_A";
  }
  return rep;
}

ReplayReport replay_case_odd(const IntPolynomial& p, const SpectralProfile& profile) {
  if (profile.q % 2 != 1) throw PolyError("replay_case_odd: q must be odd");
  require_lambda(profile);
  const int q = profile.q;
  ReplayReport rep;
  rep.replay_case = ReplayCase::Odd;
  rep.q = q;
  rep.constructed_poly = reverse(p);
  rep.transformed_poly = power_transform(rep.constructed_poly, q);
  rep.identity_holds = rep.transformed_poly == p;

  const RealInterval& lam = *profile.lambda;
  const RealInterval inv_lam = interval_inverse(lam);

  if (q > 1) {
    // Another real root of modulus 1/lambda (z_1 = +-1).
    bool found = false;
    for (const auto& e : profile.small_roots)
      if (e.is_real_certified && modulus_interval(e).intersects(inv_lam)) found = true;
    rep.steps.push_back({"further_real_root_of_modulus_inverse_lambda", found ? StepStatus::Holds : StepStatus::Fails,
                         found ? "a real root +-1/lambda is present" : "no real root has modulus 1/lambda"});
  }

  rep.steps.push_back({"power_transform_of_reverse_equals_mu_A",
                       rep.identity_holds ? StepStatus::Holds : StepStatus::Fails,
                       (q == 1 ? std::string("palindromic check: reverse(P) = ") : "power_transform(reverse(P), " +
                                                                                     std::to_string(q) + ") = ") +
                           rep.transformed_poly.render()});

  if (q > 1) {
    const RealInterval target = interval_pow(lam, -static_cast<long>(q) * q);
    bool any = modulus_interval(*profile.big_root).intersects(target);
    for (const auto& e : profile.small_roots) any = any || modulus_interval(e).intersects(target);
    rep.steps.push_back({"inverse_power_is_root_modulus", any ? StepStatus::Undetermined : StepStatus::Fails,
                         "lambda^(-q^2) ~ " + fmt(target.mid()) +
                             (any ? " overlaps a root modulus" : " differs from every root modulus")});
  }
  if (const ReplayStep* f = first_failure(rep.steps, "power_transform_of_reverse_equals_mu_A")) {
    rep.contradiction = f->name + ": " + f->detail;
    rep.exact = f->name == "power_transform_of_reverse_equals_mu_A";
  }
  return rep;
}

ReplayReport replay(const IntPolynomial& p, const SpectralProfile& profile) {
  return profile.q % 2 == 0 ? replay_case_even(p, profile) : replay_case_odd(p, profile);
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const SpectralProfile& profile) {
  nlohmann::json j;
  j["schema"] = "anosovkit.profile/1";
  j["poly"] = to_json(profile.poly);
  j["text"] = profile.poly.render();
  j["q"] = profile.q;
  j["certification"] = to_string(profile.certification);
  j["accepted"] = profile.accepted();
  j["reason"] = to_string(profile.reason);
  j["detail"] = profile.detail;
  if (profile.lambda) {
    auto lam = to_json(*profile.lambda);
    lam["value"] = profile.lambda->mid();
    j["lambda"] = lam;
  } else {
    j["lambda"] = nullptr;
  }
  j["big_root"] = profile.big_root ? to_json(*profile.big_root) : nlohmann::json(nullptr);
  nlohmann::json small = nlohmann::json::array();
  for (const auto& e : profile.small_roots) small.push_back(to_json(e));
  j["small_roots"] = small;
  j["precision_bits"] = profile.precision_bits;
  j["unit_product_consistent"] = profile.unit_product_consistent;
  return j;
}

nlohmann::json to_json(const ReplayReport& report) {
  nlohmann::json j;
  j["schema"] = "anosovkit.replay/1";
  j["case"] = report.replay_case == ReplayCase::Even ? "even" : "odd";
  j["q"] = report.q;
  j["constructed_poly"] = to_json(report.constructed_poly);
  j["transformed_poly"] = to_json(report.transformed_poly);
  j["identity_holds"] = report.identity_holds;
  j["contradiction"] = report.contradiction ? nlohmann::json(*report.contradiction) : nlohmann::json(nullptr);
  j["exact"] = report.exact;
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : report.steps) steps.push_back({{"name", s.name}, {"status", to_string(s.status)}, {"detail", s.detail}});
  j["steps"] = steps;
  return j;
}

}  // namespace anosovkit
