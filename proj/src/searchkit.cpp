#include "anosovkit/searchkit.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

namespace anosovkit {

Enumerator::Enumerator(int degree, int bound, bool det_one) {
  init(degree, bound, det_one);
  lead_lo_ = -bound;
  lead_hi_ = bound;
  digits_[0] = lead_lo_;
}

Enumerator::Enumerator(int degree, int bound, bool det_one, int leading) {
  init(degree, bound, det_one);
  if (leading < -bound || leading > bound) throw std::invalid_argument("shard outside coefficient range");
  lead_lo_ = lead_hi_ = leading;
  digits_[0] = leading;
}

void Enumerator::init(int degree, int bound, bool det_one) {
  if (degree < 2) throw std::invalid_argument("degree must be at least 2");
  if (bound < 1) throw std::invalid_argument("bound must be at least 1");
  degree_ = degree;
  bound_ = bound;
  det_one_ = det_one;
  digits_.assign(static_cast<std::size_t>(degree), -bound);
  digits_.back() = det_one ? (degree % 2 == 0 ? 1 : -1) : -1;
}

std::uint64_t Enumerator::size() const {
  std::uint64_t n = static_cast<std::uint64_t>(lead_hi_ - lead_lo_ + 1);
  for (int i = 1; i < degree_ - 1; ++i) n *= static_cast<std::uint64_t>(2 * bound_ + 1);
  return det_one_ ? n : 2 * n;
}

std::optional<IntPolynomial> Enumerator::next() {
  if (done_) return std::nullopt;
  const std::size_t n = static_cast<std::size_t>(degree_);
  std::vector<BigInt> c(n + 1);
  c[n] = 1;
  for (std::size_t k = 0; k < n; ++k) c[n - 1 - k] = digits_[k];
  IntPolynomial out(std::move(c));

  // Odometer step, last digit fastest.
  std::size_t k = n - 1;
  if (!det_one_ && digits_[k] == -1) {
    digits_[k] = 1;
    return out;
  }
  if (!det_one_) digits_[k] = -1;
  while (true) {
    if (k == 0) {
      done_ = true;
      break;
    }
    --k;
    const int hi = k == 0 ? lead_hi_ : bound_;
    const int lo = k == 0 ? lead_lo_ : -bound_;
    if (digits_[k] < hi) {
      ++digits_[k];
      break;
    }
    digits_[k] = lo;
  }
  return out;
}

std::vector<IntPolynomial> enumerate(int degree, int bound, bool det_one) {
  Enumerator e(degree, bound, det_one);
  std::vector<IntPolynomial> out;
  out.reserve(static_cast<std::size_t>(e.size()));
  while (auto p = e.next()) out.push_back(std::move(*p));
  return out;
}

std::uint64_t candidate_count(int degree, int bound, bool det_one) { return Enumerator(degree, bound, det_one).size(); }

std::uint64_t SearchReport::rejected_count() const {
  std::uint64_t n = 0;
  for (const auto& [k, v] : rejected) n += v;
  return n;
}

namespace {

struct ShardResult {
  std::uint64_t count = 0;
  std::vector<AcceptedEntry> accepted;
  std::map<std::string, std::uint64_t> rejected;
  std::vector<SpectralProfile> undecided;
  NearMissStats near;
};

void replay_near_miss(const IntPolynomial& p, const SpectralProfile& prof, NearMissStats& stats) {
  ReplayReport rep;
  try {
    rep = replay(p, prof);
  } catch (const std::exception&) {
    ++stats.by_step["replay_error"];
    return;
  }
  ++stats.replayed;
  if (!rep.contradiction) {
    ++stats.without_contradiction;
    return;
  }
  if (rep.exact) ++stats.exact_contradictions;
  const std::string& c = *rep.contradiction;
  ++stats.by_step[c.substr(0, c.find(':'))];
}

ShardResult run_shard(const SearchOptions& opt, int leading) {
  ShardResult r;
  Enumerator e(opt.degree, opt.bound, opt.det_one, leading);
  while (auto p = e.next()) {
    ++r.count;
    SpectralProfile prof = classify(*p, opt.classify);
    switch (prof.certification) {
      case Certification::Undecided:
        r.undecided.push_back(std::move(prof));
        break;
      case Certification::Rejected:
        ++r.rejected[to_string(prof.reason)];
        if (opt.replay_near_misses && opt.degree >= 4 && prof.lambda && prof.big_root)
          replay_near_miss(*p, prof, r.near);
        break;
      default: {
        AcceptedEntry a{std::move(prof), {}};
        a.replay = replay(*p, a.profile);
        r.accepted.push_back(std::move(a));
      }
    }
  }
  return r;
}

}  // namespace

SearchReport search(const SearchOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  if (opt.degree < 2) throw std::invalid_argument("degree must be at least 2");
  if (opt.bound < 1) throw std::invalid_argument("bound must be at least 1");
  const int shards = 2 * opt.bound + 1;
  std::vector<ShardResult> results(static_cast<std::size_t>(shards));
  std::atomic<int> next{0};
  std::vector<std::string> errors(static_cast<std::size_t>(shards));

  auto worker = [&] {
    for (int s = next++; s < shards; s = next++) {
      try {
        results[static_cast<std::size_t>(s)] = run_shard(opt, s - opt.bound);
      } catch (const std::exception& ex) {
        errors[static_cast<std::size_t>(s)] = ex.what();
      }
    }
  };
  const int nworkers = std::clamp(opt.workers, 1, shards);
  if (nworkers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nworkers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error("search shard failed: " + e);

  SearchReport rep;
  rep.degree = opt.degree;
  rep.coeff_bound = opt.bound;
  rep.det_one = opt.det_one;
  for (auto& r : results) {
    rep.candidate_count += r.count;
    for (auto& a : r.accepted) rep.accepted.push_back(std::move(a));
    for (const auto& [k, v] : r.rejected) rep.rejected[k] += v;
    for (auto& u : r.undecided) rep.undecided.push_back(std::move(u));
    rep.near_misses.replayed += r.near.replayed;
    rep.near_misses.exact_contradictions += r.near.exact_contradictions;
    rep.near_misses.without_contradiction += r.near.without_contradiction;
    for (const auto& [k, v] : r.near.by_step) rep.near_misses.by_step[k] += v;
  }
  rep.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Hardware-precision oracle

bool oracle_accepts(const IntPolynomial& p, double tol, double* margin) {
  const int n = p.degree();
  if (n < 2 || !p.is_monic()) return false;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) c(i, n - 1) = -p.coeff(i).convert_to<double>();
  const Eigen::VectorXcd ev = c.eigenvalues();
  std::vector<std::complex<double>> roots(ev.data(), ev.data() + n);
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) { return std::abs(a) > std::abs(b); });

  const auto big = roots[0];
  double m = std::abs(big) - 1.0;  // distance to the nearest decision boundary
  bool ok = std::abs(big) > 1.0 + tol && std::abs(big.imag()) <= tol && big.real() > 0;
  m = std::min(m, std::abs(std::abs(big.imag()) - tol));
  const double target = std::pow(big.real(), -1.0 / (n - 1));
  for (int i = 1; i < n; ++i) {
    const double d = std::abs(std::abs(roots[static_cast<std::size_t>(i)]) - target);
    ok = ok && d <= tol;
    m = std::min(m, std::abs(d - tol));
    if (std::abs(roots[static_cast<std::size_t>(i)]) > 1.0 + tol) ok = false;
  }
  if (margin) *margin = m;
  return ok;
}

std::vector<Discrepancy> cross_check(const SearchReport& report, double tol) {
  std::set<std::vector<BigInt>> accepted;
  std::set<std::vector<BigInt>> undecided;
  for (const auto& a : report.accepted) accepted.insert(a.profile.poly.coeffs());
  for (const auto& u : report.undecided) undecided.insert(u.poly.coeffs());

  std::vector<Discrepancy> out;
  Enumerator e(report.degree, report.coeff_bound, report.det_one);
  while (auto p = e.next()) {
    double margin = 0;
    const bool oracle = oracle_accepts(*p, tol, &margin);
    const std::string ov = oracle ? "accepted" : "rejected";
    if (undecided.count(p->coeffs())) {
      out.push_back({*p, "undecided", ov, "undecided", "certified path reached the precision ceiling"});
      continue;
    }
    const bool certified = accepted.count(p->coeffs()) > 0;
    if (certified == oracle) continue;
    Discrepancy d{*p, certified ? "accepted" : "rejected", ov, "acceptance", ""};
    if (!certified && margin < 100 * tol) {
      d.severity = "near_boundary";
      d.note = "oracle decision margin " + std::to_string(margin) + " is within 100 tol";
    } else {
      d.note = "oracle decision margin " + std::to_string(margin);
    }
    out.push_back(std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string coeff_cell(const IntPolynomial& p) {
  std::string s;
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    if (i) s += ';';
    s += p.coeffs()[i].str();
  }
  return s;
}

}  // namespace

nlohmann::json to_json(const SearchReport& r, bool include_timing) {
  nlohmann::json j;
  j["schema"] = "anosovkit.search/1";
  j["degree"] = r.degree;
  j["coeff_bound"] = r.coeff_bound;
  j["det_constraint"] = r.det_one ? "SL" : "GL";
  j["candidate_count"] = r.candidate_count;
  j["accepted_count"] = r.accepted.size();
  j["rejected_count"] = r.rejected_count();
  j["undecided_count"] = r.undecided.size();
  nlohmann::json acc = nlohmann::json::array();
  for (const auto& a : r.accepted) {
    nlohmann::json e;
    e["coeffs"] = to_json(a.profile.poly)["coeffs"];
    e["text"] = a.profile.poly.render();
    e["q"] = a.profile.q;
    e["lambda"] = a.profile.lambda ? nlohmann::json(a.profile.lambda->mid()) : nlohmann::json(nullptr);
    e["certification"] = to_string(a.profile.certification);
    e["profile"] = to_json(a.profile);
    e["replay"] = to_json(a.replay);
    acc.push_back(std::move(e));
  }
  j["accepted"] = acc;
  j["rejected"] = nlohmann::json::object();
  for (const auto& [k, v] : r.rejected) j["rejected"][k] = v;
  nlohmann::json und = nlohmann::json::array();
  for (const auto& u : r.undecided) und.push_back(to_json(u));
  j["undecided"] = und;
  nlohmann::json nm;
  nm["replayed"] = r.near_misses.replayed;
  nm["exact_contradictions"] = r.near_misses.exact_contradictions;
  nm["without_contradiction"] = r.near_misses.without_contradiction;
  nm["contradiction_by_step"] = nlohmann::json::object();
  for (const auto& [k, v] : r.near_misses.by_step) nm["contradiction_by_step"][k] = v;
  j["near_miss_replay"] = nm;
  if (include_timing) j["wall_time_seconds"] = r.wall_time_seconds;
  return j;
}

nlohmann::json to_json(const Discrepancy& d) {
  return {{"coeffs", to_json(d.poly)["coeffs"]},
          {"text", d.poly.render()},
          {"certified", d.certified},
          {"oracle", d.oracle},
          {"severity", d.severity},
          {"note", d.note}};
}

std::string to_csv(const SearchReport& r) {
  std::ostringstream s;
  s << "coeffs,q,lambda,certification\n";
  for (const auto& a : r.accepted) {
    s << coeff_cell(a.profile.poly) << ',' << a.profile.q << ',';
    if (a.profile.lambda) s << std::setprecision(15) << a.profile.lambda->mid();
    s << ',' << to_string(a.profile.certification) << '\n';
  }
  return s.str();
}

}  // namespace anosovkit
