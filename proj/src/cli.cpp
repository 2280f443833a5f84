#include "anosovkit/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "anosovkit/geomlab.hpp"
#include "anosovkit/intpoly.hpp"
#include "anosovkit/otkahler.hpp"
#include "anosovkit/searchkit.hpp"
#include "anosovkit/spectra.hpp"

namespace anosovkit::cli {

namespace {

constexpr const char* kPrecisionEnv = "ANOSOVKIT_PRECISION_BITS";

struct Config {
  std::string poly;
  int degree = 0;
  int bound = 0;
  int workers = 1;
  bool gl = false;
  bool force_interval = false;
  long precision = 0;
  int samples = 100;
  std::uint64_t seed = 1;
  int s = 1;
  std::string out_path;
  std::string csv_path;
  bool cross = false;
  double oracle_tol = 1e-6;
  bool timing = false;
  bool no_near_miss = false;
  bool strict = false;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

long precision_ceiling(const Config& c) {
  if (c.precision != 0) {
    if (c.precision < 64) throw UsageError("--precision must be >= 64");
    return c.precision;
  }
  if (const char* env = std::getenv(kPrecisionEnv)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 64) throw UsageError(std::string(kPrecisionEnv) + " must be an integer >= 64");
    return v;
  }
  return 4096;
}

ClassifyOptions classify_options(const Config& c) {
  ClassifyOptions o;
  o.allow_gl = c.gl;
  o.force_interval = c.force_interval;
  o.max_precision_bits = precision_ceiling(c);
  o.min_accept_bits = std::min<long>(o.min_accept_bits, o.max_precision_bits);
  return o;
}

int verdict_code(const SpectralProfile& p) {
  if (p.accepted()) return Success;
  return p.certification == Certification::Undecided ? Undecided : Rejected;
}

nlohmann::json diagnostic(const std::string& type, const std::string& message) {
  return {{"schema", "anosovkit.error/1"}, {"error", {{"type", type}, {"message", message}}}};
}

void emit(const nlohmann::json& j, const Config& c, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + c.out_path);
  f << text;
}

int cmd_search(const Config& c, std::ostream& out, std::ostream& err) {
  SearchOptions o;
  o.degree = c.degree;
  o.bound = c.bound;
  o.det_one = !c.gl;
  o.workers = c.workers;
  o.classify = classify_options(c);
  o.replay_near_misses = !c.no_near_miss;
  if (o.degree < 2 || o.degree > 10) throw UsageError("--degree must be in [2, 10]");
  if (o.bound < 1) throw UsageError("--bound must be at least 1");
  const SearchReport r = search(o);
  nlohmann::json j = to_json(r, c.timing);
  if (c.cross) {
    if (r.degree > 6) throw UsageError("--cross-check supports degree <= 6");
    nlohmann::json d = nlohmann::json::array();
    for (const auto& x : cross_check(r, c.oracle_tol)) d.push_back(to_json(x));
    j["discrepancies"] = d;
  }
  emit(j, c, out);
  if (!c.csv_path.empty()) {
    std::ofstream f(c.csv_path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + c.csv_path);
    f << to_csv(r);
  }
  err << "search: " << r.candidate_count << " candidates, " << r.accepted.size() << " accepted, "
      << r.undecided.size() << " undecided, " << r.wall_time_seconds << " s\n";
  return r.undecided.empty() ? Success : Undecided;
}

int cmd_certify(const Config& c, std::ostream& out) {
  const SpectralProfile p = classify(parse_poly(c.poly), classify_options(c));
  emit(to_json(p), c, out);
  return verdict_code(p);
}

int cmd_replay(const Config& c, std::ostream& out) {
  const IntPolynomial poly = parse_poly(c.poly);
  const SpectralProfile p = classify(poly, classify_options(c));
  if (!p.lambda || !p.big_root) {
    nlohmann::json j = diagnostic("NoDominantRoot", "no certified real root > 1 to replay: " + p.detail);
    j["profile"] = to_json(p);
    emit(j, c, out);
    return p.certification == Certification::Undecided ? Undecided : Rejected;
  }
  emit({{"schema", "anosovkit.replay_run/1"}, {"profile", to_json(p)}, {"replay", to_json(replay(poly, p))}}, c, out);
  return Success;
}

int cmd_build(const Config& c, std::ostream& out) {
  const IntPolynomial poly = parse_poly(c.poly);
  const SpectralProfile p = classify(poly, classify_options(c));
  if (!p.accepted()) {
    nlohmann::json j = diagnostic("NotAccepted", "build requires an accepted profile: " + p.detail);
    j["profile"] = to_json(p);
    emit(j, c, out);
    return verdict_code(p);
  }
  const KourganoffCertificate cert = build_certificate(poly, p);
  emit({{"schema", "anosovkit.build/1"}, {"certificate", to_json(cert)}, {"model", to_json(make_model(cert))}}, c, out);
  return Success;
}

int cmd_verify_torus(const Config& c, std::ostream& out) {
  const IntPolynomial poly = parse_poly(c.poly);
  const SpectralProfile p = classify(poly, classify_options(c));
  if (!p.accepted()) {
    nlohmann::json j = diagnostic("NotAccepted", "verify-torus requires an accepted profile: " + p.detail);
    j["profile"] = to_json(p);
    emit(j, c, out);
    return verdict_code(p);
  }
  if (c.samples < 1) throw UsageError("--samples must be positive");
  const TorusVerification v = verify_torus(poly, p, c.samples, c.seed);
  nlohmann::json j = to_json(v);
  j["seed"] = c.seed;
  const bool ok = v.cert.residual_orthogonality <= 1e-12 && v.cert.b_eigenvalues.minCoeff() > 0 &&
                  v.deck.max_relative_deviation <= 1e-10 && v.curvature.max_relative_error <= 1e-4 &&
                  v.curvature.flat_block_max <= 1e-6;
  j["passed"] = ok;
  emit(j, c, out);
  return ok || !c.strict ? Success : Rejected;
}

int cmd_verify_ot(const Config& c, std::ostream& out) {
  if (c.s < 1 || c.s > 8) throw UsageError("--s must be in [1, 8]");
  if (c.samples < 1) throw UsageError("--samples must be positive");
  const ot::SuiteReport r = ot::run_suite(c.s, c.samples, c.seed);
  const nlohmann::json j = ot::to_json(r);
  emit(j, c, out);
  bool ok = true;
  for (const auto& [k, v] : j["passed"].items()) ok = ok && v.get<bool>();
  return ok || !c.strict ? Success : Rejected;
}

int cmd_factor(const Config& c, std::ostream& out) {
  const IntPolynomial poly = parse_poly(c.poly);
  const Factorization f = factor_oracle(poly, 10);
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& x : f.factors) factors.push_back({{"coeffs", to_json(x)["coeffs"]}, {"text", x.render()}});
  emit({{"schema", "anosovkit.factor/1"},
        {"poly", to_json(poly)},
        {"text", poly.render()},
        {"irreducible", f.irreducible},
        {"factors", factors}},
       c, out);
  return Success;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Spectral search, proof replay and geometry checks for hyperbolic integer matrices", "anosovkit"};
  app.require_subcommand(1);
  auto precision_opt = [&](CLI::App* s) {
    s->add_option("--precision", c.precision, "Precision ceiling in bits (env " + std::string(kPrecisionEnv) + ")");
  };
  auto out_opt = [&](CLI::App* s) { s->add_option("--out", c.out_path, "Write the JSON report to this file"); };

  CLI::App* search_cmd = app.add_subcommand("search", "Exhaustive coefficient-bounded search");
  search_cmd->add_option("--degree", c.degree, "Polynomial degree q+1")->required();
  search_cmd->add_option("--bound", c.bound, "Bound on |interior coefficients|")->required();
  search_cmd->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
  search_cmd->add_flag("--gl", c.gl, "Allow constant term +-1 (exploratory)");
  search_cmd->add_option("--csv", c.csv_path, "Write the accepted list as CSV");
  search_cmd->add_flag("--cross-check", c.cross, "Compare against the double-precision oracle");
  search_cmd->add_option("--oracle-tol", c.oracle_tol, "Oracle tolerance for --cross-check")
      ->check(CLI::PositiveNumber);
  search_cmd->add_flag("--timing", c.timing, "Include wall time in the JSON report");
  search_cmd->add_flag("--no-near-miss", c.no_near_miss, "Skip replays of rejected candidates");
  precision_opt(search_cmd);
  out_opt(search_cmd);

  std::vector<CLI::App*> poly_cmds;
  CLI::App* certify_cmd = app.add_subcommand("certify", "Classify one polynomial");
  CLI::App* replay_cmd = app.add_subcommand("replay", "Replay the case analysis for one polynomial");
  CLI::App* build_cmd = app.add_subcommand("build", "Companion matrix, splitting, form b and torus model");
  CLI::App* torus_cmd = app.add_subcommand("verify-torus", "Numerical checks of the mapping torus metric");
  CLI::App* factor_cmd = app.add_subcommand("factor", "Brute-force factorization oracle");
  for (CLI::App* s : {certify_cmd, replay_cmd, build_cmd, torus_cmd, factor_cmd}) {
    s->add_option("poly", c.poly, "Polynomial, e.g. \"x^3 - x - 1\" or \"[-1,-1,0,1]\"")->required();
    out_opt(s);
  }
  for (CLI::App* s : {certify_cmd, replay_cmd, build_cmd, torus_cmd}) {
    s->add_flag("--gl", c.gl, "Allow constant term +-1 (exploratory)");
    precision_opt(s);
  }
  certify_cmd->add_flag("--force-interval", c.force_interval, "Use interval certification in degrees 2 and 3 too");
  torus_cmd->add_option("--samples", c.samples, "Random sample points");
  torus_cmd->add_option("--seed", c.seed, "Seed for sample points");
  torus_cmd->add_flag("--strict", c.strict, "Exit 1 when a check fails");

  CLI::App* ot_cmd = app.add_subcommand("verify-ot", "Finite-difference checks of the Kahler potential formulas");
  ot_cmd->add_option("--s", c.s, "Number of upper half-plane factors")->required();
  ot_cmd->add_option("--samples", c.samples, "Random sample points");
  ot_cmd->add_option("--seed", c.seed, "Seed for sample points");
  ot_cmd->add_flag("--strict", c.strict, "Exit 1 when a check fails");
  out_opt(ot_cmd);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Success;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return Success;
    }
    err << "usage error: " << e.what() << "\n" << app.help();
    return Usage;
  }

  try {
    if (search_cmd->parsed()) return cmd_search(c, out, err);
    if (certify_cmd->parsed()) return cmd_certify(c, out);
    if (replay_cmd->parsed()) return cmd_replay(c, out);
    if (build_cmd->parsed()) return cmd_build(c, out);
    if (torus_cmd->parsed()) return cmd_verify_torus(c, out);
    if (ot_cmd->parsed()) return cmd_verify_ot(c, out);
    if (factor_cmd->parsed()) return cmd_factor(c, out);
  } catch (const ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return Usage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return Usage;
  } catch (const PolyError& e) {
    out << diagnostic("PolyError", e.what()).dump(2) << "\n";
    return Usage;
  } catch (const std::exception& e) {
    out << diagnostic("NumericFailure", e.what()).dump(2) << "\n";
    return Undecided;
  }
  return Usage;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace anosovkit::cli
