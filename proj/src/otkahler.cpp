#include "anosovkit/otkahler.hpp"

#include <algorithm>
#include <cmath>

namespace anosovkit::ot {

void HyperPoint::validate() const {
  for (const auto& w : zs)
    if (!(w.imag() > 0)) throw OtError("HyperPoint: every y_k must be positive");
}

double u_value(const HyperPoint& p) {
  p.validate();
  double prod = 1;
  for (const auto& w : p.zs) prod *= w.imag();
  return 1.0 / prod;
}

double F_value(const HyperPoint& p) { return std::norm(p.z) + u_value(p); }

Steps relative_steps(const HyperPoint& p, double factor) {
  Steps s;
  s.h.push_back(factor * std::max(1.0, std::abs(p.z)));
  for (const auto& w : p.zs) s.h.push_back(factor * w.imag());
  return s;
}

namespace {

// Real coordinate r: 2k is Re w_k, 2k+1 is Im w_k.
HyperPoint shifted(HyperPoint p, int r, double by) {
  const int k = r / 2;
  cd& w = k == 0 ? p.z : p.zs[static_cast<std::size_t>(k - 1)];
  w += r % 2 == 0 ? cd(by, 0) : cd(0, by);
  return p;
}

double step_of(const HyperPoint& p, const Steps& st, int r) {
  const int k = r / 2;
  const double h = st.h.at(static_cast<std::size_t>(k));
  const double scale = k == 0 ? std::max(1.0, std::abs(p.z)) : p.zs[static_cast<std::size_t>(k - 1)].imag();
  if (!(h > 1e-12 * scale)) throw OtError("step too small: finite differences would cancel");
  return h;
}

double partial(const RealFunction& f, const HyperPoint& p, const Steps& st, int r) {
  const double h = step_of(p, st, r);
  return (f(shifted(p, r, h)) - f(shifted(p, r, -h))) / (2 * h);
}

double second_partial(const RealFunction& f, const HyperPoint& p, const Steps& st, int a, int b, double f0) {
  const double ha = step_of(p, st, a);
  if (a == b) return (f(shifted(p, a, ha)) - 2 * f0 + f(shifted(p, a, -ha))) / (ha * ha);
  const double hb = step_of(p, st, b);
  const HyperPoint pp = shifted(shifted(p, a, ha), b, hb);
  const HyperPoint pm = shifted(shifted(p, a, ha), b, -hb);
  const HyperPoint mp = shifted(shifted(p, a, -ha), b, hb);
  const HyperPoint mm = shifted(shifted(p, a, -ha), b, -hb);
  return (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * ha * hb);
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

bool definite(const Eigen::MatrixXcd& m, int sign) {
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(0.5 * (m + m.adjoint())).eigenvalues();
  return sign > 0 ? ev.minCoeff() > 0 : ev.maxCoeff() < 0;
}

}  // namespace

Gradient wirtinger_gradient(const RealFunction& f, const HyperPoint& p, const Steps& steps) {
  p.validate();
  Gradient g;
  for (int k = 0; k <= p.s(); ++k) {
    const double fx = partial(f, p, steps, 2 * k);
    const double fy = partial(f, p, steps, 2 * k + 1);
    g.d.emplace_back(0.5 * fx, -0.5 * fy);
    g.dbar.emplace_back(0.5 * fx, 0.5 * fy);
  }
  return g;
}

Eigen::MatrixXcd wirtinger_hessian(const RealFunction& f, const HyperPoint& p, const Steps& steps) {
  p.validate();
  const int n = p.s() + 1;
  const double f0 = f(p);
  Eigen::MatrixXd d2(2 * n, 2 * n);
  for (int a = 0; a < 2 * n; ++a)
    for (int b = a; b < 2 * n; ++b) d2(a, b) = d2(b, a) = second_partial(f, p, steps, a, b, f0);
  Eigen::MatrixXcd h(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const int xj = 2 * j, yj = 2 * j + 1, xk = 2 * k, yk = 2 * k + 1;
      h(j, k) = 0.25 * cd(d2(xj, xk) + d2(yj, yk), d2(xj, yk) - d2(yj, xk));
    }
  return h;
}

double hessian_halving_change(const RealFunction& f, const HyperPoint& p, const Steps& steps) {
  Steps half = steps;
  for (auto& h : half.h) h *= 0.5;
  const Eigen::MatrixXcd a = wirtinger_hessian(f, p, steps);
  const Eigen::MatrixXcd b = wirtinger_hessian(f, p, half);
  return max_abs(a - b) / std::max(max_abs(b), 1e-300);
}

HermitianMatrixSample metric_closed_form(const HyperPoint& p) {
  const double u = u_value(p);
  const int s = p.s();
  Eigen::MatrixXcd h(s, s);
  for (int j = 0; j < s; ++j)
    for (int k = 0; k < s; ++k) {
      const double yj = p.zs[static_cast<std::size_t>(j)].imag();
      const double yk = p.zs[static_cast<std::size_t>(k)].imag();
      h(j, k) = (u / 4) * (1.0 + (j == k ? 1.0 : 0.0)) / (yj * yk);
    }
  return {p, h, Source::ClosedForm};
}

HermitianMatrixSample metric_finite_difference(const HyperPoint& p, double step_factor) {
  const Eigen::MatrixXcd full = wirtinger_hessian(u_value, p, relative_steps(p, step_factor));
  return {p, full.bottomRightCorner(p.s(), p.s()), Source::FiniteDifference};
}

double determinant_closed_form(const HyperPoint& p) {
  const int s = p.s();
  return (s + 1) * std::pow(u_value(p), s + 2) / std::pow(4.0, s);
}

std::vector<std::vector<Rational>> metric_exact(const std::vector<Rational>& y) {
  Rational u = 1;
  for (const auto& v : y) {
    if (v <= 0) throw OtError("metric_exact: every y_k must be positive");
    u /= v;
  }
  const std::size_t s = y.size();
  std::vector<std::vector<Rational>> h(s, std::vector<Rational>(s));
  for (std::size_t j = 0; j < s; ++j)
    for (std::size_t k = 0; k < s; ++k) h[j][k] = u / 4 * Rational(j == k ? 2 : 1) / (y[j] * y[k]);
  return h;
}

Rational determinant_exact(const std::vector<Rational>& y) {
  auto m = metric_exact(y);
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Rational f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

bool determinant_identity_exact(const std::vector<Rational>& y) {
  Rational u = 1;
  for (const auto& v : y) u /= v;
  const int s = static_cast<int>(y.size());
  Rational rhs = s + 1;
  for (int i = 0; i < s + 2; ++i) rhs *= u;
  for (int i = 0; i < s; ++i) rhs /= 4;
  return determinant_exact(y) == rhs;
}

Eigen::MatrixXcd ricci_stated_form(const HyperPoint& p) {
  p.validate();
  const int s = p.s();
  Eigen::MatrixXcd r(s, s);
  for (int j = 0; j < s; ++j)
    for (int k = 0; k < s; ++k)
      r(j, k) = -((s + 2) / 4.0) * (2.0 + (j == k ? 1.0 : 0.0)) /
                (p.zs[static_cast<std::size_t>(j)].imag() * p.zs[static_cast<std::size_t>(k)].imag());
  return r;
}

Eigen::MatrixXcd ricci_derived_form(const HyperPoint& p) {
  p.validate();
  const int s = p.s();
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(s, s);
  for (int j = 0; j < s; ++j) {
    const double y = p.zs[static_cast<std::size_t>(j)].imag();
    r(j, j) = -((s + 2) / 4.0) / (y * y);
  }
  return r;
}

Eigen::MatrixXcd ricci_finite_difference(const HyperPoint& p, double step_factor) {
  const RealFunction log_det = [](const HyperPoint& q) {
    return std::log(metric_closed_form(q).h.real().determinant());
  };
  const Eigen::MatrixXcd full = wirtinger_hessian(log_det, p, relative_steps(p, step_factor));
  return -full.bottomRightCorner(p.s(), p.s());
}

double check_first_derivatives(const HyperPoint& p, bool relative, double step_factor) {
  const Gradient g = wirtinger_gradient(u_value, p, relative_steps(p, step_factor));
  const double u = u_value(p);
  double dev = 0, scale = 0;
  dev = std::max(dev, std::max(std::abs(g.d[0]), std::abs(g.dbar[0])));  // u does not depend on z
  for (int j = 0; j < p.s(); ++j) {
    const cd zj = p.zs[static_cast<std::size_t>(j)];
    const cd diff = zj - std::conj(zj);
    const cd d_closed = -u / diff;
    const cd dbar_closed = u / diff;
    dev = std::max(dev, std::abs(g.d[static_cast<std::size_t>(j + 1)] - d_closed));
    dev = std::max(dev, std::abs(g.dbar[static_cast<std::size_t>(j + 1)] - dbar_closed));
    scale = std::max(scale, std::abs(d_closed));
  }
  return relative ? dev / scale : dev;
}

double check_metric(const HyperPoint& p, bool relative, double step_factor) {
  const Eigen::MatrixXcd closed = metric_closed_form(p).h;
  const Eigen::MatrixXcd num = metric_finite_difference(p, step_factor).h;
  const double dev = max_abs(num - closed);
  return relative ? dev / max_abs(closed) : dev;
}

double check_determinant(const HyperPoint& p) {
  const double direct = metric_closed_form(p).h.real().determinant();
  return std::abs(direct - determinant_closed_form(p)) / std::abs(direct);
}

PointChecks check_point(const HyperPoint& p, const CheckOptions& opt) {
  PointChecks c;
  c.grad_abs = check_first_derivatives(p, false, opt.gradient_step);
  c.grad_rel = check_first_derivatives(p, true, opt.gradient_step);

  const Eigen::MatrixXcd closed = metric_closed_form(p).h;
  const Eigen::MatrixXcd full_u = wirtinger_hessian(u_value, p, relative_steps(p, opt.hessian_step));
  const Eigen::MatrixXcd num = full_u.bottomRightCorner(p.s(), p.s());
  c.metric_abs = max_abs(num - closed);
  c.metric_rel = c.metric_abs / max_abs(closed);
  c.hermitian = std::max(max_abs(closed - closed.adjoint()), max_abs(num - num.adjoint()));
  c.h_positive_definite = definite(closed, +1);

  const Eigen::MatrixXcd full_f = wirtinger_hessian(F_value, p, relative_steps(p, opt.hessian_step));
  Eigen::MatrixXcd product = Eigen::MatrixXcd::Zero(p.s() + 1, p.s() + 1);
  product(0, 0) = 1.0;
  product.bottomRightCorner(p.s(), p.s()) = closed;
  c.flat_factor = max_abs(full_f - product) / max_abs(product);

  c.det_rel = check_determinant(p);

  const Eigen::MatrixXcd ric = ricci_finite_difference(p, opt.hessian_step);
  const Eigen::MatrixXcd stated = ricci_stated_form(p);
  const Eigen::MatrixXcd derived = ricci_derived_form(p);
  c.ricci_stated_rel = max_abs(ric - stated) / max_abs(stated);
  c.ricci_derived_rel = max_abs(ric - derived) / max_abs(derived);
  const RealFunction log_u = [](const HyperPoint& q) { return std::log(u_value(q)); };
  const Eigen::MatrixXcd via_u =
      -static_cast<double>(p.s() + 2) *
      Eigen::MatrixXcd(wirtinger_hessian(log_u, p, relative_steps(p, opt.hessian_step))
                           .bottomRightCorner(p.s(), p.s()));
  c.ricci_log_u_rel = max_abs(ric - via_u) / max_abs(via_u);
  c.hermitian = std::max({c.hermitian, max_abs(ric - ric.adjoint()), max_abs(stated - stated.adjoint())});
  c.ricci_stated_negative_definite = definite(stated, -1);
  c.ricci_derived_negative_definite = definite(derived, -1);
  c.ricci_numeric_negative_definite = definite(ric, -1);
  return c;
}

double convergence_ratio(const HyperPoint& p, double step_factor) {
  return check_metric(p, false, step_factor) / check_metric(p, false, step_factor / 2);
}

HyperPoint random_point(int s, std::mt19937_64& rng) {
  if (s < 1) throw OtError("random_point: s must be at least 1");
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> logy(std::log(0.1), std::log(10.0));
  HyperPoint p;
  p.z = cd(unit(rng), unit(rng));
  for (int k = 0; k < s; ++k) p.zs.emplace_back(unit(rng), std::exp(logy(rng)));
  return p;
}

SuiteReport run_suite(int s, int samples, std::uint64_t seed, const CheckOptions& options) {
  if (s < 1) throw OtError("run_suite: s must be at least 1");
  SuiteReport r;
  r.s = s;
  r.samples = samples;
  r.seed = seed;
  r.steps = options;
  std::mt19937_64 rng(seed);
  PointChecks& w = r.worst;
  w.h_positive_definite = w.ricci_stated_negative_definite = w.ricci_derived_negative_definite =
      w.ricci_numeric_negative_definite = true;
  for (int i = 0; i < samples; ++i) {
    const PointChecks c = check_point(random_point(s, rng), options);
    w.grad_abs = std::max(w.grad_abs, c.grad_abs);
    w.grad_rel = std::max(w.grad_rel, c.grad_rel);
    w.metric_abs = std::max(w.metric_abs, c.metric_abs);
    w.metric_rel = std::max(w.metric_rel, c.metric_rel);
    w.hermitian = std::max(w.hermitian, c.hermitian);
    w.flat_factor = std::max(w.flat_factor, c.flat_factor);
    w.det_rel = std::max(w.det_rel, c.det_rel);
    w.ricci_stated_rel = std::max(w.ricci_stated_rel, c.ricci_stated_rel);
    w.ricci_derived_rel = std::max(w.ricci_derived_rel, c.ricci_derived_rel);
    w.ricci_log_u_rel = std::max(w.ricci_log_u_rel, c.ricci_log_u_rel);
    w.h_positive_definite = w.h_positive_definite && c.h_positive_definite;
    w.ricci_stated_negative_definite = w.ricci_stated_negative_definite && c.ricci_stated_negative_definite;
    w.ricci_derived_negative_definite = w.ricci_derived_negative_definite && c.ricci_derived_negative_definite;
    w.ricci_numeric_negative_definite = w.ricci_numeric_negative_definite && c.ricci_numeric_negative_definite;
  }
  // Exact determinant identity at rational points y_k = a/b.
  std::uniform_int_distribution<int> num(1, 100), den(1, 10);
  r.exact_all = true;
  for (int i = 0; i < samples; ++i) {
    std::vector<Rational> y;
    for (int k = 0; k < s; ++k) y.emplace_back(num(rng), den(rng));
    r.exact_all = r.exact_all && determinant_identity_exact(y);
    ++r.exact_points;
  }
  HyperPoint probe;
  probe.z = cd(0.3, -0.2);
  for (int k = 0; k < s; ++k) probe.zs.emplace_back(0.1 * k, 1.0 + 0.5 * k);
  r.convergence_ratio = convergence_ratio(probe, 2e-2);
  return r;
}

nlohmann::json to_json(const PointChecks& c) {
  return {{"first_derivatives", {{"max_abs", c.grad_abs}, {"max_rel", c.grad_rel}}},
          {"metric", {{"max_abs", c.metric_abs}, {"max_rel", c.metric_rel}}},
          {"hermitian_max", c.hermitian},
          {"flat_factor_max_rel", c.flat_factor},
          {"determinant_max_rel", c.det_rel},
          {"ricci",
           {{"stated_form_max_rel", c.ricci_stated_rel},
            {"derived_form_max_rel", c.ricci_derived_rel},
            {"log_u_consistency_max_rel", c.ricci_log_u_rel},
            {"stated_negative_definite", c.ricci_stated_negative_definite},
            {"derived_negative_definite", c.ricci_derived_negative_definite},
            {"numeric_negative_definite", c.ricci_numeric_negative_definite}}},
          {"h_positive_definite", c.h_positive_definite}};
}

nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json j;
  j["schema"] = "anosovkit.ot_report/1";
  j["s"] = r.s;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["steps"] = {{"gradient_relative", r.steps.gradient_step}, {"hessian_relative", r.steps.hessian_step}};
  j["tolerances"] = {{"first_derivatives", r.tol.first_derivatives},
                     {"metric", r.tol.metric},
                     {"determinant", r.tol.determinant},
                     {"ricci", r.tol.ricci}};
  j["checks"] = to_json(r.worst);
  j["determinant_exact"] = {{"points", r.exact_points}, {"all_equal", r.exact_all}};
  j["convergence_ratio"] = r.convergence_ratio;
  const PointChecks& w = r.worst;
  j["passed"] = {{"first_derivatives", w.grad_rel <= r.tol.first_derivatives},
                 {"metric", w.metric_rel <= r.tol.metric},
                 {"determinant", w.det_rel <= r.tol.determinant && r.exact_all},
                 {"ricci_stated_form", w.ricci_stated_rel <= r.tol.ricci},
                 {"ricci_derived_form", w.ricci_derived_rel <= r.tol.ricci},
                 {"ricci_log_u_consistency", w.ricci_log_u_rel <= r.tol.ricci},
                 {"definiteness", w.h_positive_definite && w.ricci_stated_negative_definite &&
                                      w.ricci_numeric_negative_definite}};
  return j;
}

}  // namespace anosovkit::ot
