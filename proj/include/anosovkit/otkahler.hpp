#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "anosovkit/intpoly.hpp"

namespace anosovkit::ot {

using cd = std::complex<double>;

class OtError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Point of C x H^s: z and z_k = x_k + i y_k with y_k > 0.
struct HyperPoint {
  cd z;
  std::vector<cd> zs;

  int s() const { return static_cast<int>(zs.size()); }
  /// Throws OtError unless every y_k > 0.
  void validate() const;
};

/// u = 1 / (y_1 ... y_s).
double u_value(const HyperPoint& p);
/// F = |z|^2 + u.
double F_value(const HyperPoint& p);

using RealFunction = std::function<double(const HyperPoint&)>;

/// Complex coordinates are w_0 = z, w_k = z_k. Steps are per complex
/// coordinate and shared by its real and imaginary parts.
struct Steps {
  std::vector<double> h;
};

/// Relative steps: factor * max(1, |z|) for z and factor * y_k for z_k.
Steps relative_steps(const HyperPoint& p, double factor);

struct Gradient {
  std::vector<cd> d;     // df/dw_k
  std::vector<cd> dbar;  // df/dwbar_k
};

/// d/dw = (d/dx - i d/dy)/2 by central differences, O(h^2).
/// Throws OtError when a step is below 1e-12 relative to its coordinate.
Gradient wirtinger_gradient(const RealFunction& f, const HyperPoint& p, const Steps& steps);

/// H_{jk} = d^2 f / dw_j dwbar_k
///        = ((f_{x_j x_k} + f_{y_j y_k}) + i (f_{x_j y_k} - f_{y_j x_k})) / 4, O(h^2).
Eigen::MatrixXcd wirtinger_hessian(const RealFunction& f, const HyperPoint& p, const Steps& steps);

/// Relative change of the hessian when every step is halved; a large value
/// signals cancellation (step too small) or an unresolved function.
double hessian_halving_change(const RealFunction& f, const HyperPoint& p, const Steps& steps);

enum class Source { ClosedForm, FiniteDifference };

struct HermitianMatrixSample {
  HyperPoint point;
  Eigen::MatrixXcd h;
  Source source = Source::ClosedForm;
};

/// h_{jk} = (u/4)(1 + delta_jk)/(y_j y_k) on the H^s factor.
HermitianMatrixSample metric_closed_form(const HyperPoint& p);
/// Wirtinger hessian of u on the H^s factor.
HermitianMatrixSample metric_finite_difference(const HyperPoint& p, double step_factor = 1e-4);

/// (s + 1) u^(s+2) / 4^s.
double determinant_closed_form(const HyperPoint& p);

/// Exact rational h for rational y, and its determinant by Gaussian elimination.
std::vector<std::vector<Rational>> metric_exact(const std::vector<Rational>& y);
Rational determinant_exact(const std::vector<Rational>& y);
/// det(metric_exact(y)) == (s+1) u^(s+2) / 4^s in exact arithmetic.
bool determinant_identity_exact(const std::vector<Rational>& y);

/// Ricci closed form with coefficient -((s+2)/4)(2 + delta_jk)/(y_j y_k).
Eigen::MatrixXcd ricci_stated_form(const HyperPoint& p);
/// Ricci closed form obtained from -(s+2) dd-bar ln u: -((s+2)/4) delta_jk / y_j^2.
Eigen::MatrixXcd ricci_derived_form(const HyperPoint& p);
/// -dd-bar ln det(h) by finite differences of the closed-form determinant.
Eigen::MatrixXcd ricci_finite_difference(const HyperPoint& p, double step_factor = 1e-4);

struct PointChecks {
  double grad_abs = 0, grad_rel = 0;
  double metric_abs = 0, metric_rel = 0;
  double hermitian = 0;
  double flat_factor = 0;  // deviation of the full hessian of F from diag(1, h)
  double det_rel = 0;
  double ricci_stated_rel = 0;
  double ricci_derived_rel = 0;
  double ricci_log_u_rel = 0;  // finite-difference R against -(s+2) hessian(ln u)
  bool h_positive_definite = false;
  bool ricci_stated_negative_definite = false;
  bool ricci_derived_negative_definite = false;
  bool ricci_numeric_negative_definite = false;
};

struct CheckOptions {
  double gradient_step = 1e-5;
  double hessian_step = 1e-4;
};

/// Max deviation of the numeric d u, dbar u from -u/(z_j - zbar_j), u/(z_j - zbar_j).
/// `relative` divides by the max modulus of the closed form.
double check_first_derivatives(const HyperPoint& p, bool relative = true, double step_factor = 1e-5);
double check_metric(const HyperPoint& p, bool relative = true, double step_factor = 1e-4);
double check_determinant(const HyperPoint& p);
PointChecks check_point(const HyperPoint& p, const CheckOptions& options = {});

/// Deviation of the numeric metric at step factor h divided by the one at h/2.
double convergence_ratio(const HyperPoint& p, double step_factor);

HyperPoint random_point(int s, std::mt19937_64& rng);

struct Tolerances {
  double first_derivatives = 1e-8;
  double metric = 1e-6;
  double determinant = 1e-10;
  double ricci = 1e-6;
};

struct SuiteReport {
  int s = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  CheckOptions steps;
  Tolerances tol;
  PointChecks worst;  // componentwise max deviations, AND of verdicts
  int exact_points = 0;
  bool exact_all = false;
  double convergence_ratio = 0;
};

SuiteReport run_suite(int s, int samples, std::uint64_t seed, const CheckOptions& options = {});

nlohmann::json to_json(const PointChecks& c);
nlohmann::json to_json(const SuiteReport& r);

}  // namespace anosovkit::ot
