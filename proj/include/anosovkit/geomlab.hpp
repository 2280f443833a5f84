#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "anosovkit/intpoly.hpp"
#include "anosovkit/spectra.hpp"

namespace anosovkit {

class GeomError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// Companion matrix with ones on the subdiagonal and last column -c_0..-c_{n-1},
/// so det(X Id - A) = P. Requires P monic with constant term (-1)^n (det A = 1).
IntMatrix companion(const IntPolynomial& p);

/// det(X Id - A) computed exactly: integer determinants at n+1 points
/// (fraction-free elimination) followed by Lagrange interpolation.
IntPolynomial charpoly_exact(const IntMatrix& a);
BigInt det_exact(const IntMatrix& a);

struct Splitting {
  Eigen::VectorXd eu;        // unit eigenvector for lambda^q
  Eigen::MatrixXd es_basis;  // (q+1) x q, columns span the contracting subspace
  double eu_residual = 0;    // |A Eu - lambda^q Eu|
  double es_leak = 0;        // max Eu-component of A v over basis vectors v
};

/// Eu by inverse iteration in long double; Es from real and imaginary parts
/// of the remaining eigenvectors.
Splitting split(const IntMatrix& a, const SpectralProfile& profile);

struct FormSolution {
  Eigen::MatrixXd b;
  double residual = 0;        // Frobenius norm of S^T b S - b
  int solution_dim = 0;       // dimension of the fixed space
  Eigen::VectorXd b_eigenvalues;
};

/// Symmetric b with S^T b S = b for S = lambda A_s, trace q, positive definite.
/// The fixed space is computed by SVD on symmetric-matrix coordinates and the
/// identity is projected onto it. Throws GeomError when no positive definite
/// solution exists.
FormSolution solve_b(const Eigen::MatrixXd& a_s, double lambda);

struct KourganoffCertificate {
  IntMatrix a;
  IntPolynomial poly;
  int q = 0;
  double lambda = 0;
  std::string lambda_hp;  // decimal digits of the certified enclosure midpoint
  double lambda_q = 0;
  Eigen::VectorXd eu;
  Eigen::MatrixXd es_basis;
  Eigen::MatrixXd a_s;
  Eigen::MatrixXd s;
  Eigen::MatrixXd b;
  Eigen::VectorXd b_eigenvalues;
  int b_solution_dim = 0;
  double residual_orthogonality = 0;
  double residual_invariance = 0;
  /// Residual of b = (T^-1)^T T^-1 for the eigenvector basis T (identity in Es coordinates).
  double eigenbasis_route_residual = 0;
  bool charpoly_matches = false;
};

/// Throws GeomError unless the profile is accepted.
KourganoffCertificate build_certificate(const IntPolynomial& p, const SpectralProfile& profile);

/// phi together with its first two derivatives.
struct WarpFunction {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

WarpFunction monomial_warp(int exponent);
WarpFunction flat_warp();

struct MappingTorusModel {
  KourganoffCertificate cert;
  int q = 0;
  int phi_exponent = 0;
  WarpFunction phi;
  /// Adapted basis E = [Es L^-T, Eu/|Eu|] with b = L L^T, and A in that basis.
  Eigen::MatrixXd frame;
  Eigen::MatrixXd a_adapted;
};

MappingTorusModel make_model(const KourganoffCertificate& cert);
MappingTorusModel make_model(const KourganoffCertificate& cert, WarpFunction phi);

/// Coordinates (x_1..x_{q+1}, t); returns diag(1,..,1, phi(t), 1). Throws for t <= 0.
Eigen::MatrixXd metric_at(const MappingTorusModel& model, const Eigen::VectorXd& point);

/// |phi(lambda t) - lambda^(2q+2) phi(t)| / (lambda^(2q+2) phi(t)).
double phi_equation_residual(const MappingTorusModel& model, double t);

struct DeckCheck {
  double max_relative_deviation = 0;
  double ratio = 0;  // mean of (pullback)_{tt} / g_{tt}
  bool contracting = false;
  int samples = 0;
};

/// Pulls g back along (x, t) -> (A x, t / lambda) with its exact constant
/// Jacobian and compares against lambda^-2 g.
DeckCheck deck_pullback_check(const MappingTorusModel& model, const std::vector<Eigen::VectorXd>& points);
/// Same comparison for the identity map (control case).
DeckCheck identity_pullback_check(const MappingTorusModel& model, const std::vector<Eigen::VectorXd>& points);

std::vector<Eigen::VectorXd> random_torus_points(int q, int count, std::mt19937_64& rng);

/// Full Riemann tensor R^i_{jkl} at a point: Christoffel symbols by central
/// differences of the metric, then central differences of those.
std::vector<double> riemann_tensor(const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& metric,
                                   const Eigen::VectorXd& point, const Eigen::VectorXd& steps);
/// <R(e_a, e_b) e_b, e_a> / (g_aa g_bb - g_ab^2).
double sectional_curvature(const std::vector<double>& riemann, const Eigen::MatrixXd& g, int a, int b);

struct CurvatureSample {
  double t = 0;
  double warped = 0;          // K of the (x_{q+1}, t) plane
  double expected = 0;        // -phi''/(2 phi) + phi'^2/(4 phi^2)
  double relative_error = 0;
  double flat_block_max = 0;  // max |K| over planes in span(x_1..x_q, t)
  double mixed_max = 0;       // max |K| over (x_i, x_{q+1}) planes, i <= q
};

struct CurvatureReport {
  std::vector<CurvatureSample> samples;
  double max_relative_error = 0;
  double flat_block_max = 0;
  double mixed_max = 0;
  double step_factor = 1e-3;
};

/// Steps are step_factor * t in t and step_factor in x. Throws GeomError
/// when t is so small that the step underflows.
CurvatureReport curvature_check(const MappingTorusModel& model, const std::vector<double>& ts,
                                double step_factor = 1e-3);

/// -q(q+1)/t^2.
double warped_curvature_closed_form(int q, double t);

nlohmann::json to_json(const KourganoffCertificate& c);
nlohmann::json to_json(const MappingTorusModel& m);
nlohmann::json to_json(const DeckCheck& d);
nlohmann::json to_json(const CurvatureReport& r);

struct TorusVerification {
  KourganoffCertificate cert;
  DeckCheck deck;
  DeckCheck identity_control;
  CurvatureReport curvature;
  CurvatureReport flat_control;
  double phi_equation_max = 0;
};

TorusVerification verify_torus(const IntPolynomial& p, const SpectralProfile& profile, int samples,
                               std::uint64_t seed);
nlohmann::json to_json(const TorusVerification& v);

}  // namespace anosovkit
