#include <doctest.h>

#include <cmath>

#include "anosovkit/geomlab.hpp"

using namespace anosovkit;

namespace {

MappingTorusModel model_for(const char* poly) {
  const auto p = parse_poly(poly);
  return make_model(build_certificate(p, classify(p)));
}

// g = dt^2 + f(t)^2 du^2 has K = -f''/f; here f = t^(n/2).
double monomial_oracle(int n, double t) {
  const double e = n / 2.0;
  return -e * (e - 1) / (t * t);
}

}  // namespace

TEST_CASE("companion matrices") {
  const IntMatrix a = companion(parse_poly("x^2 - 3x + 1"));
  CHECK(a(0, 0) == 0);
  CHECK(a(0, 1) == -1);
  CHECK(a(1, 0) == 1);
  CHECK(a(1, 1) == 3);
  const IntMatrix b = companion(parse_poly("x^3 - x - 1"));
  IntMatrix want(3, 3);
  want << 0, 0, 1, 1, 0, 1, 0, 1, 0;
  CHECK(b == want);
  CHECK_THROWS_AS(companion(parse_poly("x^3 - x + 1")), GeomError);
}

TEST_CASE("exact characteristic polynomial and determinant") {
  for (const char* s : {"x^2 - 3x + 1", "x^3 - x - 1", "x^4 - 3x^3 + 2x^2 - x + 1", "x^5 - 2x^4 + x - 1"}) {
    const auto p = parse_poly(s);
    const IntMatrix a = companion(p);
    CHECK(charpoly_exact(a) == p);
    CHECK(det_exact(a) == 1);
  }
  IntMatrix m(2, 2);
  m << 2, 1, 1, 1;
  CHECK(charpoly_exact(m) == parse_poly("x^2 - 3x + 1"));
}

TEST_CASE("invariant form solutions") {
  Eigen::MatrixXd one(1, 1);
  one << 0.5;
  const auto s1 = solve_b(one, 2.0);
  CHECK(s1.b(0, 0) == doctest::Approx(1.0));
  CHECK(s1.solution_dim == 1);

  Eigen::MatrixXd rot(2, 2);
  rot << 0, -0.5, 0.5, 0;
  const auto s2 = solve_b(rot, 2.0);
  CHECK((s2.b - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
  CHECK(s2.residual < 1e-12);

  // lambda * A_s with an eigenvalue of modulus != 1 has no invariant form.
  Eigen::MatrixXd bad(2, 2);
  bad << 0.25, 0, 0, 0.5;
  CHECK_THROWS_AS(solve_b(bad, 2.0), GeomError);
}

TEST_CASE("certificates for the smallest examples") {
  const auto p = parse_poly("x^2 - 3x + 1");
  const auto c = build_certificate(p, classify(p));
  CHECK(c.q == 1);
  CHECK(c.charpoly_matches);
  CHECK(c.lambda_q == doctest::Approx(2.618033988749895));
  CHECK(c.residual_orthogonality < 1e-12);
  CHECK(c.residual_invariance < 1e-12);
  CHECK(c.b.trace() == doctest::Approx(1.0));

  const auto p3 = parse_poly("x^3 - x - 1");
  const auto c3 = build_certificate(p3, classify(p3));
  CHECK(c3.q == 2);
  CHECK(c3.b_solution_dim >= 1);
  CHECK(c3.b_eigenvalues.minCoeff() > 0);
  CHECK(c3.residual_orthogonality < 1e-10);
  CHECK(c3.eigenbasis_route_residual < 1e-8);

  const auto r = parse_poly("x^2 + 3x + 1");
  CHECK_THROWS_AS(build_certificate(r, classify(r)), GeomError);
}

TEST_CASE("metric and warp") {
  const auto m = model_for("x^3 - x - 1");
  CHECK(m.phi_exponent == 6);
  Eigen::VectorXd pt(4);
  pt << 0.1, 0.2, 0.3, 2.0;
  const Eigen::MatrixXd g = metric_at(m, pt);
  CHECK(g(2, 2) == doctest::Approx(64.0));
  CHECK(g(0, 0) == 1.0);
  CHECK(g(3, 3) == 1.0);
  CHECK(g(0, 2) == 0.0);
  pt(3) = 0;
  CHECK_THROWS_AS(metric_at(m, pt), GeomError);
  for (double t : {0.3, 1.0, 2.5, 7.0}) CHECK(phi_equation_residual(m, t) < 1e-12);
}

TEST_CASE("phi exponent equals 2q + 2") {
  CHECK(model_for("x^2 - 3x + 1").phi_exponent == 4);
  CHECK(model_for("x^3 - 2x^2 + x - 1").phi_exponent == 6);
}

TEST_CASE("deck transformation is a homothety with ratio lambda^-2") {
  std::mt19937_64 rng(41);
  for (const char* s : {"x^2 - 3x + 1", "x^2 - 5x + 1", "x^3 - x - 1", "x^3 - 2x^2 + x - 1"}) {
    const auto m = model_for(s);
    const auto pts = random_torus_points(m.q, 50, rng);
    const auto d = deck_pullback_check(m, pts);
    CHECK(d.max_relative_deviation < 1e-9);
    CHECK(d.ratio == doctest::Approx(1.0 / (m.cert.lambda * m.cert.lambda)).epsilon(1e-9));
    CHECK(d.contracting);
    const auto id = identity_pullback_check(m, pts);
    CHECK(id.ratio == doctest::Approx(1.0));
    CHECK_FALSE(id.contracting);
  }
}

TEST_CASE("curvature matches the closed form and an independent oracle") {
  CHECK(warped_curvature_closed_form(2, 1.0) == doctest::Approx(-6.0));
  CHECK(warped_curvature_closed_form(1, 2.0) == doctest::Approx(-0.5));
  for (int q : {1, 2, 3, 5})
    for (double t : {0.5, 1.0, 3.0}) CHECK(monomial_oracle(2 * q + 2, t) == doctest::Approx(warped_curvature_closed_form(q, t)));

  for (const char* s : {"x^2 - 3x + 1", "x^3 - x - 1"}) {
    const auto m = model_for(s);
    const auto r = curvature_check(m, {0.5, 1.0, 2.0, m.cert.lambda});
    CHECK(r.max_relative_error < 1e-4);
    CHECK(r.flat_block_max < 1e-6);
    CHECK(r.mixed_max < 1e-6);
    for (const auto& smp : r.samples) {
      CHECK(smp.warped < 0);
      CHECK(smp.expected == doctest::Approx(warped_curvature_closed_form(m.q, smp.t)));
    }
  }
}

TEST_CASE("flat warp gives zero curvature") {
  const auto p = parse_poly("x^3 - x - 1");
  const auto m = make_model(build_certificate(p, classify(p)), flat_warp());
  const auto r = curvature_check(m, {0.7, 1.3});
  for (const auto& smp : r.samples) CHECK(std::abs(smp.warped) < 1e-6);
}

TEST_CASE("round sphere sign check") {
  const auto metric = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
    g(0, 0) = std::sin(x(1)) * std::sin(x(1));
    return g;
  };
  Eigen::VectorXd pt(2);
  pt << 0.3, 1.1;
  const auto riem = riemann_tensor(metric, pt, Eigen::VectorXd::Constant(2, 1e-3));
  CHECK(sectional_curvature(riem, metric(pt), 0, 1) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("tiny t underflows the difference step") {
  const auto m = model_for("x^2 - 3x + 1");
  CHECK_THROWS_AS(curvature_check(m, {1e-320}), GeomError);
}

TEST_CASE("verify_torus bundles everything") {
  const auto p = parse_poly("x^2 - 3x + 1");
  const auto v = verify_torus(p, classify(p), 20, 7);
  CHECK(v.deck.contracting);
  CHECK(v.phi_equation_max < 1e-12);
  const auto j = to_json(v);
  CHECK(j.contains("certificate"));
  CHECK(j["schema"] == "anosovkit.torus_report/1");
}
