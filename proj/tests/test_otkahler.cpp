#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "anosovkit/otkahler.hpp"

using namespace anosovkit;
using namespace anosovkit::ot;

namespace {

HyperPoint point(cd z, std::vector<cd> zs) { return HyperPoint{z, std::move(zs)}; }

Rational exact_u(const std::vector<Rational>& y) {
  Rational prod = 1;
  for (const auto& v : y) prod *= v;
  return 1 / prod;
}

}  // namespace

TEST_CASE("potential values") {
  const auto p = point({1, 2}, {{0.3, 2.0}, {-1, 0.25}});
  CHECK(u_value(p) == doctest::Approx(2.0));
  CHECK(F_value(p) == doctest::Approx(7.0));
  CHECK_THROWS_AS(point({0, 0}, {{0, -1}}).validate(), OtError);
  CHECK_THROWS_AS(u_value(point({0, 0}, {{0, 0}})), OtError);
}

TEST_CASE("wirtinger derivatives of simple functions") {
  const auto p = point({0.4, -0.7}, {{0.1, 1.5}});
  const Steps st = relative_steps(p, 1e-4);
  const RealFunction modsq = [](const HyperPoint& q) { return std::norm(q.z); };
  const auto h = wirtinger_hessian(modsq, p, st);
  CHECK(h(0, 0).real() == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(h(0, 0).imag()) < 1e-7);
  CHECK(std::abs(h(1, 1)) < 1e-7);
  const auto g = wirtinger_gradient(modsq, p, relative_steps(p, 1e-5));
  // d|z|^2/dz = zbar
  CHECK(std::abs(g.d[0] - std::conj(p.z)) < 1e-9);
  CHECK(std::abs(g.dbar[0] - p.z) < 1e-9);

  const RealFunction constant = [](const HyperPoint&) { return 3.0; };
  CHECK(wirtinger_hessian(constant, p, st).norm() == 0.0);
  CHECK(std::abs(wirtinger_gradient(constant, p, st).d[1]) == 0.0);

  Steps tiny = st;
  tiny.h[1] = 1e-15;
  CHECK_THROWS_AS(wirtinger_gradient(modsq, p, tiny), OtError);
}

TEST_CASE("metric closed form examples") {
  const auto one = metric_closed_form(point({0, 0}, {{0, 1}}));
  CHECK(one.h(0, 0).real() == doctest::Approx(0.5));
  const auto two = metric_closed_form(point({0, 0}, {{0, 1}, {0, 2}}));
  CHECK(two.h(0, 0).real() == doctest::Approx(0.25));
  CHECK(two.h(0, 1).real() == doctest::Approx(0.0625));
  CHECK(two.h(1, 1).real() == doctest::Approx(0.0625));
}

TEST_CASE("determinant examples") {
  CHECK(determinant_closed_form(point({0, 0}, {{0, 1}})) == doctest::Approx(0.5));
  CHECK(determinant_closed_form(point({0, 0}, {{0, 1}, {0, 1}})) == doctest::Approx(3.0 / 16));
  CHECK(determinant_closed_form(point({0, 0}, {{0, 1}, {0, 2}})) == doctest::Approx(3.0 / 256));
  CHECK(determinant_exact({Rational(1), Rational(2)}) == Rational(3, 256));
  CHECK(determinant_identity_exact({Rational(1, 3), Rational(5, 7), Rational(2)}));
}

TEST_CASE("determinant scaling law in exact arithmetic") {
  // y -> c y scales u by c^-s and det by c^(-s(s+2)).
  for (int s = 1; s <= 4; ++s) {
    std::vector<Rational> y, cy;
    const Rational c(3, 2);
    for (int k = 0; k < s; ++k) {
      y.emplace_back(k + 2, 3);
      cy.push_back(c * y.back());
    }
    Rational factor = 1;
    for (int i = 0; i < s * (s + 2); ++i) factor /= c;
    CHECK(determinant_exact(cy) == factor * determinant_exact(y));
    Rational expect = (s + 1);
    for (int i = 0; i < s + 2; ++i) expect *= exact_u(y);
    for (int i = 0; i < s; ++i) expect /= 4;
    CHECK(determinant_exact(y) == expect);
  }
}

TEST_CASE("finite differences agree with the closed forms") {
  std::mt19937_64 rng(2024);
  for (int s = 1; s <= 4; ++s)
    for (int i = 0; i < 20; ++i) {
      const auto p = random_point(s, rng);
      CHECK(check_first_derivatives(p) < 1e-8);
      CHECK(check_metric(p) < 1e-6);
      CHECK(check_determinant(p) < 1e-10);
      const auto c = check_point(p);
      CHECK(c.hermitian < 1e-12);
      CHECK(c.h_positive_definite);
      CHECK(c.flat_factor < 1e-6);
      CHECK(c.ricci_derived_rel < 1e-6);
      CHECK(c.ricci_numeric_negative_definite);
    }
}

TEST_CASE("second-order convergence") {
  std::mt19937_64 rng(9);
  for (int s = 1; s <= 3; ++s) {
    const double r = convergence_ratio(random_point(s, rng), 2e-2);
    CHECK(r > 3.0);
    CHECK(r < 5.0);
  }
}

TEST_CASE("ricci closed forms at y = 1, s = 1") {
  const auto p = point({0, 0}, {{0, 1}});
  CHECK(ricci_stated_form(p)(0, 0).real() == doctest::Approx(-2.25));
  CHECK(ricci_derived_form(p)(0, 0).real() == doctest::Approx(-0.75));
  CHECK(ricci_finite_difference(p)(0, 0).real() == doctest::Approx(-0.75).epsilon(1e-6));
}

TEST_CASE("the (2 + delta) ricci coefficient does not match the numeric tensor") {
  std::mt19937_64 rng(5);
  const auto c = check_point(random_point(2, rng));
  CHECK(c.ricci_stated_rel > 0.1);
  CHECK(c.ricci_derived_rel < 1e-6);
}

TEST_CASE("suite report") {
  const auto r = run_suite(2, 10, 3);
  CHECK(r.exact_all);
  CHECK(r.exact_points > 0);
  const auto j = to_json(r);
  CHECK(j["schema"] == "anosovkit.ot_report/1");
  CHECK(j["s"] == 2);
}
