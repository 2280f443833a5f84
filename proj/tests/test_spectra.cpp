#include <doctest.h>

#include "anosovkit/searchkit.hpp"
#include "anosovkit/spectra.hpp"

using namespace anosovkit;

TEST_CASE("classify: accepted examples") {
  const auto a = classify(parse_poly("x^2 - 3x + 1"));
  CHECK(a.certification == Certification::ExactQ1);
  CHECK(a.q == 1);
  REQUIRE(a.lambda);
  CHECK(a.lambda->mid() == doctest::Approx(2.6180339887498949).epsilon(1e-15));
  CHECK(a.lambda->width() < 1e-15);
  CHECK(a.lambda->lo.precision() >= 128);
  CHECK(a.unit_product_consistent);

  const auto b = classify(parse_poly("x^3 - x - 1"));
  CHECK(b.certification == Certification::ExactQ2);
  CHECK(b.q == 2);
  REQUIRE(b.lambda);
  CHECK(b.lambda->mid() == doctest::Approx(1.1509639252577581).epsilon(1e-14));
  CHECK(b.unit_product_consistent);
}

TEST_CASE("classify: rejection reasons") {
  CHECK(classify(parse_poly("x^2 - 2x + 1")).reason == RejectReason::NotSquarefree);
  CHECK(classify(parse_poly("x^2 + 3x + 1")).reason == RejectReason::RealRootCount);
  CHECK(classify(parse_poly("x^3 - 3x^2 + 3x - 1")).reason == RejectReason::NotSquarefree);
  CHECK(classify(parse_poly("x^3 - x + 1")).reason == RejectReason::WrongConstantTerm);
  CHECK(classify(parse_poly("x^3 - x + 1"), {true}).reason != RejectReason::WrongConstantTerm);
  // det = -1 under the default SL constraint
  const auto d4 = classify(parse_poly("x^4 - 2x^3 + x - 1"));
  CHECK(d4.certification == Certification::Rejected);
  CHECK(d4.reason == RejectReason::WrongConstantTerm);
  ClassifyOptions gl;
  gl.allow_gl = true;
  const auto g4 = classify(parse_poly("x^4 - 2x^3 + x - 1"), gl);
  CHECK(g4.reason == RejectReason::ModulusSeparation);
  REQUIRE(g4.lambda);
  CHECK(g4.lambda->mid() == doctest::Approx(1.2313).epsilon(1e-3));
  // cyclotomic factor: a root on the unit circle
  CHECK(classify(parse_poly("x^5 - x^4 - 1")).reason == RejectReason::BoundaryRoot);
}

TEST_CASE("classify: preconditions") {
  CHECK_THROWS_AS(classify(parse_poly("2x^2 - 3x + 1")), PolyError);
  CHECK_THROWS_AS(classify(parse_poly("x - 1")), PolyError);
}

TEST_CASE("classify: precision ceiling yields undecided, not a wrong verdict") {
  ClassifyOptions o;
  o.force_interval = true;
  o.max_precision_bits = 128;
  o.min_accept_bits = 256;  // unreachable below the ceiling
  const auto p = classify(parse_poly("x^3 - x - 1"), o);
  CHECK(p.certification == Certification::Undecided);
}

TEST_CASE("exact tests") {
  const auto t3 = exact_test_q1(parse_poly("x^2 - 3x + 1"));
  CHECK(t3.accepted);
  REQUIRE(t3.lambda);
  CHECK(t3.lambda->hi.to_double() - t3.lambda->lo.to_double() < 1e-30);
  CHECK_FALSE(exact_test_q1(parse_poly("x^2 - 2x + 1")).accepted);
  CHECK_FALSE(exact_test_q1(parse_poly("x^2 + 3x + 1")).accepted);
  CHECK_THROWS_AS(exact_test_q1(parse_poly("x^2 - 3x - 1")), PolyError);

  CHECK(exact_test_q2(parse_poly("x^3 - x - 1")).accepted);
  CHECK(exact_test_q2(parse_poly("x^3 - 2x^2 + x - 1")).accepted);
  CHECK_FALSE(exact_test_q2(parse_poly("x^3 - 3x^2 + 3x - 1")).accepted);
  CHECK_THROWS_AS(exact_test_q2(parse_poly("x^3 - x + 1")), PolyError);
}

TEST_CASE("exact and interval routes agree on degrees 2 and 3") {
  ClassifyOptions forced;
  forced.force_interval = true;
  for (int degree : {2, 3}) {
    Enumerator e(degree, degree == 2 ? 12 : 6, true);
    while (auto p = e.next()) {
      const auto exact = classify(*p);
      const auto interval = classify(*p, forced);
      CHECK_MESSAGE(exact.accepted() == interval.accepted(), p->render());
      CHECK(interval.certification != Certification::Undecided);
    }
  }
}

TEST_CASE("accepted profiles satisfy the unit product and irreducibility") {
  for (int degree : {2, 3}) {
    Enumerator e(degree, 5, true);
    while (auto p = e.next()) {
      const auto prof = classify(*p);
      if (!prof.accepted()) continue;
      CHECK(prof.unit_product_consistent);
      const auto irr = irreducible_by_modulus(*p, prof);
      REQUIRE(irr.has_value());
      CHECK(*irr);
      CHECK(factor_oracle(*p).irreducible);
    }
  }
}

TEST_CASE("irreducible_by_modulus refuses uncertified preconditions") {
  const auto p = parse_poly("x^2 - 1");
  ClassifyOptions gl;
  gl.allow_gl = true;
  CHECK_FALSE(irreducible_by_modulus(p, classify(p, gl)).has_value());
  const auto q = parse_poly("x^3 - x - 1");
  const auto prof = classify(q);
  CHECK(irreducible_by_modulus(q, prof) == std::optional<bool>(true));
  // profile of a different polynomial
  CHECK_FALSE(irreducible_by_modulus(parse_poly("x^3 - 2x^2 + x - 1"), prof).has_value());
}

TEST_CASE("replay: q = 2 keeps Q = P") {
  for (const char* s : {"x^3 - x - 1", "x^3 - 2x^2 + x - 1"}) {
    const auto p = parse_poly(s);
    const auto r = replay_case_even(p, classify(p));
    CHECK(r.constructed_poly == p);
    CHECK(r.identity_holds);
    CHECK_FALSE(r.contradiction.has_value());
  }
  CHECK_THROWS_AS(replay_case_even(parse_poly("x^2 - 3x + 1"), classify(parse_poly("x^2 - 3x + 1"))), PolyError);
}

TEST_CASE("replay: q = 1 is palindromic") {
  for (const char* s : {"x^2 - 3x + 1", "x^2 - 4x + 1"}) {
    const auto p = parse_poly(s);
    const auto r = replay_case_odd(p, classify(p));
    CHECK(r.identity_holds);
    CHECK(r.constructed_poly == p);
    CHECK_FALSE(r.contradiction.has_value());
  }
}

TEST_CASE("replay: near misses always produce a contradiction") {
  for (int degree : {4, 5}) {
    Enumerator e(degree, 4, true);
    int replayed = 0;
    while (auto p = e.next()) {
      const auto prof = classify(*p);
      if (!prof.lambda || !prof.big_root) continue;
      const auto r = replay(*p, prof);
      CHECK_MESSAGE(r.contradiction.has_value(), p->render());
      ++replayed;
    }
    CHECK(replayed > 0);
  }
}

TEST_CASE("replay even case builds Q from a_1 and a_2p") {
  // x^5 + 2x^4 - 3x + ... : q = 4, p = 2
  const auto p = parse_poly("x^5 - 3x^4 + 2x^3 + x^2 - 2x - 1");
  ClassifyOptions gl;
  gl.allow_gl = true;
  const auto prof = classify(p, gl);
  if (prof.lambda && prof.big_root) {
    const auto r = replay_case_even(p, prof);
    CHECK(r.constructed_poly == parse_poly("x^5 - 3x^3 - 2x^2 - 1"));
    CHECK(r.contradiction.has_value());
  }
}

TEST_CASE("profile json has stable fields") {
  const auto j = to_json(classify(parse_poly("x^3 - x - 1")));
  for (const char* k : {"schema", "poly", "q", "certification", "accepted", "reason", "lambda", "big_root",
                        "small_roots", "precision_bits", "unit_product_consistent"})
    CHECK(j.contains(k));
  CHECK(j["certification"] == "ExactQ2");
}
