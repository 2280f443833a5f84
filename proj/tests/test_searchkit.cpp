#include <doctest.h>

#include <set>

#include "anosovkit/searchkit.hpp"

using namespace anosovkit;

namespace {

SearchReport run(int degree, int bound, int workers = 1, bool near = true) {
  SearchOptions o;
  o.degree = degree;
  o.bound = bound;
  o.workers = workers;
  o.replay_near_misses = near;
  return search(o);
}

std::set<std::vector<BigInt>> accepted_set(const SearchReport& r) {
  std::set<std::vector<BigInt>> s;
  for (const auto& a : r.accepted) s.insert(a.profile.poly.coeffs());
  return s;
}

}  // namespace

TEST_CASE("enumeration counts") {
  CHECK(enumerate(2, 3, true).size() == 7);
  CHECK(enumerate(3, 1, true).size() == 9);
  CHECK(candidate_count(5, 10, true) == 194481);
  CHECK(candidate_count(3, 2, false) == 50);
  CHECK(enumerate(3, 2, false).size() == 50);
}

TEST_CASE("enumeration order and constant term") {
  const auto v = enumerate(2, 3, true);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(v[i].coeff(1) == static_cast<int>(i) - 3);
    CHECK(v[i].constant_term() == 1);
  }
  const auto w = enumerate(3, 1, false);
  // lexicographic in (c2, c1, c0): c0 cycles fastest
  CHECK(w[0] == IntPolynomial{-1, -1, -1, 1});
  CHECK(w[1] == IntPolynomial{1, -1, -1, 1});
  CHECK(w[2] == IntPolynomial{-1, 0, -1, 1});
  CHECK(w.back() == IntPolynomial{1, 1, 1, 1});
  for (std::size_t i = 1; i < w.size(); ++i) {
    const auto key = [](const IntPolynomial& p) { return std::vector<BigInt>{p.coeff(2), p.coeff(1), p.coeff(0)}; };
    CHECK(key(w[i - 1]) < key(w[i]));
  }
}

TEST_CASE("shards partition the enumeration") {
  std::uint64_t total = 0;
  for (int lead = -4; lead <= 4; ++lead) {
    Enumerator e(4, 4, true, lead);
    std::uint64_t n = 0;
    while (auto p = e.next()) {
      CHECK(p->coeff(3) == lead);
      ++n;
    }
    CHECK(n == e.size());
    total += n;
  }
  CHECK(total == candidate_count(4, 4, true));
}

TEST_CASE("degree 2 search") {
  const auto r = run(2, 10);
  CHECK(r.candidate_count == 21);
  REQUIRE(r.accepted.size() == 8);
  for (const auto& a : r.accepted) {
    CHECK(a.profile.poly.coeff(1) <= -3);
    CHECK(a.profile.poly.coeff(1) >= -10);
    CHECK(a.replay.identity_holds);
  }
  CHECK(cross_check(r).empty());
  CHECK(r.accepted.size() + r.rejected_count() + r.undecided.size() == r.candidate_count);
}

TEST_CASE("degree 3 accepted set is the exact characterization") {
  const auto r = run(3, 3);
  CHECK(r.candidate_count == 49);
  std::set<std::vector<BigInt>> expected;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) {
      const IntPolynomial p{-1, b, a, 1};
      if (discriminant(p) < 0 && a + b < 0) expected.insert(p.coeffs());
    }
  CHECK(accepted_set(r) == expected);
  CHECK(cross_check(r).empty());
}

TEST_CASE("determinism across worker counts") {
  const auto a = to_json(run(4, 3, 1)).dump();
  const auto b = to_json(run(4, 3, 4)).dump();
  const auto c = to_json(run(4, 3, 9)).dump();
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("monotonicity in the bound") {
  for (int degree : {2, 3}) {
    const auto small = accepted_set(run(degree, 2));
    const auto large = accepted_set(run(degree, 4));
    for (const auto& p : small) CHECK(large.count(p) == 1);
  }
}

TEST_CASE("degree 4 small bound has no acceptance") {
  const auto r = run(4, 4);
  CHECK(r.accepted.empty());
  CHECK(r.undecided.empty());
  CHECK(r.near_misses.replayed > 0);
  CHECK(r.near_misses.without_contradiction == 0);
  for (const auto& d : cross_check(r)) CHECK(d.severity != "acceptance");
}

TEST_CASE("report serialization") {
  const auto r = run(2, 4);
  const auto j = to_json(r);
  CHECK_FALSE(j.contains("wall_time_seconds"));
  CHECK(to_json(r, true).contains("wall_time_seconds"));
  CHECK(j["accepted_count"] == 2);
  const std::string csv = to_csv(r);
  CHECK(csv.rfind("coeffs,q,lambda,certification\n", 0) == 0);
  CHECK(csv.find("1;-4;1,1,3.73205080756888,ExactQ1") != std::string::npos);
}

TEST_CASE("oracle verdicts") {
  CHECK(oracle_accepts(parse_poly("x^2 - 3x + 1")));
  CHECK(oracle_accepts(parse_poly("x^3 - x - 1")));
  CHECK_FALSE(oracle_accepts(parse_poly("x^2 + 3x + 1")));
  CHECK_FALSE(oracle_accepts(parse_poly("x^4 - x^3 - x^2 - x + 1")));
}
