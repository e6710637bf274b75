#include <doctest.h>

#include "oracles.hpp"
#include "posmat/ratlp.hpp"
#include "posmat/random.hpp"

using namespace posmat;

namespace {

bool satisfies(const RationalLinearSystem& sys, const RatVector& y) {
  if (y.size() != sys.A.cols()) return false;
  for (Eigen::Index j = 0; j < y.size(); ++j)
    if (y(j) < 0) return false;
  for (Eigen::Index i = 0; i < sys.A.rows(); ++i) {
    Rational s = 0;
    for (Eigen::Index j = 0; j < y.size(); ++j) s += sys.A(i, j) * y(j);
    if (s != sys.b(i)) return false;
  }
  return true;
}

std::vector<Vote> example_votes() { return {{0, 1, 2, 3}, {1, 0, 3, 2}, {0, 1, 3, 2}, {1, 0, 2, 3}}; }

}  // namespace

TEST_CASE("identity systems") {
  RationalLinearSystem sys(3, 3);
  sys.A = RatMatrix::Identity(3, 3);
  sys.b << Rational(1, 2), 0, 7;
  const auto y = lp_feasible(sys);
  REQUIRE(y);
  CHECK(*y == sys.b);
}

TEST_CASE("contradictory rows") {
  RationalLinearSystem sys(2, 2);
  sys.A << 1, 1, 1, 1;
  sys.b << 1, 2;
  CHECK_FALSE(lp_feasible(sys).has_value());
  sys.A << 1, -1, 0, 0;
  sys.b << -1, 0;
  const auto y = lp_feasible(sys);
  REQUIRE(y);
  CHECK(satisfies(sys, *y));
  sys.A << 1, 1, 0, 0;
  sys.b << -1, 0;
  CHECK_FALSE(lp_feasible(sys).has_value());
}

TEST_CASE("convex weights of the four-vote example") {
  const auto votes = example_votes();
  RationalLinearSystem sys(16, 4);
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i) sys.A(i * 4 + votes[k][i], k) = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) sys.b(i * 4 + j) = (i < 2) == (j < 2) ? Rational(1, 2) : Rational(0);
  const auto y = lp_feasible(sys);
  REQUIRE(y);
  CHECK(satisfies(sys, *y));
  CHECK(y->sum() == 1);
  // The hand solution 1/4 each is one feasible point.
  CHECK(satisfies(sys, RatVector::Constant(4, Rational(1, 4))));
}

TEST_CASE("random systems agree with the subset oracle") {
  Rng rng = derive_stream(1, 0);
  int feasible = 0;
  for (int t = 0; t < 150; ++t) {
    const int rows = uniform_int(rng, 1, 4), cols = uniform_int(rng, 1, 6);
    RationalLinearSystem sys(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) sys.A(i, j) = uniform_int(rng, -2, 3);
      sys.b(i) = uniform_int(rng, -2, 4);
    }
    std::vector<std::vector<Rational>> a(rows);
    std::vector<Rational> b(rows);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) a[i].push_back(sys.A(i, j));
      b[i] = sys.b(i);
    }
    // Caratheodory: a feasible system has a basic solution on independent columns.
    bool expected = false;
    for (unsigned mask = 0; mask < (1u << cols) && !expected; ++mask) {
      std::vector<std::vector<Rational>> sub(rows);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
          if (mask >> j & 1) sub[i].push_back(a[i][j]);
      if (mask == 0) {
        expected = std::all_of(b.begin(), b.end(), [](const Rational& q) { return q == 0; });
        continue;
      }
      if (auto y = oracle::solve_independent(sub, b))
        expected = std::all_of(y->begin(), y->end(), [](const Rational& q) { return q >= 0; });
    }
    const auto y = lp_feasible(sys);
    CHECK(y.has_value() == expected);
    if (y) {
      CHECK(satisfies(sys, *y));
      ++feasible;
    }
  }
  CHECK(feasible > 10);
}

TEST_CASE("incremental rows") {
  // y1 + y2 + y3 = 1, then y1 >= 1/2, then y2 >= 1/2 leaves only y3 = 0 room.
  RationalLinearSystem sys(1, 3);
  sys.A << 1, 1, 1;
  sys.b << 1;
  FeasibilityTableau t(sys);
  REQUIRE(t.solve());
  t.add_row({{0, Rational(1)}}, FeasibilityTableau::Sense::ge, Rational(1, 2));
  REQUIRE(t.solve());
  CHECK(t.solution()(0) >= Rational(1, 2));
  FeasibilityTableau branch = t;
  branch.add_row({{1, Rational(1)}}, FeasibilityTableau::Sense::ge, Rational(1, 2));
  REQUIRE(branch.solve());
  CHECK(branch.solution()(0) == Rational(1, 2));
  CHECK(branch.solution()(1) == Rational(1, 2));
  branch.add_row({{2, Rational(1)}}, FeasibilityTableau::Sense::ge, Rational(1, 10));
  CHECK_FALSE(branch.solve());
  // The copy taken before branching is untouched.
  t.add_row({{2, Rational(1)}}, FeasibilityTableau::Sense::eq, Rational(1, 4));
  REQUIRE(t.solve());
  CHECK(t.solution().sum() == 1);
  t.add_row({{0, Rational(1)}}, FeasibilityTableau::Sense::le, Rational(1, 3));
  CHECK_FALSE(t.solve());
}

TEST_CASE("integral scaling") {
  auto [a, n] = integral_scale(std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  CHECK(a == std::vector<BigInt>{1, 1});
  CHECK(n == 2);
  auto [b, m] = integral_scale(std::vector<Rational>{Rational(1, 3), Rational(1, 6), Rational(1, 2)});
  CHECK(b == std::vector<BigInt>{2, 1, 3});
  CHECK(m == 6);
  auto [c, k] = integral_scale(std::vector<Rational>{Rational(4), Rational(0), Rational(9)});
  CHECK(c == std::vector<BigInt>{4, 0, 9});
  CHECK(k == 1);
}
