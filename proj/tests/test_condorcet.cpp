#include <doctest.h>

#include "oracles.hpp"
#include "posmat/condorcet.hpp"
#include "posmat/cultures.hpp"
#include "posmat/realize.hpp"

using namespace posmat;

namespace {

PositionMatrix example_one() {
  IntMatrix x(4, 4);
  x << 2, 2, 0, 0, 2, 2, 0, 0, 0, 0, 2, 2, 0, 0, 2, 2;
  return PositionMatrix(x);
}

PositionMatrix random_matrix(int m, int n, Rng& rng) {
  Election e(m);
  for (int k = 0; k < n; ++k) e.add(random_permutation(m, rng));
  return position_matrix_of(e);
}

// Candidates that win in at least one realization, by enumeration.
std::vector<bool> brute_winners(const PositionMatrix& x) {
  std::vector<bool> out(x.m(), false);
  for (const auto& e : oracle::realization_multisets(x.entries(), static_cast<int>(x.n())))
    if (auto w = oracle::condorcet_winner(x.m(), e)) out[*w] = true;
  return out;
}

}  // namespace

TEST_CASE("necessary condition on reference matrices") {
  const PositionMatrix id(IntMatrix(5 * IntMatrix::Identity(4, 4)));
  CHECK(necessary_condition(id, 0));
  for (int c = 1; c < 4; ++c) CHECK_FALSE(necessary_condition(id, c));
  CHECK(placement_vector(example_one(), 2) == std::vector<int>{2, 2, 3, 3});
}

TEST_CASE("necessary condition matches the subset formula") {
  Rng rng = derive_stream(1, 0);
  for (int t = 0; t < 300; ++t) {
    const int m = uniform_int(rng, 2, 6), n = uniform_int(rng, 1, 12);
    const PositionMatrix x = random_matrix(m, n, rng);
    for (int c = 0; c < m; ++c) CHECK(necessary_condition(x, c) == oracle::cw_condition(x.entries(), c));
  }
}

TEST_CASE("exact search on reference matrices") {
  const PositionMatrix id(IntMatrix(3 * IntMatrix::Identity(4, 4)));
  const auto w = exists_realization_with_cw(id, 0);
  REQUIRE(w);
  CHECK(condorcet_winner(*w) == 0);
  for (int c = 0; c < 4; ++c) CHECK_FALSE(exists_realization_with_cw(example_one(), c).has_value());
  IntMatrix two(2, 2);
  two << 1, 1, 1, 1;
  for (int c = 0; c < 2; ++c) CHECK_FALSE(exists_realization_with_cw(PositionMatrix(two), c).has_value());
  CHECK(count_possible_cw(id).count == 1);
  CHECK(count_possible_cw(example_one()).count == 0);
  CHECK_THROWS_AS(count_possible_cw(PositionMatrix(IntMatrix(IntMatrix::Constant(9, 9, 1)))), BoundExceeded);
}

TEST_CASE("exact search agrees with enumeration and respects the condition") {
  Rng rng = derive_stream(2, 0);
  for (int t = 0; t < 40; ++t) {
    const int m = uniform_int(rng, 2, 4), n = uniform_int(rng, 1, 6);
    const PositionMatrix x = random_matrix(m, n, rng);
    const auto brute = brute_winners(x);
    for (int c = 0; c < m; ++c) {
      const CwSearchResult r = search_realization_with_cw(x, c);
      REQUIRE(r.status != CwStatus::unknown);
      CHECK((r.status == CwStatus::found) == brute[c]);
      if (r.witness) {
        CHECK(position_matrix_of(*r.witness) == x);
        CHECK(condorcet_winner(*r.witness) == c);
      }
      if (brute[c]) CHECK(necessary_condition(x, c));
    }
  }
}

TEST_CASE("each stage alone stays exact") {
  Rng rng = derive_stream(3, 0);
  CwSearchOptions lpOnly;
  lpOnly.useLocalSearch = false;
  CwSearchOptions backtrackOnly = lpOnly;
  backtrackOnly.useLpCertificate = false;
  for (int t = 0; t < 30; ++t) {
    const int m = uniform_int(rng, 3, 5), n = uniform_int(rng, 3, 9);
    const PositionMatrix x = random_matrix(m, n, rng);
    for (int c = 0; c < m; ++c) {
      const auto full = search_realization_with_cw(x, c).status;
      CHECK(search_realization_with_cw(x, c, lpOnly).status == full);
      CHECK(search_realization_with_cw(x, c, backtrackOnly).status == full);
      CHECK(backtrack_realization_with_cw(x, c).status == full);
    }
  }
}

TEST_CASE("heuristic witnesses verify") {
  Rng rng = derive_stream(4, 0);
  for (int t = 0; t < 20; ++t) {
    const PositionMatrix x = random_matrix(6, 15, rng);
    for (int c = 0; c < 6; ++c)
      if (auto w = heuristic_witness(x, c, 20000, t)) {
        CHECK(position_matrix_of(*w) == x);
        CHECK(condorcet_winner(*w) == c);
        CHECK(necessary_condition(x, c));
      }
  }
}

TEST_CASE("node budgets end undecided rather than wrong") {
  const auto data = build_dataset(dataset_preset("8x80", 3));
  CwSearchOptions tight;
  tight.useLocalSearch = false;
  tight.useLpCertificate = false;
  tight.nodeLimit = 5;
  int undecided = 0;
  for (std::size_t k = 0; k < data.size(); k += 40) {
    const PositionMatrix x = position_matrix_of(data[k].election);
    for (int c = 0; c < 8; ++c) {
      const auto r = search_realization_with_cw(x, c, tight);
      undecided += r.status == CwStatus::unknown;
      if (r.status == CwStatus::found) CHECK(condorcet_winner(*r.witness) == c);
    }
  }
  CHECK(undecided > 0);
}

TEST_CASE("gap report") {
  std::vector<PositionMatrix> ids(5, PositionMatrix(IntMatrix(4 * IntMatrix::Identity(3, 3))));
  const GapSummary s = condition_gap_report(ids);
  CHECK(s.gapCases == 0);
  CHECK(s.soundnessViolations == 0);
  CHECK(s.rows.size() == 15);

  Rng rng = derive_stream(5, 0);
  std::vector<PositionMatrix> mixed;
  for (int t = 0; t < 20; ++t) mixed.push_back(random_matrix(4, 6, rng));
  CwSearchOptions probe;
  probe.soundnessProbeSteps = 5000;
  const GapSummary g = condition_gap_report(mixed, probe);
  CHECK(g.soundnessViolations == 0);
  CHECK(g.undecided == 0);
  for (const auto& row : g.rows) {
    const auto brute = brute_winners(mixed[row.matrix]);
    CHECK((row.exact == CwStatus::found) == brute[row.candidate]);
  }
  CHECK(to_string(CwStatus::found) == "yes");
}
