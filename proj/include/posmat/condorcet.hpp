#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "posmat/core.hpp"
#include "posmat/random.hpp"

namespace posmat {

// True iff for every prefix length i and every set S of rivals of c,
//   sum_{d in S} sum_{k<=i} X[k][d] <= |S| floor((n-1)/2) + sum_{k<i} X[k][c] min(|S|, i-k).
// The right side depends on S only through |S|, so the heaviest rivals suffice.
bool necessary_condition(const PositionMatrix& x, int c);

// c's positions as a sorted vector with X[i][c] copies of position i.
std::vector<int> placement_vector(const PositionMatrix& x, int c);

enum class CwStatus { found, absent, unknown };

struct CwSearchOptions {
  std::uint64_t seed = 0;
  std::uint64_t localSearchSteps = 200000;
  bool useLocalSearch = true;
  bool useLpCertificate = true;
  // Exact LP relaxations solved in the integer program's branch and bound.
  std::uint64_t branchNodeLimit = 2000;
  // Backtracking node budget; 0 means unlimited.
  std::uint64_t nodeLimit = 0;
  // Gap report only: local search steps spent hunting a witness for candidates
  // the condition rejects. Any hit is a soundness violation.
  std::uint64_t soundnessProbeSteps = 0;
};

struct CwSearchResult {
  CwStatus status = CwStatus::unknown;
  std::optional<Election> witness;
  // Which stage decided: "condition", "local-search", "aggregated-search", "lp",
  // "lp-integral", "branch-and-bound" or "backtracking".
  std::string decidedBy;
  std::uint64_t nodes = 0;
};

// Realization of x in which c beats every rival in more than n/2 votes.
// Stages: the necessary condition; seeded local searches over votes and over
// (c position, position, rival) counts; an exact branch and bound on the
// integer program over those counts; complete backtracking over votes when the
// branch and bound runs out of nodes.
CwSearchResult search_realization_with_cw(const PositionMatrix& x, int c,
                                          const CwSearchOptions& opt = {});
// Throws BoundExceeded when the search ends undecided.
std::optional<Election> exists_realization_with_cw(const PositionMatrix& x, int c,
                                                   const CwSearchOptions& opt = {});

// Both local searches, run whatever the necessary condition says. Any witness
// returned is verified. Used to probe the condition's soundness.
std::optional<Election> heuristic_witness(const PositionMatrix& x, int c, std::uint64_t steps,
                                          std::uint64_t seed = 0);

// Complete backtracking alone: votes in increasing c position, each filled top
// to bottom under remaining cell counts, a cap of floor((n-1)/2) wins over c per
// rival, a matching check for the rest of the vote, and lexicographic order
// among votes sharing c's position.
CwSearchResult backtrack_realization_with_cw(const PositionMatrix& x, int c,
                                             std::uint64_t nodeLimit = 0);

struct PossibleWinners {
  int count = 0;
  std::vector<int> candidates;
  std::vector<int> undecided;
};
PossibleWinners count_possible_cw(const PositionMatrix& x, const CwSearchOptions& opt = {});

struct GapRow {
  std::size_t matrix = 0;
  int candidate = 0;
  bool condition = false;
  CwStatus exact = CwStatus::unknown;
};

struct GapSummary {
  std::vector<GapRow> rows;
  std::size_t gapCases = 0;        // condition true, exact absent
  std::size_t soundnessViolations = 0;  // condition false, exact found
  std::size_t undecided = 0;
};
GapSummary condition_gap_report(const std::vector<PositionMatrix>& dataset,
                                const CwSearchOptions& opt = {});

std::string to_string(CwStatus s);

}  // namespace posmat
