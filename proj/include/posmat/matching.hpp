#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "posmat/core.hpp"

namespace posmat {

// Bipartite graph between positions (rows) and candidates (columns); bit c of
// rows[i] is set when candidate c may take position i. At most 64 candidates.
struct Support {
  int m = 0;
  std::vector<std::uint64_t> rows;

  static Support of(const IntMatrix& x);  // entry > 0
};

// Size of a maximum matching (augmenting paths).
int max_matching(const Support& s);
bool has_perfect_matching(const Support& s);

// The lexicographically smallest vote (position 0 first) that is a perfect
// matching of the support, if any.
std::optional<Vote> first_perfect_matching(const Support& s);

}  // namespace posmat
