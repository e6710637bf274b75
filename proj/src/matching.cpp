#include "posmat/matching.hpp"

#include <bit>

namespace posmat {

Support Support::of(const IntMatrix& x) {
  if (x.rows() > 64) throw BoundExceeded("support graphs are limited to 64 candidates");
  Support s;
  s.m = static_cast<int>(x.rows());
  s.rows.assign(s.m, 0);
  for (int i = 0; i < s.m; ++i)
    for (int j = 0; j < s.m; ++j)
      if (x(i, j) > 0) s.rows[i] |= std::uint64_t{1} << j;
  return s;
}

namespace {

bool augment(const Support& s, int i, std::uint64_t& seen, std::vector<int>& rowOfCol) {
  std::uint64_t cand = s.rows[i] & ~seen;
  while (cand) {
    int c = std::countr_zero(cand);
    cand &= cand - 1;
    seen |= std::uint64_t{1} << c;
    if (rowOfCol[c] < 0 || augment(s, rowOfCol[c], seen, rowOfCol)) {
      rowOfCol[c] = i;
      return true;
    }
  }
  return false;
}

}  // namespace

int max_matching(const Support& s) {
  std::vector<int> rowOfCol(s.m, -1);
  int size = 0;
  for (int i = 0; i < s.m; ++i) {
    std::uint64_t seen = 0;
    if (augment(s, i, seen, rowOfCol)) ++size;
  }
  return size;
}

bool has_perfect_matching(const Support& s) {
  std::vector<int> rowOfCol(s.m, -1);
  for (int i = 0; i < s.m; ++i) {
    std::uint64_t seen = 0;
    if (!augment(s, i, seen, rowOfCol)) return false;
  }
  return true;
}

std::optional<Vote> first_perfect_matching(const Support& s) {
  if (!has_perfect_matching(s)) return std::nullopt;
  Support rest = s;
  Vote v(s.m);
  for (int i = 0; i < s.m; ++i) {
    std::uint64_t cand = rest.rows[i];
    bool placed = false;
    while (cand && !placed) {
      int c = std::countr_zero(cand);
      cand &= cand - 1;
      Support trial = rest;
      trial.rows[i] = std::uint64_t{1} << c;
      for (int k = i + 1; k < s.m; ++k) trial.rows[k] &= ~(std::uint64_t{1} << c);
      if (has_perfect_matching(trial)) {
        rest = trial;
        v[i] = c;
        placed = true;
      }
    }
    if (!placed) return std::nullopt;
  }
  return v;
}

}  // namespace posmat
