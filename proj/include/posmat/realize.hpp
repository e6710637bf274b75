#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "posmat/core.hpp"
#include "posmat/matching.hpp"
#include "posmat/random.hpp"

namespace posmat {

// Ryser inclusion-exclusion with Gray-code column updates; m <= 25.
BigInt permanent(const IntMatrix& a);
BigInt permanent(const Support& s);

// Uniformly random perfect matching of the support, returned as the vote that
// puts candidate v[i] on position i. Candidates are fixed in index order, each
// position drawn with probability perm(minor) / perm(current).
Vote sample_matching_uniform(const Support& s, Rng& rng);

// Deterministic peeling with the lexicographically first matching each time.
Election realize_any(const PositionMatrix& x);
// Repeated uniform matching draws, each peeled off the residual.
Election sample_realization_naive(const PositionMatrix& x, Rng& rng);

// Exact counting gates: m <= 5 and n <= 16, or m <= 8 and n <= 4.
bool within_counting_bounds(int m, std::int64_t n);
void require_counting_bounds(int m, std::int64_t n);

BigInt uniform_below(const BigInt& bound, Rng& rng);

// Counts vote multisets realizing a position matrix. A multiset is identified
// with its sorted vote list v_1 <= ... <= v_n, so
//   count(R, lo) = sum over votes v >= lo supported by R of count(R - P(v), v).
// Memoized on (residual, lower bound); reuse one instance for repeated queries.
class RealizationCounter {
public:
  explicit RealizationCounter(const PositionMatrix& x);

  int m() const { return m_; }
  std::int64_t n() const { return n_; }

  BigInt count();
  // Realizations whose lexicographically first vote extends `prefix` and is >= lowerBound.
  BigInt count_lex(const std::vector<int>& prefix, const Vote& lowerBound);
  // Vote by vote in nondecreasing order; branch on how long the next vote
  // keeps the previous one's prefix, then fill candidates proportionally to counts.
  Election sample_uniform(Rng& rng);
  // Sorted vote lists in lexicographic order; stops early when sink returns false.
  void enumerate(const std::function<bool(const Election&)>& sink);

  std::size_t memo_size() const { return memo_.size(); }

private:
  using Residual = std::vector<std::int16_t>;  // row-major, position x candidate

  BigInt count_from(Residual& r, const Vote& lo);
  BigInt lex_sum(Residual& r, std::vector<int>& prefix, const Vote* lo);
  void lex_dfs(Residual& r, Vote& v, std::uint64_t used, bool tight, const Vote* lo,
               BigInt& acc);
  bool completable(const Residual& r, int from, std::uint64_t used) const;
  bool supports(const Residual& r, const Vote& v) const;
  void subtract(Residual& r, const Vote& v, int sign) const;
  bool is_zero(const Residual& r) const;
  std::string key(const Residual& r, const Vote& lo) const;
  void enumerate_from(Residual& r, const Vote& lo, std::vector<Vote>& acc,
                      const std::function<bool(const Election&)>& sink, bool& stop);

  int m_;
  std::int64_t n_;
  Residual x_;
  std::unordered_map<std::string, BigInt> memo_;
};

BigInt count_realizations(const PositionMatrix& x);
BigInt count_lex_realizations(const PositionMatrix& x, const std::vector<int>& prefix,
                              const Vote& lowerBound);
Election sample_realization_uniform(const PositionMatrix& x, Rng& rng);
void enumerate_realizations(const PositionMatrix& x,
                            const std::function<bool(const Election&)>& sink);
std::vector<Election> all_realizations(const PositionMatrix& x);

}  // namespace posmat
