#include "posmat/realize.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <boost/random/uniform_int_distribution.hpp>

namespace posmat {

namespace {

BigInt from_i128(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  BigInt r(static_cast<std::uint64_t>(u >> 64));
  r <<= 64;
  r += BigInt(static_cast<std::uint64_t>(u));
  return neg ? BigInt(-r) : r;
}

// Permanent of the 0/1 matrix rows[i] restricted to the given row and column sets.
__int128 perm01(const std::vector<std::uint64_t>& rows, std::uint64_t rowSet, std::uint64_t colSet) {
  std::vector<std::uint64_t> rs;
  for (std::uint64_t r = rowSet; r; r &= r - 1) rs.push_back(rows[std::countr_zero(r)] & colSet);
  const int k = static_cast<int>(rs.size());
  if (k != std::popcount(colSet)) return 0;
  if (k == 0) return 1;
  std::vector<int> cols;
  for (std::uint64_t c = colSet; c; c &= c - 1) cols.push_back(std::countr_zero(c));
  __int128 total = 0;
  std::uint64_t subset = 0, prevGray = 0;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << k); ++s) {
    std::uint64_t gray = s ^ (s >> 1);
    int flip = std::countr_zero(gray ^ prevGray);
    prevGray = gray;
    subset ^= std::uint64_t{1} << cols[flip];
    __int128 prod = 1;
    for (int i = 0; i < k && prod; ++i) prod *= std::popcount(rs[i] & subset);
    total += (std::popcount(gray) & 1) ? -prod : prod;
  }
  return (k & 1) ? -total : total;
}

}  // namespace

BigInt permanent(const IntMatrix& a) {
  const int m = static_cast<int>(a.rows());
  if (a.cols() != a.rows()) throw InvalidInput("permanent needs a square matrix");
  if (m > 25) throw BoundExceeded("permanent is limited to m <= 25 (cost 2^m * m)");
  if (m == 0) return 1;
  bool binary = true;
  double rowBits = 0;
  for (int i = 0; i < m; ++i) {
    std::int64_t s = 0;
    for (int j = 0; j < m; ++j) {
      if (a(i, j) != 0 && a(i, j) != 1) binary = false;
      s += a(i, j) < 0 ? -a(i, j) : a(i, j);
    }
    rowBits += std::log2(static_cast<double>(s) + 1);
  }
  if (binary && m <= 60) {
    std::vector<std::uint64_t> rows(m, 0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (a(i, j)) rows[i] |= std::uint64_t{1} << j;
    if (rowBits + m + 2 < 126) {
      std::uint64_t all = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
      return from_i128(perm01(rows, all, all));
    }
  }
  const bool narrow = rowBits + m + 2 < 126;
  std::vector<std::int64_t> rowSum(m, 0);
  __int128 small = 0;
  BigInt big = 0;
  std::uint64_t prevGray = 0;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << m); ++s) {
    std::uint64_t gray = s ^ (s >> 1);
    std::uint64_t diff = gray ^ prevGray;
    int j = std::countr_zero(diff);
    const bool added = gray & diff;
    prevGray = gray;
    for (int i = 0; i < m; ++i) rowSum[i] += added ? a(i, j) : -a(i, j);
    const bool negative = std::popcount(gray) & 1;
    if (narrow) {
      __int128 prod = 1;
      for (int i = 0; i < m && prod; ++i) prod *= rowSum[i];
      small += negative ? -prod : prod;
    } else {
      BigInt prod = 1;
      for (int i = 0; i < m && prod != 0; ++i) prod *= rowSum[i];
      if (negative) big -= prod;
      else big += prod;
    }
  }
  BigInt total = narrow ? from_i128(small) : big;
  return (m & 1) ? BigInt(-total) : total;
}

BigInt permanent(const Support& s) {
  IntMatrix a = IntMatrix::Zero(s.m, s.m);
  for (int i = 0; i < s.m; ++i)
    for (int j = 0; j < s.m; ++j) a(i, j) = (s.rows[i] >> j) & 1;
  return permanent(a);
}

Vote sample_matching_uniform(const Support& s, Rng& rng) {
  const int m = s.m;
  if (m > 20) throw BoundExceeded("uniform matching sampling is limited to m <= 20");
  std::uint64_t rowSet = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  std::uint64_t colSet = rowSet;
  __int128 current = perm01(s.rows, rowSet, colSet);
  if (current <= 0) throw InvalidInput("support has no perfect matching");
  Vote v(m, -1);
  std::vector<std::pair<int, std::uint64_t>> options;
  for (int c = 0; c < m; ++c) {
    colSet &= ~(std::uint64_t{1} << c);
    options.clear();
    std::uint64_t total = 0;
    for (std::uint64_t r = rowSet; r; r &= r - 1) {
      int i = std::countr_zero(r);
      if (!((s.rows[i] >> c) & 1)) continue;
      auto w = static_cast<std::uint64_t>(perm01(s.rows, rowSet & ~(std::uint64_t{1} << i), colSet));
      if (w) {
        options.emplace_back(i, w);
        total += w;
      }
    }
    std::uint64_t u = boost::random::uniform_int_distribution<std::uint64_t>(0, total - 1)(rng);
    int chosen = -1;
    for (auto& [i, w] : options) {
      if (u < w) {
        chosen = i;
        break;
      }
      u -= w;
    }
    v[chosen] = c;
    rowSet &= ~(std::uint64_t{1} << chosen);
  }
  return v;
}

namespace {

void peel(IntMatrix& r, const Vote& v) {
  for (int i = 0; i < static_cast<int>(v.size()); ++i) --r(i, v[i]);
}

}  // namespace

Election realize_any(const PositionMatrix& x) {
  IntMatrix r = x.entries();
  Election e(x.m());
  for (std::int64_t k = 0; k < x.n(); ++k) {
    auto v = first_perfect_matching(Support::of(r));
    if (!v) throw Error("residual lost its perfect matching");
    peel(r, *v);
    e.add(std::move(*v));
  }
  return e;
}

Election sample_realization_naive(const PositionMatrix& x, Rng& rng) {
  IntMatrix r = x.entries();
  Election e(x.m());
  for (std::int64_t k = 0; k < x.n(); ++k) {
    Vote v = sample_matching_uniform(Support::of(r), rng);
    peel(r, v);
    e.add(std::move(v));
  }
  return e;
}

bool within_counting_bounds(int m, std::int64_t n) {
  return (m <= 5 && n <= 16) || (m <= 8 && n <= 4);
}

void require_counting_bounds(int m, std::int64_t n) {
  if (!within_counting_bounds(m, n))
    throw BoundExceeded("exact counting supports m <= 5 with n <= 16, or m <= 8 with n <= 4 (got m=" +
                        std::to_string(m) + ", n=" + std::to_string(n) + ")");
}

BigInt uniform_below(const BigInt& bound, Rng& rng) {
  if (bound <= 0) throw InvalidInput("uniform_below needs a positive bound");
  const unsigned bits = msb(bound) + 1;
  for (;;) {
    BigInt r = 0;
    unsigned have = 0;
    while (have < bits) {
      r <<= 64;
      r += BigInt(static_cast<std::uint64_t>(rng()));
      have += 64;
    }
    r >>= (have - bits);
    if (r < bound) return r;
  }
}

RealizationCounter::RealizationCounter(const PositionMatrix& x) : m_(x.m()), n_(x.n()) {
  require_counting_bounds(m_, n_);
  x_.resize(m_ * m_);
  for (int i = 0; i < m_; ++i)
    for (int c = 0; c < m_; ++c) x_[i * m_ + c] = static_cast<std::int16_t>(x(i, c));
}

bool RealizationCounter::supports(const Residual& r, const Vote& v) const {
  for (int i = 0; i < m_; ++i)
    if (r[i * m_ + v[i]] <= 0) return false;
  return true;
}

void RealizationCounter::subtract(Residual& r, const Vote& v, int sign) const {
  for (int i = 0; i < m_; ++i) r[i * m_ + v[i]] -= sign;
}

bool RealizationCounter::is_zero(const Residual& r) const {
  return std::all_of(r.begin(), r.end(), [](std::int16_t e) { return e == 0; });
}

std::string RealizationCounter::key(const Residual& r, const Vote& lo) const {
  std::string k(r.size() + lo.size(), '\0');
  for (std::size_t i = 0; i < r.size(); ++i) k[i] = static_cast<char>(r[i]);
  for (std::size_t i = 0; i < lo.size(); ++i) k[r.size() + i] = static_cast<char>(lo[i]);
  return k;
}

// Positions from..m-1 can still be matched to the unused candidates.
bool RealizationCounter::completable(const Residual& r, int from, std::uint64_t used) const {
  Support s;
  s.m = m_ - from;
  s.rows.assign(s.m, 0);
  std::vector<int> free;
  for (int c = 0; c < m_; ++c)
    if (!((used >> c) & 1)) free.push_back(c);
  for (int i = from; i < m_; ++i)
    for (int k = 0; k < static_cast<int>(free.size()); ++k)
      if (r[i * m_ + free[k]] > 0) s.rows[i - from] |= std::uint64_t{1} << k;
  return has_perfect_matching(s);
}

void RealizationCounter::lex_dfs(Residual& r, Vote& v, std::uint64_t used, bool tight,
                                 const Vote* lo, BigInt& acc) {
  const int i = static_cast<int>(v.size());
  if (i == m_) {
    subtract(r, v, +1);
    acc += count_from(r, v);
    subtract(r, v, -1);
    return;
  }
  if (!completable(r, i, used)) return;
  const int start = tight ? (*lo)[i] : 0;
  for (int c = start; c < m_; ++c) {
    if ((used >> c) & 1 || r[i * m_ + c] <= 0) continue;
    v.push_back(c);
    lex_dfs(r, v, used | (std::uint64_t{1} << c), tight && c == (*lo)[i], lo, acc);
    v.pop_back();
  }
}

BigInt RealizationCounter::lex_sum(Residual& r, std::vector<int>& prefix, const Vote* lo) {
  std::uint64_t used = 0;
  bool tight = lo != nullptr;
  for (int i = 0; i < static_cast<int>(prefix.size()); ++i) {
    int c = prefix[i];
    if (c < 0 || c >= m_ || ((used >> c) & 1)) throw InvalidInput("prefix is not a partial vote");
    if (r[i * m_ + c] <= 0) return 0;
    if (tight) {
      if (c < (*lo)[i]) return 0;
      if (c > (*lo)[i]) tight = false;
    }
    used |= std::uint64_t{1} << c;
  }
  BigInt acc = 0;
  Vote v = prefix;
  lex_dfs(r, v, used, tight, lo, acc);
  return acc;
}

BigInt RealizationCounter::count_from(Residual& r, const Vote& lo) {
  if (is_zero(r)) return 1;
  std::string k = key(r, lo);
  if (auto it = memo_.find(k); it != memo_.end()) return it->second;
  std::vector<int> empty;
  BigInt total = lex_sum(r, empty, &lo);
  memo_.emplace(std::move(k), total);
  return total;
}

BigInt RealizationCounter::count() {
  Residual r = x_;
  return count_from(r, identity_vote(m_));
}

BigInt RealizationCounter::count_lex(const std::vector<int>& prefix, const Vote& lowerBound) {
  require_permutation(lowerBound, m_, "lower bound vote");
  if (static_cast<int>(prefix.size()) > m_) throw InvalidInput("prefix longer than a vote");
  Residual r = x_;
  if (is_zero(r)) return 0;
  std::vector<int> p = prefix;
  return lex_sum(r, p, &lowerBound);
}

Election RealizationCounter::sample_uniform(Rng& rng) {
  Residual r = x_;
  Election e(m_);
  Vote prev = identity_vote(m_);
  for (std::int64_t k = 0; k < n_; ++k) {
    // Events: index m-1 means "repeat prev"; index l < m-1 means the next vote
    // agrees with prev on l positions and is larger at position l.
    std::vector<BigInt> weight(m_, BigInt(0));
    BigInt total = 0;
    if (supports(r, prev)) {
      subtract(r, prev, +1);
      weight[m_ - 1] = count_from(r, prev);
      subtract(r, prev, -1);
    }
    for (int l = 0; l + 1 < m_; ++l) {
      std::vector<int> prefix(prev.begin(), prev.begin() + l);
      std::uint64_t used = 0;
      for (int c : prefix) used |= std::uint64_t{1} << c;
      for (int c = prev[l] + 1; c < m_; ++c) {
        if ((used >> c) & 1) continue;
        prefix.push_back(c);
        weight[l] += lex_sum(r, prefix, nullptr);
        prefix.pop_back();
      }
    }
    for (auto& w : weight) total += w;
    if (total == 0) throw Error("uniform sampler reached an unrealizable residual");
    BigInt u = uniform_below(total, rng);
    int event = 0;
    while (u >= weight[event]) u -= weight[event++];

    Vote v;
    if (event == m_ - 1) {
      v = prev;
    } else {
      v.assign(prev.begin(), prev.begin() + event);
      std::uint64_t used = 0;
      for (int c : v) used |= std::uint64_t{1} << c;
      for (int pos = event; pos < m_; ++pos) {
        const int from = pos == event ? prev[event] + 1 : 0;
        std::vector<std::pair<int, BigInt>> options;
        BigInt sum = 0;
        for (int c = from; c < m_; ++c) {
          if ((used >> c) & 1) continue;
          v.push_back(c);
          BigInt w = lex_sum(r, v, nullptr);
          v.pop_back();
          if (w > 0) {
            sum += w;
            options.emplace_back(c, std::move(w));
          }
        }
        BigInt pick = uniform_below(sum, rng);
        int chosen = options.back().first;
        for (auto& [c, w] : options) {
          if (pick < w) {
            chosen = c;
            break;
          }
          pick -= w;
        }
        v.push_back(chosen);
        used |= std::uint64_t{1} << chosen;
      }
    }
    subtract(r, v, +1);
    e.add(v);
    prev = std::move(v);
  }
  return e;
}

void RealizationCounter::enumerate_from(Residual& r, const Vote& lo, std::vector<Vote>& acc,
                                        const std::function<bool(const Election&)>& sink,
                                        bool& stop) {
  if (stop) return;
  if (is_zero(r)) {
    if (!sink(Election(m_, acc))) stop = true;
    return;
  }
  // Walk candidate votes >= lo in lexicographic order, descending only where a completion exists.
  Vote v;
  std::function<void(std::uint64_t, bool)> walk = [&](std::uint64_t used, bool tight) {
    if (stop) return;
    const int i = static_cast<int>(v.size());
    if (i == m_) {
      subtract(r, v, +1);
      if (count_from(r, v) > 0) {
        acc.push_back(v);
        enumerate_from(r, v, acc, sink, stop);
        acc.pop_back();
      }
      subtract(r, v, -1);
      return;
    }
    if (!completable(r, i, used)) return;
    for (int c = tight ? lo[i] : 0; c < m_ && !stop; ++c) {
      if ((used >> c) & 1 || r[i * m_ + c] <= 0) continue;
      v.push_back(c);
      walk(used | (std::uint64_t{1} << c), tight && c == lo[i]);
      v.pop_back();
    }
  };
  walk(0, true);
}

void RealizationCounter::enumerate(const std::function<bool(const Election&)>& sink) {
  Residual r = x_;
  std::vector<Vote> acc;
  bool stop = false;
  enumerate_from(r, identity_vote(m_), acc, sink, stop);
}

BigInt count_realizations(const PositionMatrix& x) { return RealizationCounter(x).count(); }

BigInt count_lex_realizations(const PositionMatrix& x, const std::vector<int>& prefix,
                              const Vote& lowerBound) {
  return RealizationCounter(x).count_lex(prefix, lowerBound);
}

Election sample_realization_uniform(const PositionMatrix& x, Rng& rng) {
  return RealizationCounter(x).sample_uniform(rng);
}

void enumerate_realizations(const PositionMatrix& x,
                            const std::function<bool(const Election&)>& sink) {
  RealizationCounter(x).enumerate(sink);
}

std::vector<Election> all_realizations(const PositionMatrix& x) {
  std::vector<Election> out;
  enumerate_realizations(x, [&](const Election& e) {
    out.push_back(e);
    return true;
  });
  return out;
}

}  // namespace posmat
