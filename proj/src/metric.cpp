#include "posmat/metric.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

namespace posmat {

namespace {

void require_same_shape(const PositionMatrix& a, const PositionMatrix& b) {
  if (a.m() != b.m()) throw InvalidInput("matrices have different numbers of candidates");
  if (a.n() != b.n()) throw InvalidInput("position matrices have different numbers of voters");
}

}  // namespace

std::int64_t positionwise_raw(const PositionMatrix& a, const PositionMatrix& b) {
  require_same_shape(a, b);
  return positionwise_raw<std::int64_t>(a.entries(), b.entries());
}

DistanceValue positionwise_distance(const PositionMatrix& a, const PositionMatrix& b) {
  return {Rational(positionwise_raw(a, b)), positionwise_diameter(a.m(), a.n())};
}

DistanceValue positionwise_distance(const FrequencyMatrix& a, const FrequencyMatrix& b) {
  if (a.m() != b.m()) throw InvalidInput("matrices have different numbers of candidates");
  return {positionwise_raw<Rational>(a.entries(), b.entries()), positionwise_diameter(a.m(), 1)};
}

Rational positionwise_diameter(int m, std::int64_t n) {
  return Rational(BigInt(n) * (BigInt(m) * m - 1), 3);
}

PositionMatrix un_matrix(int m, std::int64_t n) {
  if (m < 1) throw InvalidInput("need at least one candidate");
  if (n % m != 0) throw InvalidInput("UN matrix needs m to divide n");
  return PositionMatrix(IntMatrix::Constant(m, m, n / m));
}

PositionMatrix id_matrix(int m, std::int64_t n) {
  if (m < 1) throw InvalidInput("need at least one candidate");
  IntMatrix x = IntMatrix::Zero(m, m);
  x.diagonal().setConstant(n);
  return PositionMatrix(std::move(x));
}

std::int64_t max_swap_distance(int m, std::int64_t n) {
  if (m < 1 || n < 1) throw InvalidInput("max swap distance needs m >= 1 and n >= 1");
  return n * m * (m - 1) / 4;
}

namespace {

using Mask = std::uint32_t;  // one bit per candidate pair, m <= 8

struct PairIndex {
  int m;
  int idx[8][8];
  explicit PairIndex(int m_) : m(m_) {
    int k = 0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) idx[a][b] = k++;
  }
};

// Bit (a, b), a < b, is set when a is ranked above b once candidate c is renamed to label[c].
Mask pair_mask(const Vote& v, const Vote& label, const PairIndex& pi) {
  int pos[8];
  for (int i = 0; i < pi.m; ++i) pos[label[v[i]]] = i;
  Mask mask = 0;
  for (int a = 0; a < pi.m; ++a)
    for (int b = a + 1; b < pi.m; ++b)
      if (pos[a] < pos[b]) mask |= Mask{1} << pi.idx[a][b];
  return mask;
}

// Min-cost assignment on small nonnegative integer costs. Starts from row and
// column reductions with a greedy tight matching, then augments the remaining
// rows. The dual objective bounds the optimum from below throughout, so the
// solve returns a value >= limit as soon as that bound reaches limit.
std::int64_t bounded_assignment(const std::vector<int>& cost, int n, std::int64_t limit,
                                std::vector<int>& colForRow) {
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0), rowMatched(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    const int* row = &cost[(i - 1) * n];
    u[i] = *std::min_element(row, row + n);
  }
  for (int j = 1; j <= n; ++j) {
    std::int64_t lo = inf;
    for (int i = 1; i <= n; ++i) lo = std::min(lo, cost[(i - 1) * n + j - 1] - u[i]);
    v[j] = lo;
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (p[j] == 0 && cost[(i - 1) * n + j - 1] == u[i] + v[j]) {
        p[j] = i;
        rowMatched[i] = 1;
        break;
      }
  auto dual = [&] {
    std::int64_t s = 0;
    for (int k = 1; k <= n; ++k) s += u[k] + v[k];
    return s;
  };
  if (dual() >= limit) return dual();
  for (int i = 1; i <= n; ++i) {
    if (rowMatched[i]) continue;
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      std::int64_t delta = inf;
      int j1 = 0;
      const int* row = &cost[(i0 - 1) * n];
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        std::int64_t cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
    if (const std::int64_t d = dual(); d >= limit) return d;
  }
  colForRow.assign(n, 0);
  std::int64_t total = 0;
  for (int j = 1; j <= n; ++j) {
    colForRow[p[j] - 1] = j - 1;
    total += cost[(p[j] - 1) * n + (j - 1)];
  }
  return total;
}

}  // namespace

IsoswapResult isomorphic_swap(const Election& e, const Election& f) {
  if (e.m() != f.m()) throw InvalidInput("elections have different numbers of candidates");
  if (e.n() != f.n()) throw InvalidInput("elections have different numbers of voters");
  const int m = e.m(), n = e.n();
  if (m > 8) throw BoundExceeded("isomorphic swap distance is limited to m <= 8");
  IsoswapResult out;
  out.normalizer = n > 0 ? max_swap_distance(m, n) : 0;
  out.relabel = identity_vote(m);
  out.pairing.resize(n);
  std::iota(out.pairing.begin(), out.pairing.end(), 0);
  if (n == 0 || m == 1) return out;

  const PairIndex pi(m);
  const int pairs = m * (m - 1) / 2;
  const Vote id = identity_vote(m);
  std::vector<Mask> fm(n);
  for (int l = 0; l < n; ++l) fm[l] = pair_mask(f[l], id, pi);
  // Tallies per ordered pair of original candidates.
  IntMatrix we = pairwise_tally(e), wf = pairwise_tally(f);

  std::vector<Vote> perms;
  std::vector<std::int64_t> bound;
  Vote label = identity_vote(m);
  do {
    std::int64_t lb = 0;
    // Renamed pair (label[a], label[b]) is compared with the same pair in f.
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        std::int64_t d = we(a, b) - wf(label[a], label[b]);
        lb += d < 0 ? -d : d;
      }
    perms.push_back(label);
    bound.push_back(lb);
  } while (std::next_permutation(label.begin(), label.end()));
  std::vector<int> order(perms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return bound[a] < bound[b]; });

  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<int> cost(static_cast<std::size_t>(n) * n), pairing;
  std::vector<int> colMin(n);
  for (int k : order) {
    if (bound[k] >= best) break;
    // Row minima and column minima both bound the assignment from below; rows
    // are built lazily so hopeless relabelings stop early.
    std::int64_t rowLb = 0, colLb = 0;
    std::fill(colMin.begin(), colMin.end(), pairs);
    int r = 0;
    for (; r < n && rowLb < best; ++r) {
      const Mask mr = pair_mask(e[r], perms[k], pi);
      int* row = &cost[r * n];
      for (int l = 0; l < n; ++l) row[l] = std::popcount(mr ^ fm[l]);
      int lo = pairs;
      for (int l = 0; l < n; ++l) lo = std::min(lo, row[l]);
      for (int l = 0; l < n; ++l) colMin[l] = std::min(colMin[l], row[l]);
      rowLb += lo;
    }
    if (r < n) continue;
    for (int l = 0; l < n; ++l) colLb += colMin[l];
    if (std::max(rowLb, colLb) >= best) continue;
    ++out.solved;
    std::int64_t c = bounded_assignment(cost, n, best, pairing);
    if (c < best) {
      best = c;
      out.relabel = perms[k];
      out.pairing = pairing;
      if (best == 0) break;
    }
  }
  out.raw = best;
  return out;
}

DistanceValue isomorphic_swap_distance(const Election& e, const Election& f) {
  IsoswapResult r = isomorphic_swap(e, f);
  return {Rational(r.raw), Rational(r.normalizer)};
}

}  // namespace posmat
