#include "posmat/condorcet.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>

#include "posmat/matching.hpp"
#include "posmat/ratlp.hpp"
#include "posmat/realize.hpp"

namespace posmat {

namespace {

void require_candidate(const PositionMatrix& x, int c) {
  if (c < 0 || c >= x.m()) throw InvalidInput("candidate index out of range");
}

std::int64_t loss_cap(std::int64_t n) { return n >= 1 ? (n - 1) / 2 : 0; }

bool verify_witness(const PositionMatrix& x, int c, const Election& e) {
  if (!(position_matrix_of(e) == x)) return false;
  auto w = condorcet_winner(e);
  return w && *w == c;
}

}  // namespace

bool necessary_condition(const PositionMatrix& x, int c) {
  require_candidate(x, c);
  const int m = x.m();
  const std::int64_t cap = loss_cap(x.n());
  std::vector<std::int64_t> prefix(m, 0);
  for (int i = 1; i <= m; ++i) {
    for (int d = 0; d < m; ++d) prefix[d] += x(i - 1, d);
    std::vector<std::int64_t> rivals;
    for (int d = 0; d < m; ++d)
      if (d != c) rivals.push_back(prefix[d]);
    std::sort(rivals.begin(), rivals.end(), std::greater<>());
    std::int64_t lhs = 0;
    for (int s = 1; s <= m - 1; ++s) {
      lhs += rivals[s - 1];
      std::int64_t rhs = s * cap;
      for (int k = 1; k <= i - 1; ++k) rhs += x(k - 1, c) * std::min<std::int64_t>(s, i - k);
      if (lhs > rhs) return false;
    }
  }
  return true;
}

std::vector<int> placement_vector(const PositionMatrix& x, int c) {
  require_candidate(x, c);
  std::vector<int> y;
  for (int i = 0; i < x.m(); ++i)
    for (std::int64_t k = 0; k < x(i, c); ++k) y.push_back(i);
  return y;
}

namespace {

// Swap moves keep the position matrix: votes u, v with u[i] = v[j] = a and
// u[j] = v[i] = b trade a and b in both. Minimizes the total excess of rivals
// ranked above c, breaking ties by the spread of those counts.
std::optional<Election> local_search(const PositionMatrix& x, int c, std::uint64_t steps,
                                     std::uint64_t seed) {
  const int m = x.m(), n = static_cast<int>(x.n());
  if (n == 0 || m == 1) return std::nullopt;
  const std::int64_t cap = loss_cap(n);
  Election start = realize_any(x);
  std::vector<Vote> votes = start.votes();
  std::vector<std::int64_t> above(m, 0);
  auto above_mask = [&](const Vote& v) {
    std::uint32_t mask = 0;
    for (int i = 0; v[i] != c; ++i) mask |= 1u << v[i];
    return mask;
  };
  std::vector<std::uint32_t> mask(n);
  for (int k = 0; k < n; ++k) {
    mask[k] = above_mask(votes[k]);
    for (int d = 0; d < m; ++d)
      if ((mask[k] >> d) & 1) ++above[d];
  }
  auto excess = [&](std::int64_t a) { return a > cap ? a - cap : 0; };
  std::int64_t violation = 0;
  for (int d = 0; d < m; ++d) violation += excess(above[d]);
  if (violation == 0) return Election(m, votes);

  Rng rng = derive_stream(seed, static_cast<std::uint64_t>(c));
  std::vector<int> partners;
  std::vector<std::int64_t> trial(m);
  for (std::uint64_t step = 0; step < steps; ++step) {
    const int u = uniform_int(rng, 0, n - 1);
    int i = uniform_int(rng, 0, m - 1), j = uniform_int(rng, 0, m - 2);
    if (j >= i) ++j;
    const int a = votes[u][i], b = votes[u][j];
    partners.clear();
    for (int k = 0; k < n; ++k)
      if (k != u && votes[k][i] == b && votes[k][j] == a) partners.push_back(k);
    if (partners.empty()) continue;
    const int v = partners[uniform_int(rng, 0, static_cast<int>(partners.size()) - 1)];
    std::swap(votes[u][i], votes[u][j]);
    std::swap(votes[v][i], votes[v][j]);
    const std::uint32_t mu = above_mask(votes[u]), mv = above_mask(votes[v]);
    trial = above;
    for (int d = 0; d < m; ++d) {
      trial[d] += static_cast<int>((mu >> d) & 1) - static_cast<int>((mask[u] >> d) & 1);
      trial[d] += static_cast<int>((mv >> d) & 1) - static_cast<int>((mask[v] >> d) & 1);
    }
    std::int64_t dv = 0, ds = 0;
    for (int d = 0; d < m; ++d) {
      dv += excess(trial[d]) - excess(above[d]);
      ds += trial[d] * trial[d] - above[d] * above[d];
    }
    const bool accept = 1000 * dv + ds <= 0 || uniform01(rng) < 0.001;
    if (!accept) {
      std::swap(votes[u][i], votes[u][j]);
      std::swap(votes[v][i], votes[v][j]);
      continue;
    }
    mask[u] = mu;
    mask[v] = mv;
    above = trial;
    violation += dv;
    if (violation == 0) return Election(m, votes);
  }
  return std::nullopt;
}

// Z[p][i][d]: votes with c at position p and rival d at position i. Each slice
// p is a (m-1)x(m-1) matrix with line sums X[p][c], hence a sum of votes.
struct ZIndex {
  int m, c;
  std::vector<int> col;  // flattened (p, i, d) -> column or -1
  int cols = 0;
  ZIndex(const PositionMatrix& x, int c_) : m(x.m()), c(c_), col(m * m * m, -1) {
    for (int p = 0; p < m; ++p) {
      if (x(p, c) == 0) continue;
      for (int i = 0; i < m; ++i)
        for (int d = 0; d < m; ++d)
          if (i != p && d != c && x(i, d) > 0) col[(p * m + i) * m + d] = cols++;
    }
  }
  int at(int p, int i, int d) const { return col[(p * m + i) * m + d]; }
};

std::optional<Election> slices_to_election(const PositionMatrix& x, int c, const ZIndex& z,
                                           const RatVector& y) {
  const int m = x.m();
  Election e(m);
  for (int p = 0; p < m; ++p) {
    if (x(p, c) == 0) continue;
    IntMatrix slice = IntMatrix::Zero(m, m);
    slice(p, c) = x(p, c);
    for (int i = 0; i < m; ++i)
      for (int d = 0; d < m; ++d)
        if (int k = z.at(p, i, d); k >= 0) {
          if (denominator(y(k)) != 1) return std::nullopt;
          slice(i, d) = static_cast<std::int64_t>(numerator(y(k)));
        }
    Election part = realize_any(PositionMatrix(slice));
    for (const Vote& v : part.votes()) e.add(v);
  }
  return e;
}

// Same objective over the aggregated counts Z[p][i][d]. A move shifts one unit
// around a 2x2 cycle in slice p and the opposite cycle in slice q, which keeps
// every slice bistochastic and every cell sum of x. Slices are split into
// votes only at the end, so moves need not respect any fixed vote split.
std::optional<Election> aggregated_search(const PositionMatrix& x, int c, std::uint64_t steps,
                                          std::uint64_t seed) {
  const int m = x.m(), n = static_cast<int>(x.n());
  if (n == 0 || m < 3) return std::nullopt;
  const std::int64_t cap = loss_cap(n);
  std::vector<std::int64_t> z(static_cast<std::size_t>(m) * m * m, 0);
  auto at = [&](int p, int i, int d) -> std::int64_t& { return z[(static_cast<std::size_t>(p) * m + i) * m + d]; };
  std::vector<std::int64_t> above(m, 0);
  const Election start = realize_any(x);
  for (const Vote& v : start.votes()) {
    int p = 0;
    while (v[p] != c) ++p;
    for (int i = 0; i < m; ++i) {
      if (i == p) continue;
      ++at(p, i, v[i]);
      if (i < p) ++above[v[i]];
    }
  }
  std::vector<int> slices;
  for (int p = 0; p < m; ++p)
    if (x(p, c) > 0) slices.push_back(p);
  if (slices.size() < 2) return std::nullopt;
  auto excess = [&](std::int64_t a) { return a > cap ? a - cap : 0; };
  std::int64_t violation = 0;
  for (int d = 0; d < m; ++d) violation += excess(above[d]);

  Rng rng = derive_stream(seed ^ 0x5a17u, static_cast<std::uint64_t>(c));
  const int ns = static_cast<int>(slices.size());
  for (std::uint64_t step = 0; step < steps && violation > 0; ++step) {
    const int a = uniform_int(rng, 0, ns - 1);
    int b = uniform_int(rng, 0, ns - 2);
    if (b >= a) ++b;
    const int p = slices[a], q = slices[b];
    const int i = uniform_int(rng, 0, m - 1), i2 = uniform_int(rng, 0, m - 1);
    if (i == i2 || i == p || i == q || i2 == p || i2 == q) continue;
    const int d = uniform_int(rng, 0, m - 1), d2 = uniform_int(rng, 0, m - 1);
    if (d == d2 || d == c || d2 == c) continue;
    if (at(p, i, d2) == 0 || at(p, i2, d) == 0 || at(q, i, d) == 0 || at(q, i2, d2) == 0) continue;
    const int shift = (i < p) - (i2 < p) - (i < q) + (i2 < q);
    if (shift == 0) continue;
    const std::int64_t nd = above[d] + shift, nd2 = above[d2] - shift;
    const std::int64_t dv = excess(nd) + excess(nd2) - excess(above[d]) - excess(above[d2]);
    const std::int64_t ds = nd * nd + nd2 * nd2 - above[d] * above[d] - above[d2] * above[d2];
    if (!(1000 * dv + ds <= 0 || uniform01(rng) < 0.001)) continue;
    ++at(p, i, d), --at(p, i, d2), --at(p, i2, d), ++at(p, i2, d2);
    --at(q, i, d), ++at(q, i, d2), ++at(q, i2, d), --at(q, i2, d2);
    above[d] = nd;
    above[d2] = nd2;
    violation += dv;
  }
  if (violation > 0) return std::nullopt;
  Election e(m);
  for (int p : slices) {
    IntMatrix slice = IntMatrix::Zero(m, m);
    slice(p, c) = x(p, c);
    for (int i = 0; i < m; ++i)
      for (int d = 0; d < m; ++d)
        if (i != p && d != c) slice(i, d) = at(p, i, d);
    const Election part = realize_any(PositionMatrix(slice));
    for (const Vote& v : part.votes()) e.add(v);
  }
  return e;
}

// Integer program over Z with exact LP relaxations: row sums, rival sums and
// cell sums as equalities, one capped row per rival with a slack. Integral Z
// is exactly a realization with c winning, so depth-first branching on
// fractional entries decides the question.
class ZProgram {
public:
  enum class Outcome { infeasible, found, limit };

  ZProgram(const PositionMatrix& x, int c) : x_(x), c_(c), z_(x, c) {
    const int m = x.m();
    for (int p = 0; p < m; ++p) {
      const std::int64_t s = x(p, c);
      if (s == 0) continue;
      for (int i = 0; i < m; ++i) {
        if (i == p) continue;
        Row row{{}, s};
        for (int d = 0; d < m; ++d)
          if (int k = z_.at(p, i, d); k >= 0) row.cols.push_back(k);
        rows_.push_back(row);
      }
      for (int d = 0; d < m; ++d) {
        if (d == c) continue;
        Row row{{}, s};
        for (int i = 0; i < m; ++i)
          if (int k = z_.at(p, i, d); k >= 0) row.cols.push_back(k);
        rows_.push_back(row);
      }
    }
    for (int i = 0; i < m; ++i)
      for (int d = 0; d < m; ++d) {
        if (d == c || x(i, d) == 0) continue;
        Row row{{}, x(i, d)};
        for (int p = 0; p < m; ++p)
          if (int k = z_.at(p, i, d); k >= 0) row.cols.push_back(k);
        rows_.push_back(row);
      }
    for (int d = 0; d < m; ++d) {
      if (d == c) continue;
      Row row{{}, loss_cap(x.n())};
      for (int p = 0; p < m; ++p)
        for (int i = 0; i < p; ++i)
          if (int k = z_.at(p, i, d); k >= 0) row.cols.push_back(k);
      capRows_.push_back(row);
    }
  }

  Outcome solve(std::uint64_t nodeLimit) {
    limit_ = nodeLimit;
    const Eigen::Index r = static_cast<Eigen::Index>(rows_.size() + capRows_.size());
    RationalLinearSystem sys(r, z_.cols + static_cast<int>(capRows_.size()));
    Eigen::Index k = 0;
    for (const Row& row : rows_) {
      for (int col : row.cols) sys.A(k, col) = 1;
      sys.b(k++) = row.rhs;
    }
    int slack = z_.cols;
    for (const Row& row : capRows_) {
      for (int col : row.cols) sys.A(k, col) = 1;
      sys.A(k, slack++) = 1;
      sys.b(k++) = row.rhs;
    }
    FeasibilityTableau root(sys);
    try {
      return branch(root) ? Outcome::found : Outcome::infeasible;
    } catch (const Stop&) {
      return Outcome::limit;
    }
  }

  std::uint64_t nodes() const { return nodes_; }
  std::optional<Election>& witness() { return witness_; }

private:
  struct Row {
    std::vector<int> cols;
    std::int64_t rhs;
  };
  struct Stop {};

  // Depth first; the child nearer the fractional value goes first.
  bool branch(FeasibilityTableau& t) {
    if (limit_ && nodes_ >= limit_) throw Stop{};
    ++nodes_;
    if (!t.solve()) return false;
    const RatVector y = t.solution();
    int pick = -1;
    Rational pickDist;
    for (int k = 0; k < z_.cols; ++k) {
      const Rational& v = y(k);
      if (denominator(v) == 1) continue;
      Rational frac = v - Rational(BigInt(numerator(v) / denominator(v)));
      Rational dist = frac > Rational(1, 2) ? Rational(frac - Rational(1, 2)) : Rational(Rational(1, 2) - frac);
      if (pick < 0 || dist < pickDist) {
        pick = k;
        pickDist = dist;
      }
    }
    if (pick < 0) {
      witness_ = slices_to_election(x_, c_, z_, y);
      return witness_.has_value();
    }
    const Rational& v = y(pick);
    const auto fl = static_cast<std::int64_t>(BigInt(numerator(v) / denominator(v)));
    const bool upFirst = v - Rational(fl) > Rational(1, 2);
    for (int side = 0; side < 2; ++side) {
      const bool up = (side == 0) == upFirst;
      FeasibilityTableau child = t;
      child.add_row({{pick, Rational(1)}}, up ? FeasibilityTableau::Sense::ge : FeasibilityTableau::Sense::le,
                    Rational(up ? fl + 1 : fl));
      if (branch(child)) return true;
    }
    return false;
  }

  const PositionMatrix& x_;
  int c_;
  ZIndex z_;
  std::vector<Row> rows_, capRows_;
  std::optional<Election> witness_;
  std::uint64_t nodes_ = 0, limit_ = 0;
};

class Backtracker {
public:
  Backtracker(const PositionMatrix& x, int c, std::uint64_t limit)
      : m_(x.m()), n_(static_cast<int>(x.n())), c_(c), cap_(loss_cap(x.n())), limit_(limit),
        r_(x.entries()), y_(placement_vector(x, c)), above_(m_, 0) {
    for (int k = 0; k < n_; ++k) r_(y_[k], c_) -= 1;
    votes_.reserve(n_);  // tightWith points into votes_
  }

  CwSearchResult run() {
    CwSearchResult res;
    bool ok = false;
    try {
      ok = vote(0);
      res.status = ok ? CwStatus::found : CwStatus::absent;
    } catch (const Stop&) {
      res.status = CwStatus::unknown;
    }
    if (ok) res.witness = Election(m_, votes_);
    res.decidedBy = "backtracking";
    res.nodes = nodes_;
    return res;
  }

private:
  struct Stop {};

  // Fewest further wins over c that rival d must collect: its remaining
  // cells can sit below c only in votes placing c strictly higher.
  bool budgets_hold(int k) const {
    for (int d = 0; d < m_; ++d) {
      if (d == c_) continue;
      std::int64_t remaining = 0, freeSlots = 0, below = 0;
      int next = k;
      for (int i = 0; i < m_; ++i) {
        while (next < n_ && y_[next] < i) {
          ++freeSlots;
          ++next;
        }
        const std::int64_t here = r_(i, d);
        remaining += here;
        const std::int64_t take = std::min(here, freeSlots);
        below += take;
        freeSlots -= take;
      }
      if (above_[d] + remaining - below > cap_) return false;
    }
    return true;
  }

  bool completable(int pos, std::uint64_t used, int cpos) const {
    Support s;
    std::vector<int> rowsLeft, freeCands;
    for (int i = pos; i < m_; ++i)
      if (i != cpos) rowsLeft.push_back(i);
    for (int d = 0; d < m_; ++d)
      if (d != c_ && !((used >> d) & 1)) freeCands.push_back(d);
    s.m = static_cast<int>(rowsLeft.size());
    s.rows.assign(s.m, 0);
    for (int a = 0; a < s.m; ++a)
      for (int b = 0; b < static_cast<int>(freeCands.size()); ++b)
        if (r_(rowsLeft[a], freeCands[b]) > 0) s.rows[a] |= std::uint64_t{1} << b;
    return has_perfect_matching(s);
  }

  bool vote(int k) {
    if (k == n_) return true;
    if (!budgets_hold(k)) return false;
    current_.assign(m_, -1);
    current_[y_[k]] = c_;
    const Vote* prev = (k > 0 && y_[k - 1] == y_[k]) ? &votes_[k - 1] : nullptr;
    return fill(k, 0, 0, prev);
  }

  bool fill(int k, int pos, std::uint64_t used, const Vote* tightWith) {
    if (limit_ && ++nodes_ > limit_) throw Stop{};
    if (!limit_) ++nodes_;
    const int cpos = y_[k];
    if (pos == m_) {
      votes_.push_back(current_);
      if (vote(k + 1)) return true;
      current_ = votes_.back();
      votes_.pop_back();
      return false;
    }
    if (pos == cpos) {
      // c is fixed here; the lexicographic comparison continues past it.
      return fill(k, pos + 1, used, tightWith);
    }
    if (!completable(pos, used, cpos)) return false;
    const bool isAbove = pos < cpos;
    // Above c: rivals with the most spare wins first; below c: the most constrained first.
    int order[64];
    int cnt = 0;
    for (int d = 0; d < m_; ++d)
      if (d != c_ && !((used >> d) & 1) && r_(pos, d) > 0 && (!tightWith || d >= (*tightWith)[pos]))
        order[cnt++] = d;
    std::sort(order, order + cnt, [&](int a, int b) {
      if (above_[a] != above_[b]) return isAbove ? above_[a] < above_[b] : above_[a] > above_[b];
      return a < b;
    });
    for (int t = 0; t < cnt; ++t) {
      const int d = order[t];
      if (isAbove && above_[d] + 1 > cap_) continue;
      --r_(pos, d);
      if (isAbove) ++above_[d];
      current_[pos] = d;
      const Vote* next = (tightWith && d == (*tightWith)[pos]) ? tightWith : nullptr;
      const bool ok = fill(k, pos + 1, used | (std::uint64_t{1} << d), next);
      if (ok) return true;
      current_[pos] = -1;
      if (isAbove) --above_[d];
      ++r_(pos, d);
    }
    return false;
  }

  int m_, n_, c_;
  std::int64_t cap_;
  std::uint64_t limit_;
  IntMatrix r_;
  std::vector<int> y_;
  std::vector<std::int64_t> above_;
  std::vector<Vote> votes_;
  Vote current_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

CwSearchResult backtrack_realization_with_cw(const PositionMatrix& x, int c, std::uint64_t nodeLimit) {
  require_candidate(x, c);
  if (x.m() > 8 || x.n() > 80) throw BoundExceeded("Condorcet realization search supports m <= 8, n <= 80");
  if (x.n() == 0) return {CwStatus::absent, std::nullopt, "backtracking", 0};
  Backtracker bt(x, c, nodeLimit);
  return bt.run();
}

CwSearchResult search_realization_with_cw(const PositionMatrix& x, int c, const CwSearchOptions& opt) {
  require_candidate(x, c);
  if (x.m() > 8 || x.n() > 80) throw BoundExceeded("Condorcet realization search supports m <= 8, n <= 80");
  CwSearchResult res;
  if (x.n() == 0 || !necessary_condition(x, c)) {
    res.status = CwStatus::absent;
    res.decidedBy = "condition";
    return res;
  }
  if (x.m() == 1) {
    res.status = CwStatus::found;
    res.witness = realize_any(x);
    res.decidedBy = "condition";
    return res;
  }
  if (opt.useLocalSearch) {
    if (auto e = local_search(x, c, opt.localSearchSteps, opt.seed); e && verify_witness(x, c, *e)) {
      res.status = CwStatus::found;
      res.witness = std::move(e);
      res.decidedBy = "local-search";
      return res;
    }
  }
  if (opt.useLocalSearch) {
    if (auto e = aggregated_search(x, c, opt.localSearchSteps, opt.seed); e && verify_witness(x, c, *e)) {
      res.status = CwStatus::found;
      res.witness = std::move(e);
      res.decidedBy = "aggregated-search";
      return res;
    }
  }
  if (opt.useLpCertificate) {
    ZProgram program(x, c);
    const ZProgram::Outcome out = program.solve(opt.branchNodeLimit);
    res.nodes = program.nodes();
    if (out == ZProgram::Outcome::infeasible) {
      res.status = CwStatus::absent;
      res.decidedBy = program.nodes() == 1 ? "lp" : "branch-and-bound";
      return res;
    }
    if (out == ZProgram::Outcome::found) {
      if (!verify_witness(x, c, *program.witness())) throw Error("integer program produced an invalid witness");
      res.status = CwStatus::found;
      res.witness = std::move(program.witness());
      res.decidedBy = program.nodes() == 1 ? "lp-integral" : "branch-and-bound";
      return res;
    }
  }
  res = backtrack_realization_with_cw(x, c, opt.nodeLimit);
  if (res.witness && !verify_witness(x, c, *res.witness)) throw Error("backtracking produced an invalid witness");
  return res;
}

std::optional<Election> exists_realization_with_cw(const PositionMatrix& x, int c,
                                                   const CwSearchOptions& opt) {
  CwSearchResult r = search_realization_with_cw(x, c, opt);
  if (r.status == CwStatus::unknown)
    throw BoundExceeded("Condorcet realization search hit its node limit");
  return r.witness;
}

std::optional<Election> heuristic_witness(const PositionMatrix& x, int c, std::uint64_t steps,
                                          std::uint64_t seed) {
  require_candidate(x, c);
  if (x.n() == 0) return std::nullopt;
  for (auto* search : {&local_search, &aggregated_search})
    if (auto e = search(x, c, steps, seed); e && verify_witness(x, c, *e)) return e;
  return std::nullopt;
}

PossibleWinners count_possible_cw(const PositionMatrix& x, const CwSearchOptions& opt) {
  PossibleWinners out;
  for (int c = 0; c < x.m(); ++c) {
    CwSearchResult r = search_realization_with_cw(x, c, opt);
    if (r.status == CwStatus::found) out.candidates.push_back(c);
    if (r.status == CwStatus::unknown) out.undecided.push_back(c);
  }
  out.count = static_cast<int>(out.candidates.size());
  return out;
}

GapSummary condition_gap_report(const std::vector<PositionMatrix>& dataset, const CwSearchOptions& opt) {
  GapSummary s;
  for (std::size_t k = 0; k < dataset.size(); ++k)
    for (int c = 0; c < dataset[k].m(); ++c) {
      GapRow row{k, c, necessary_condition(dataset[k], c), CwStatus::unknown};
      row.exact = search_realization_with_cw(dataset[k], c, opt).status;
      if (!row.condition && opt.soundnessProbeSteps > 0 &&
          heuristic_witness(dataset[k], c, opt.soundnessProbeSteps, opt.seed))
        row.exact = CwStatus::found;
      if (row.condition && row.exact == CwStatus::absent) ++s.gapCases;
      if (!row.condition && row.exact == CwStatus::found) ++s.soundnessViolations;
      if (row.exact == CwStatus::unknown) ++s.undecided;
      s.rows.push_back(row);
    }
  return s;
}

std::string to_string(CwStatus s) {
  switch (s) {
    case CwStatus::found: return "yes";
    case CwStatus::absent: return "no";
    case CwStatus::unknown: return "unknown";
  }
  return "unknown";
}

}  // namespace posmat
