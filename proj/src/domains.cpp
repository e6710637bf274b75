#include "posmat/domains.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace posmat {

BigInt WeightedVotes::total() const {
  BigInt t = 0;
  for (auto& [v, k] : votes) t += k;
  return t;
}

FrequencyMatrix WeightedVotes::frequency() const {
  BigInt n = total();
  if (n == 0) throw InvalidInput("empty witness");
  RatMatrix y = RatMatrix::Zero(m, m);
  for (auto& [v, k] : votes)
    for (int i = 0; i < m; ++i) y(i, v[i]) += Rational(k, n);
  return FrequencyMatrix(std::move(y));
}

Election WeightedVotes::expand(std::size_t maxVotes) const {
  if (total() > BigInt(maxVotes))
    throw BoundExceeded("witness has " + total().str() + " votes, above the limit of " +
                        std::to_string(maxVotes));
  Election e(m);
  for (auto& [v, k] : votes)
    for (BigInt c = 0; c < k; ++c) e.add(v);
  return e;
}

std::optional<RatVector> realizable_explicit(const FrequencyMatrix& x, const std::vector<Vote>& votes) {
  const int m = x.m();
  if (votes.empty()) throw InvalidInput("explicit domain has no votes");
  RationalLinearSystem sys(m * m, static_cast<Eigen::Index>(votes.size()));
  for (std::size_t k = 0; k < votes.size(); ++k) {
    require_permutation(votes[k], m, "domain vote");
    for (int i = 0; i < m; ++i) sys.A(i * m + votes[k][i], k) = 1;
  }
  for (int i = 0; i < m; ++i)
    for (int c = 0; c < m; ++c) sys.b(i * m + c) = x(i, c);
  return lp_feasible(sys);
}

std::optional<Election> realizable_explicit_integral(const PositionMatrix& x,
                                                     const std::vector<Vote>& votesIn) {
  const int m = x.m();
  if (x.n() > 12) throw BoundExceeded("integral explicit search supports n <= 12");
  std::vector<Vote> votes;
  for (const auto& v : votesIn) {
    require_permutation(v, m, "domain vote");
    if (std::find(votes.begin(), votes.end(), v) == votes.end()) votes.push_back(v);
  }
  std::sort(votes.begin(), votes.end());
  IntMatrix r = x.entries();
  std::vector<int> mult(votes.size(), 0);
  // Cells still coverable by votes[k..].
  std::vector<IntMatrix> cover(votes.size() + 1, IntMatrix::Zero(m, m));
  for (int k = static_cast<int>(votes.size()) - 1; k >= 0; --k) {
    cover[k] = cover[k + 1];
    for (int i = 0; i < m; ++i) cover[k](i, votes[k][i]) = 1;
  }
  std::function<bool(std::size_t, std::int64_t)> dfs = [&](std::size_t k, std::int64_t left) {
    if (left == 0) return true;
    if (k == votes.size()) return false;
    for (int i = 0; i < m; ++i)
      for (int c = 0; c < m; ++c)
        if (r(i, c) > 0 && !cover[k](i, c)) return false;
    std::int64_t most = left;
    for (int i = 0; i < m; ++i) most = std::min(most, r(i, votes[k][i]));
    for (std::int64_t t = most; t >= 0; --t) {
      for (int i = 0; i < m; ++i) r(i, votes[k][i]) -= t;
      mult[k] = static_cast<int>(t);
      if (dfs(k + 1, left - t)) return true;
      for (int i = 0; i < m; ++i) r(i, votes[k][i]) += t;
    }
    mult[k] = 0;
    return false;
  };
  if (!dfs(0, x.n())) return std::nullopt;
  Election e(m);
  for (std::size_t k = 0; k < votes.size(); ++k)
    for (int t = 0; t < mult[k]; ++t) e.add(votes[k]);
  return e;
}

RationalLinearSystem caterpillar_system(const FrequencyMatrix& x) {
  const int m = x.m();
  // Column (i-1)(m) + (j-1) is l_{i,j}; the same offset plus m^2 is r_{i,j}.
  auto lvar = [m](int i, int j) { return (i - 1) * m + (j - 1); };
  auto rvar = [m](int i, int j) { return m * m + (i - 1) * m + (j - 1); };
  auto in = [m](int i) { return i >= 1 && i <= m; };
  std::vector<std::vector<std::pair<int, int>>> rows;  // (column, coefficient)
  std::vector<Rational> rhs;
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) {
      rows.push_back({{lvar(i, j), 1}, {rvar(i, j), 1}});
      rhs.push_back(x(i - 1, j - 1));
    }
  for (int j = 1; j <= m - 1; ++j)
    for (int i = -m; i <= m; ++i) {
      std::vector<std::pair<int, int>> row;
      if (in(i - 1)) row.push_back({lvar(i - 1, j), 1});
      if (in(i + m - j)) row.push_back({rvar(i + m - j, j), 1});
      if (in(i)) row.push_back({lvar(i, j + 1), -1});
      if (in(i + m - j - 1)) row.push_back({rvar(i + m - j - 1, j + 1), -1});
      if (row.empty()) continue;  // every term lies outside the index range
      rows.push_back(std::move(row));
      rhs.push_back(0);
    }
  RationalLinearSystem sys(static_cast<Eigen::Index>(rows.size()), 2 * m * m);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (auto [col, coef] : rows[k]) sys.A(k, col) += coef;
    sys.b(k) = rhs[k];
  }
  return sys;
}

std::optional<CaterpillarFlowVars> caterpillar_flow(const FrequencyMatrix& x) {
  const int m = x.m();
  auto y = lp_feasible(caterpillar_system(x));
  if (!y) return std::nullopt;
  CaterpillarFlowVars v{RatMatrix(m, m), RatMatrix(m, m)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      v.l(i, j) = (*y)(i * m + j);
      v.r(i, j) = (*y)(m * m + i * m + j);
    }
  return v;
}

WeightedVotes decompose_caterpillar_flow(const CaterpillarFlowVars& vars) {
  const int m = static_cast<int>(vars.l.rows());
  std::vector<Rational> all;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      all.push_back(vars.l(i, j));
      all.push_back(vars.r(i, j));
    }
  auto [scaled, n] = integral_scale(all);
  // Capacities indexed by 1-based (i, j) as in the flow variables.
  std::vector<std::vector<BigInt>> L(m + 2, std::vector<BigInt>(m + 2, BigInt(0))), R = L;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      L[i + 1][j + 1] = scaled[2 * (i * m + j)];
      R[i + 1][j + 1] = scaled[2 * (i * m + j) + 1];
    }
  WeightedVotes out;
  out.m = m;
  BigInt remaining = n;
  if (m == 1) {
    out.votes.push_back({Vote{0}, n});
    return out;
  }
  while (remaining > 0) {
    // Node (i, j): candidates c_{j+1..m} still occupy positions i..i+m-j-1.
    int i = 1;
    Vote v(m, -1);
    std::vector<BigInt*> arcs;
    for (int j = 0; j <= m - 2; ++j) {
      BigInt& left = L[i][j + 1];
      const int bottom = i + m - j - 1;
      BigInt& right = R[bottom][j + 1];
      if (left > 0) {
        v[i - 1] = j;
        arcs.push_back(&left);
        ++i;
      } else if (right > 0) {
        v[bottom - 1] = j;
        arcs.push_back(&right);
      } else {
        throw Error("caterpillar flow violates conservation");
      }
    }
    v[i - 1] = m - 1;
    BigInt take = remaining;
    for (BigInt* a : arcs) take = std::min(take, *a);
    for (BigInt* a : arcs) *a -= take;
    remaining -= take;
    out.votes.push_back({std::move(v), take});
  }
  return out;
}

namespace {

WeightedVotes relabel(const WeightedVotes& w, const std::vector<int>& name) {
  WeightedVotes out;
  out.m = w.m;
  for (auto& [v, k] : w.votes) {
    Vote u(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) u[i] = name[v[i]];
    out.votes.push_back({std::move(u), k});
  }
  return out;
}

}  // namespace

std::optional<WeightedVotes> realizable_caterpillar(const FrequencyMatrix& x, const GSTree& tree) {
  if (tree.shape != TreeShape::caterpillar) throw InvalidInput("expected a caterpillar tree");
  if (tree.m() != x.m()) throw InvalidInput("tree and matrix sizes differ");
  auto vars = caterpillar_flow(permute_columns(x, tree.leafOrder));
  if (!vars) return std::nullopt;
  return relabel(decompose_caterpillar_flow(*vars), tree.leafOrder);
}

std::optional<WeightedVotes> realizable_single_peaked(const FrequencyMatrix& x,
                                                      const SocietalAxis& axis) {
  const int m = x.m();
  if (axis.m() != m) throw InvalidInput("axis and matrix sizes differ");
  // Transpose: rows become axis slots, columns become vote positions read
  // from the bottom, which is the caterpillar order of a single-peaked vote.
  RatMatrix c(m, m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) c(k, j) = x(m - 1 - j, axis.order[k]);
  auto vars = caterpillar_flow(FrequencyMatrix(std::move(c)));
  if (!vars) return std::nullopt;
  WeightedVotes cat = decompose_caterpillar_flow(*vars);
  WeightedVotes out;
  out.m = m;
  for (auto& [w, k] : cat.votes) {
    Vote v(m);
    for (int slot = 0; slot < m; ++slot) v[m - 1 - w[slot]] = axis.order[slot];
    out.votes.push_back({std::move(v), k});
  }
  return out;
}

bool realizable_balanced(const PositionMatrix& x) { return realizable_balanced<std::int64_t>(x.entries()); }
bool realizable_balanced(const FrequencyMatrix& x) { return realizable_balanced<Rational>(x.entries()); }

namespace {

// Realizes x (n votes) and returns the frontier order of the tree used.
bool balanced_build(const IntMatrix& x, std::int64_t n, Election& out, std::vector<int>& leaves) {
  const int m = static_cast<int>(x.rows());
  if (m == 1) {
    out = Election(1, std::vector<Vote>(n, Vote{0}));
    leaves = {0};
    return true;
  }
  std::vector<std::pair<int, int>> pairs;
  IntMatrix folded;
  if (!balanced_step<std::int64_t>(x, pairs, folded)) return false;
  Election inner;
  std::vector<int> innerLeaves;
  if (!balanced_build(folded, n, inner, innerLeaves)) return false;
  // first[k][i] = how many votes still need pairs[k].first on row 2i.
  const int h = m / 2;
  std::vector<std::vector<std::int64_t>> first(h, std::vector<std::int64_t>(h));
  for (int k = 0; k < h; ++k)
    for (int i = 0; i < h; ++i) first[k][i] = x(2 * i, pairs[k].first);
  Election e(m);
  for (const Vote& w : inner.votes()) {
    Vote v(m);
    for (int i = 0; i < h; ++i) {
      auto [a, b] = pairs[w[i]];
      if (first[w[i]][i] > 0) {
        --first[w[i]][i];
        v[2 * i] = a;
        v[2 * i + 1] = b;
      } else {
        v[2 * i] = b;
        v[2 * i + 1] = a;
      }
    }
    e.add(std::move(v));
  }
  out = std::move(e);
  leaves.clear();
  for (int k : innerLeaves) {
    leaves.push_back(pairs[k].first);
    leaves.push_back(pairs[k].second);
  }
  return true;
}

}  // namespace

std::optional<BalancedWitness> balanced_witness(const PositionMatrix& x) {
  if (!is_power_of_two(x.m())) return std::nullopt;
  Election e;
  std::vector<int> leaves;
  if (!balanced_build(x.entries(), x.n(), e, leaves)) return std::nullopt;
  return BalancedWitness{GSTree(TreeShape::balanced, leaves), std::move(e)};
}

std::optional<BalancedWitness> balanced_witness(const FrequencyMatrix& x) {
  const int m = x.m();
  std::vector<Rational> entries(x.entries().data(), x.entries().data() + m * m);
  auto [scaled, n] = integral_scale(entries);
  if (n > 1000000) throw BoundExceeded("balanced witness would need " + n.str() + " votes");
  IntMatrix p(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) p(i, j) = static_cast<std::int64_t>(scaled[j * m + i]);
  return balanced_witness(PositionMatrix(std::move(p)));
}

namespace {

// Rows with mass for candidate `cand` must be reachable when `cand` sits at
// slot `slot` of the structure (1-based positions `p` allowed iff ok(p)).
template <typename Allowed>
bool column_fits(const FrequencyMatrix& x, int cand, Allowed ok) {
  for (int p = 1; p <= x.m(); ++p)
    if (x(p - 1, cand) != 0 && !ok(p)) return false;
  return true;
}

// Depth-first generation of orders in lexicographic order, skipping
// candidates that cannot occupy the slot.
template <typename Fits, typename Visit>
bool for_each_order(int m, Fits fits, Visit visit) {
  Vote order;
  std::vector<char> used(m, 0);
  std::function<bool()> rec = [&]() -> bool {
    const int slot = static_cast<int>(order.size());
    if (slot == m) return visit(order);
    for (int c = 0; c < m; ++c) {
      if (used[c] || !fits(c, slot, order)) continue;
      used[c] = 1;
      order.push_back(c);
      bool stop = rec();
      order.pop_back();
      used[c] = 0;
      if (stop) return true;
    }
    return false;
  };
  return rec();
}

}  // namespace

std::optional<WitnessDescriptor> recognize_any(const FrequencyMatrix& x, Family family) {
  const int m = x.m();
  std::optional<WitnessDescriptor> found;
  std::size_t tried = 0;
  if (family == Family::gs_balanced) {
    auto w = balanced_witness(x);
    if (!w) return std::nullopt;
    WitnessDescriptor d{family, std::nullopt, w->tree, {}, 1};
    d.witness.m = m;
    std::map<Vote, BigInt> counts;
    for (const Vote& v : w->election.votes()) counts[v] += 1;
    for (auto& [v, k] : counts) d.witness.votes.push_back({v, k});
    return d;
  }
  if (m > 8) throw BoundExceeded("searching all axes or trees is limited to m <= 8");
  if (family == Family::sp) {
    auto fits = [&](int c, int slot, const Vote& order) {
      if (slot == m - 1 && m > 1 && order[0] > c) return false;  // keep axis < reverse
      return column_fits(x, c, [&](int p) { return p <= std::max(slot + 1, m - slot); });
    };
    for_each_order(m, fits, [&](const Vote& order) {
      ++tried;
      SocietalAxis axis(order);
      if (auto w = realizable_single_peaked(x, axis)) {
        found = WitnessDescriptor{family, axis, std::nullopt, std::move(*w), tried};
        return true;
      }
      return false;
    });
  } else {
    auto fits = [&](int c, int slot, const Vote& order) {
      if (slot == m - 1 && m > 1 && order[m - 2] > c) return false;  // last two leaves are siblings
      return column_fits(x, c, [&](int p) { return p <= slot + 1 || p >= m - slot; });
    };
    for_each_order(m, fits, [&](const Vote& order) {
      ++tried;
      GSTree tree(TreeShape::caterpillar, order);
      if (auto w = realizable_caterpillar(x, tree)) {
        found = WitnessDescriptor{family, std::nullopt, tree, std::move(*w), tried};
        return true;
      }
      return false;
    });
  }
  return found;
}

X3CFixture build_x3c_fixture(int universeSize, const std::vector<std::array<int, 3>>& sets) {
  if (universeSize < 3 || universeSize % 3 != 0)
    throw InvalidInput("X3C universe size must be a positive multiple of 3");
  const int k = universeSize / 3, m = 6 * k;
  for (const auto& s : sets) {
    std::set<int> distinct(s.begin(), s.end());
    if (distinct.size() != 3) throw InvalidInput("X3C sets must have three distinct elements");
    for (int u : s)
      if (u < 0 || u >= universeSize) throw InvalidInput("X3C set element out of range");
  }
  IntMatrix x = IntMatrix::Zero(m, m);
  x.diagonal().setConstant(k - 1);
  for (int t = 0; t < universeSize; ++t) {
    x(2 * t + 1, 2 * t) = 1;
    x(2 * t, 2 * t + 1) = 1;
  }
  DomainSpec d;
  d.kind = DomainSpec::Kind::explicit_votes;
  for (const auto& s : sets) {
    Vote v = identity_vote(m);
    for (int u : s) std::swap(v[2 * u], v[2 * u + 1]);
    d.votes.push_back(std::move(v));
  }
  Vote axis;
  for (int c = m - 2; c >= 0; c -= 2) axis.push_back(c);
  for (int c = 1; c < m; c += 2) axis.push_back(c);
  d.axis = SocietalAxis(axis);
  return {PositionMatrix(std::move(x)), std::move(d)};
}

bool votes_in_domain(const WeightedVotes& w, const DomainSpec& d) {
  for (auto& [v, k] : w.votes) {
    switch (d.kind) {
      case DomainSpec::Kind::explicit_votes:
        if (std::find(d.votes.begin(), d.votes.end(), v) == d.votes.end()) return false;
        break;
      case DomainSpec::Kind::single_peaked:
        if (!is_single_peaked_wrt(v, d.axis)) return false;
        break;
      case DomainSpec::Kind::gs_balanced:
      case DomainSpec::Kind::gs_caterpillar:
        if (!is_compatible_with_tree(v, d.tree)) return false;
        break;
    }
  }
  return true;
}

}  // namespace posmat
