#include "posmat/core.hpp"

#include <algorithm>
#include <numeric>

namespace posmat {

bool is_permutation(const std::vector<int>& p, int m) {
  if (static_cast<int>(p.size()) != m) return false;
  std::vector<char> seen(m, 0);
  for (int c : p) {
    if (c < 0 || c >= m || seen[c]) return false;
    seen[c] = 1;
  }
  return true;
}

void require_permutation(const std::vector<int>& p, int m, const char* what) {
  if (!is_permutation(p, m))
    throw InvalidInput(std::string(what) + " is not a permutation of 0.." + std::to_string(m - 1));
}

Vote identity_vote(int m) {
  Vote v(m);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

Vote inverse(const Vote& v) {
  Vote pos(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) pos[v[i]] = static_cast<int>(i);
  return pos;
}

Election::Election(int m, std::vector<Vote> votes) : m_(m) {
  if (m < 1) throw InvalidInput("an election needs at least one candidate");
  votes_.reserve(votes.size());
  for (auto& v : votes) add(std::move(v));
}

void Election::add(Vote v) {
  require_permutation(v, m_, "vote");
  votes_.push_back(std::move(v));
}

Election Election::canonical() const {
  Election e = *this;
  std::sort(e.votes_.begin(), e.votes_.end());
  return e;
}

bool operator==(const Election& a, const Election& b) {
  if (a.m_ != b.m_ || a.votes_.size() != b.votes_.size()) return false;
  return a.canonical().votes_ == b.canonical().votes_;
}

PositionMatrix::PositionMatrix(IntMatrix x) : x_(std::move(x)) {
  if (x_.rows() != x_.cols() || x_.rows() < 1)
    throw InvalidInput("position matrix must be square and nonempty");
  if ((x_.array() < 0).any()) throw InvalidInput("position matrix has a negative entry");
  n_ = x_.row(0).sum();
  for (Eigen::Index i = 0; i < x_.rows(); ++i) {
    if (x_.row(i).sum() != n_) throw InvalidInput("position matrix row sums differ");
    if (x_.col(i).sum() != n_) throw InvalidInput("position matrix column sums differ");
  }
}

FrequencyMatrix::FrequencyMatrix(RatMatrix y) : y_(std::move(y)) {
  if (y_.rows() != y_.cols() || y_.rows() < 1)
    throw InvalidInput("frequency matrix must be square and nonempty");
  const Rational one(1);
  for (Eigen::Index i = 0; i < y_.rows(); ++i) {
    Rational r(0), c(0);
    for (Eigen::Index j = 0; j < y_.cols(); ++j) {
      if (y_(i, j) < 0) throw InvalidInput("frequency matrix has a negative entry");
      r += y_(i, j);
      c += y_(j, i);
    }
    if (r != one || c != one) throw InvalidInput("frequency matrix is not bistochastic");
  }
}

FrequencyMatrix::FrequencyMatrix(const PositionMatrix& x) {
  if (x.n() == 0) throw InvalidInput("frequency matrix of an empty election");
  const int m = x.m();
  y_.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) y_(i, j) = Rational(x(i, j), x.n());
}

SocietalAxis::SocietalAxis(std::vector<int> o) : order(std::move(o)) {
  require_permutation(order, static_cast<int>(order.size()), "axis");
}

bool is_power_of_two(int m) { return m >= 1 && (m & (m - 1)) == 0; }

GSTree::GSTree(TreeShape s, std::vector<int> leaves) : shape(s), leafOrder(std::move(leaves)) {
  require_permutation(leafOrder, static_cast<int>(leafOrder.size()), "tree leaf order");
  if (shape == TreeShape::balanced && !is_power_of_two(m()))
    throw InvalidInput("balanced tree needs a power-of-two number of candidates");
}

IntMatrix permutation_matrix(const Vote& v) {
  const int m = static_cast<int>(v.size());
  IntMatrix p = IntMatrix::Zero(m, m);
  for (int i = 0; i < m; ++i) p(i, v[i]) = 1;
  return p;
}

PositionMatrix position_matrix_of(const Election& e) {
  return position_matrix_of(e, identity_vote(e.m()));
}

PositionMatrix position_matrix_of(const Election& e, const std::vector<int>& columnOrder) {
  const int m = e.m();
  require_permutation(columnOrder, m, "column order");
  Vote col = inverse(columnOrder);
  IntMatrix x = IntMatrix::Zero(m, m);
  for (const Vote& v : e.votes())
    for (int i = 0; i < m; ++i) ++x(i, col[v[i]]);
  return PositionMatrix(std::move(x));
}

FrequencyMatrix frequency_matrix_of(const Election& e) {
  return frequency_matrix_of(e, identity_vote(e.m()));
}

FrequencyMatrix frequency_matrix_of(const Election& e, const std::vector<int>& columnOrder) {
  if (e.n() == 0) throw InvalidInput("frequency matrix of an empty election");
  return FrequencyMatrix(position_matrix_of(e, columnOrder));
}

PositionMatrix permute_columns(const PositionMatrix& x, const std::vector<int>& order) {
  require_permutation(order, x.m(), "column order");
  IntMatrix y(x.m(), x.m());
  for (int j = 0; j < x.m(); ++j) y.col(j) = x.entries().col(order[j]);
  return PositionMatrix(std::move(y));
}

FrequencyMatrix permute_columns(const FrequencyMatrix& x, const std::vector<int>& order) {
  require_permutation(order, x.m(), "column order");
  RatMatrix y(x.m(), x.m());
  for (int j = 0; j < x.m(); ++j) y.col(j) = x.entries().col(order[j]);
  return FrequencyMatrix(std::move(y));
}

int swap_distance(const Vote& u, const Vote& v) {
  if (u.size() != v.size()) throw InvalidInput("swap distance of votes with different lengths");
  Vote pu = inverse(u);
  // Count inversions of u's positions read along v.
  int d = 0;
  const int m = static_cast<int>(v.size());
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (pu[v[a]] > pu[v[b]]) ++d;
  return d;
}

IntMatrix pairwise_tally(const Election& e) {
  const int m = e.m();
  IntMatrix w = IntMatrix::Zero(m, m);
  for (const Vote& v : e.votes())
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) ++w(v[a], v[b]);
  return w;
}

std::optional<int> condorcet_winner(const Election& e) {
  if (e.n() == 0) throw InvalidInput("Condorcet winner of an empty election");
  IntMatrix w = pairwise_tally(e);
  for (int c = 0; c < e.m(); ++c) {
    bool wins = true;
    for (int d = 0; d < e.m() && wins; ++d)
      if (d != c && 2 * w(c, d) <= e.n()) wins = false;
    if (wins) return c;
  }
  return std::nullopt;
}

bool is_single_peaked_wrt(const Vote& v, const SocietalAxis& axis) {
  const int m = static_cast<int>(v.size());
  if (axis.m() != m) throw InvalidInput("vote and axis sizes differ");
  Vote where = inverse(axis.order);
  int lo = m, hi = -1;
  for (int l = 0; l < m; ++l) {
    lo = std::min(lo, where[v[l]]);
    hi = std::max(hi, where[v[l]]);
    if (hi - lo != l) return false;
  }
  return true;
}

namespace {

// Leaves t.leafOrder[lo, hi) must occupy vote positions [p, p + hi - lo).
bool frontier_check(const GSTree& t, const Vote& pos, int lo, int hi, int p) {
  const int size = hi - lo;
  if (size == 1) return pos[t.leafOrder[lo]] == p;
  const int mid = t.shape == TreeShape::caterpillar ? lo + 1 : lo + size / 2;
  const int left = mid - lo, right = hi - mid;
  auto inside = [&](int a, int b, int from) {
    for (int k = a; k < b; ++k) {
      int q = pos[t.leafOrder[k]];
      if (q < from || q >= from + (b - a)) return false;
    }
    return true;
  };
  if (inside(lo, mid, p))
    return inside(mid, hi, p + left) && frontier_check(t, pos, lo, mid, p) &&
           frontier_check(t, pos, mid, hi, p + left);
  if (inside(lo, mid, p + right))
    return inside(mid, hi, p) && frontier_check(t, pos, mid, hi, p) &&
           frontier_check(t, pos, lo, mid, p + right);
  return false;
}

}  // namespace

bool is_compatible_with_tree(const Vote& v, const GSTree& t) {
  if (t.m() != static_cast<int>(v.size())) throw InvalidInput("vote and tree sizes differ");
  if (t.shape == TreeShape::balanced && !is_power_of_two(t.m()))
    throw InvalidInput("balanced tree needs a power-of-two number of candidates");
  return frontier_check(t, inverse(v), 0, t.m(), 0);
}

bool is_single_crossing(const Election& e) {
  if (e.n() <= 1) return true;
  const int m = e.m();
  std::vector<Vote> pos;
  pos.reserve(e.n());
  for (const Vote& v : e.votes()) pos.push_back(inverse(v));
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      int changes = 0;
      for (int k = 1; k < e.n(); ++k)
        if ((pos[k][a] < pos[k][b]) != (pos[k - 1][a] < pos[k - 1][b])) ++changes;
      if (changes > 1) return false;
    }
  return true;
}

}  // namespace posmat
