#include "posmat/ratlp.hpp"

namespace posmat {

FeasibilityTableau::FeasibilityTableau(const RationalLinearSystem& sys) : structural_(sys.A.cols()) {
  const Eigen::Index r = sys.A.rows(), c = sys.A.cols();
  if (sys.b.size() != r) throw InvalidInput("right-hand side length differs from row count");
  objective_.assign(c + 1, Rational(0));
  rows_.assign(r, std::vector<Rational>(c + 1, Rational(0)));
  basis_.assign(r, -1);
  for (Eigen::Index i = 0; i < r; ++i) {
    const bool flip = sys.b(i) < 0;
    auto& row = rows_[i];
    for (Eigen::Index j = 0; j < c; ++j)
      if (sys.A(i, j) != 0) row[j] = flip ? Rational(-sys.A(i, j)) : sys.A(i, j);
    row[c] = flip ? Rational(-sys.b(i)) : sys.b(i);
    for (Eigen::Index j = 0; j <= c; ++j)
      if (row[j] != 0) objective_[j] -= row[j];
  }
}

void FeasibilityTableau::add_row(const std::vector<std::pair<Eigen::Index, Rational>>& coefs, Sense sense,
                                 const Rational& rhs) {
  const Eigen::Index width = static_cast<Eigen::Index>(objective_.size()) - 1;
  std::vector<Rational> row(width + 1, Rational(0));
  for (const auto& [j, a] : coefs) {
    if (j < 0 || j >= structural_) throw InvalidInput("row refers to a non-structural column");
    row[j] += a;
  }
  row[width] = rhs;
  // Express the row in terms of the nonbasic columns.
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Eigen::Index b = basis_[i];
    if (b < 0 || row[b] == 0) continue;
    const Rational f = row[b];
    for (Eigen::Index j = 0; j <= width; ++j)
      if (rows_[i][j] != 0) row[j] -= f * rows_[i][j];
  }
  Eigen::Index slackCol = -1;
  if (sense != Sense::eq) {
    slackCol = width;
    for (auto& existing : rows_) existing.insert(existing.end() - 1, Rational(0));
    objective_.insert(objective_.end() - 1, Rational(0));
    row.insert(row.end() - 1, Rational(sense == Sense::le ? 1 : -1));
  }
  const std::size_t last = row.size() - 1;
  if (slackCol >= 0 && row[slackCol] * row[last] >= 0) {
    // The slack can take the row as it is.
    const Rational s = row[slackCol];
    for (auto& v : row) v /= s;
    rows_.push_back(std::move(row));
    basis_.push_back(slackCol);
    return;
  }
  if (row[last] < 0)
    for (auto& v : row) v = -v;
  for (std::size_t j = 0; j <= last; ++j)
    if (row[j] != 0) objective_[j] -= row[j];
  rows_.push_back(std::move(row));
  basis_.push_back(-1);
}

void FeasibilityTableau::pivot(Eigen::Index leave, Eigen::Index enter) {
  auto& prow = rows_[leave];
  const Rational piv = prow[enter];
  std::vector<std::size_t> nz;
  for (std::size_t j = 0; j < prow.size(); ++j)
    if (prow[j] != 0) {
      prow[j] /= piv;
      nz.push_back(j);
    }
  auto eliminate = [&](std::vector<Rational>& row) {
    if (row[enter] == 0) return;
    const Rational f = row[enter];
    for (std::size_t j : nz) row[j] -= f * prow[j];
  };
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (static_cast<Eigen::Index>(i) != leave) eliminate(rows_[i]);
  eliminate(objective_);
  basis_[leave] = enter;
  ++pivots_;
}

bool FeasibilityTableau::solve() {
  constexpr int kStallLimit = 50;
  int stalled = 0;
  const Eigen::Index width = static_cast<Eigen::Index>(objective_.size()) - 1;
  std::vector<char> basic(width, 0);
  for (Eigen::Index b : basis_)
    if (b >= 0) basic[b] = 1;
  for (;;) {
    // Dantzig pricing while the objective improves; Bland's rule after a run
    // of degenerate pivots, which rules out cycling.
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < width; ++j) {
      if (basic[j] || objective_[j] >= 0) continue;
      if (enter < 0 || (stalled < kStallLimit && objective_[j] < objective_[enter])) enter = j;
      if (stalled >= kStallLimit) break;
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    Rational best;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rows_[i][enter] <= 0) continue;
      Rational ratio = rows_[i][width] / rows_[i][enter];
      // Ties prefer basic artificials, then the lowest basic column.
      const bool better = leave < 0 || ratio < best ||
                          (ratio == best && (basis_[i] < 0 ? basis_[leave] >= 0 || i < std::size_t(leave)
                                                           : basis_[leave] >= 0 && basis_[i] < basis_[leave]));
      if (better) {
        leave = static_cast<Eigen::Index>(i);
        best = std::move(ratio);
      }
    }
    if (leave < 0) break;  // unbounded direction cannot occur in phase 1
    stalled = best == 0 ? stalled + 1 : 0;
    if (basis_[leave] >= 0) basic[basis_[leave]] = 0;
    pivot(leave, enter);
    basic[enter] = 1;
  }
  return objective_[width] == 0;
}

RatVector FeasibilityTableau::solution() const {
  const std::size_t width = objective_.size() - 1;
  RatVector y = RatVector::Zero(structural_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (basis_[i] >= 0 && basis_[i] < structural_) y(basis_[i]) = rows_[i][width];
  return y;
}

std::optional<RatVector> lp_feasible(const RationalLinearSystem& sys, LpStats* stats) {
  FeasibilityTableau t(sys);
  const bool ok = t.solve();
  if (stats) stats->pivots = t.pivots();
  if (!ok) return std::nullopt;
  return t.solution();
}

std::pair<std::vector<BigInt>, BigInt> integral_scale(const std::vector<Rational>& y) {
  BigInt n = 1;
  for (const auto& q : y) {
    if (q < 0) throw InvalidInput("integral_scale needs a nonnegative vector");
    BigInt d = denominator(q);
    n = n / gcd(n, d) * d;
  }
  std::vector<BigInt> out;
  out.reserve(y.size());
  for (const auto& q : y) out.push_back(numerator(q) * (n / denominator(q)));
  return {std::move(out), n};
}

std::pair<std::vector<BigInt>, BigInt> integral_scale(const RatVector& y) {
  return integral_scale(std::vector<Rational>(y.data(), y.data() + y.size()));
}

}  // namespace posmat
