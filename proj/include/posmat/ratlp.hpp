#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "posmat/types.hpp"

namespace posmat {

// Find y >= 0 with A y = b, over exact rationals.
struct RationalLinearSystem {
  RatMatrix A;
  RatVector b;

  RationalLinearSystem() = default;
  RationalLinearSystem(Eigen::Index rows, Eigen::Index cols)
      : A(RatMatrix::Zero(rows, cols)), b(RatVector::Zero(rows)) {}
};

struct LpStats {
  std::size_t pivots = 0;
};

// Phase-1 simplex (Dantzig pricing, Bland's rule after a degenerate stretch).
// Returns a basic feasible solution or nothing when the system is infeasible.
std::optional<RatVector> lp_feasible(const RationalLinearSystem& sys, LpStats* stats = nullptr);

// Phase-1 tableau that accepts further rows after solving, re-optimizing from
// the current basis. Copies are cheap snapshots for depth-first branching.
// Artificial columns are never stored: one is basic in a row until it leaves,
// and a leaving artificial is never needed again.
class FeasibilityTableau {
public:
  enum class Sense { le, ge, eq };

  explicit FeasibilityTableau(const RationalLinearSystem& sys);

  // Adds sum coef_j y_j (sense) rhs over the structural columns; inequalities
  // get a fresh slack column. Call solve() afterwards.
  void add_row(const std::vector<std::pair<Eigen::Index, Rational>>& coefs, Sense sense, const Rational& rhs);

  bool solve();
  // Structural part of the current basic solution; valid after solve() returned true.
  RatVector solution() const;
  std::size_t pivots() const { return pivots_; }

private:
  void pivot(Eigen::Index row, Eigen::Index col);

  Eigen::Index structural_;
  std::vector<std::vector<Rational>> rows_;  // coefficients per column, rhs last
  std::vector<Rational> objective_;          // reduced costs of the phase-1 objective, value last
  std::vector<Eigen::Index> basis_;          // column per row, -1 while the artificial is basic
  std::size_t pivots_ = 0;
};

// n = lcm of denominators; returns (n * y, n).
std::pair<std::vector<BigInt>, BigInt> integral_scale(const std::vector<Rational>& y);
std::pair<std::vector<BigInt>, BigInt> integral_scale(const RatVector& y);

}  // namespace posmat
