#pragma once

#include <vector>

#include "posmat/types.hpp"

namespace posmat {

template <typename Scalar>
struct Assignment {
  Scalar cost;
  std::vector<int> colForRow;
};

// Minimum-cost perfect assignment on a square cost grid (Hungarian method with
// potentials, O(m^3)). Works for any exact or floating ordered field.
template <typename Scalar>
Assignment<Scalar> solve_assignment(const Matrix<Scalar>& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != a.rows()) throw InvalidInput("assignment needs a square cost grid");
  if (n == 0) return {Scalar(0), {}};
  // Any feasible alternating path costs less than this.
  Scalar inf(1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inf += a(i, j) < 0 ? Scalar(-a(i, j)) : a(i, j);
  inf = inf * 2;

  std::vector<Scalar> u(n + 1, Scalar(0)), v(n + 1, Scalar(0)), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      Scalar delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        Scalar cur = a(i0 - 1, j - 1) - u[i0] - v[j];
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
  }
  Assignment<Scalar> out{Scalar(0), std::vector<int>(n)};
  for (int j = 1; j <= n; ++j) out.colForRow[p[j] - 1] = j - 1;
  for (int i = 0; i < n; ++i) out.cost += a(i, out.colForRow[i]);
  return out;
}

}  // namespace posmat
