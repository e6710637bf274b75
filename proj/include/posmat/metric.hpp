#pragma once

#include <cstdint>
#include <vector>

#include "posmat/assignment.hpp"
#include "posmat/core.hpp"

namespace posmat {

// Earthmover distance on a line with unit spacing: sum of prefix-sum gaps.
template <typename Scalar>
Scalar emd_1d(const Vector<Scalar>& x, const Vector<Scalar>& y) {
  if (x.size() != y.size()) throw InvalidInput("emd_1d needs vectors of equal length");
  Scalar px(0), py(0), total(0);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    px += x(k);
    py += y(k);
    total += px >= py ? Scalar(px - py) : Scalar(py - px);
  }
  if (px != py) throw InvalidInput("emd_1d needs vectors of equal mass");
  return total;
}

// Minimum over column matchings of summed column EMDs.
template <typename Scalar>
Scalar positionwise_raw(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw InvalidInput("positionwise distance needs square matrices of equal size");
  const Eigen::Index m = a.cols();
  Matrix<Scalar> cost(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      cost(i, j) = emd_1d<Scalar>(a.col(i), b.col(j));
  return solve_assignment<Scalar>(cost).cost;
}

struct DistanceValue {
  Rational raw;
  Rational normalizer;
  // raw / normalizer; zero when the normalizer vanishes (m = 1).
  Rational normalized() const { return normalizer == 0 ? Rational(0) : Rational(raw / normalizer); }
};

// Requires equal m and equal n.
DistanceValue positionwise_distance(const PositionMatrix& a, const PositionMatrix& b);
DistanceValue positionwise_distance(const FrequencyMatrix& a, const FrequencyMatrix& b);
std::int64_t positionwise_raw(const PositionMatrix& a, const PositionMatrix& b);
// d(UN, ID) = n (m^2 - 1) / 3.
Rational positionwise_diameter(int m, std::int64_t n);

PositionMatrix un_matrix(int m, std::int64_t n);
PositionMatrix id_matrix(int m, std::int64_t n);

// floor(n m (m - 1) / 4).
std::int64_t max_swap_distance(int m, std::int64_t n);

struct IsoswapResult {
  std::int64_t raw = 0;
  std::int64_t normalizer = 0;
  Vote relabel;               // candidate c of the first election maps to relabel[c]
  std::vector<int> pairing;   // vote k of the first election pairs with vote pairing[k]
  std::uint64_t solved = 0;   // relabelings that needed an assignment solve
  double normalized() const { return normalizer ? double(raw) / double(normalizer) : 0.0; }
};

// Exact: all m! relabelings, each with an optimal vote pairing. Relabelings are
// visited in order of a pairwise-majority lower bound and skipped once the
// bound reaches the incumbent; assignment solves stop early on the same test.
IsoswapResult isomorphic_swap(const Election& e, const Election& f);
DistanceValue isomorphic_swap_distance(const Election& e, const Election& f);

}  // namespace posmat
