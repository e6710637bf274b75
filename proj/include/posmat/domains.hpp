#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "posmat/core.hpp"
#include "posmat/ratlp.hpp"

namespace posmat {

// Distinct votes with positive integer multiplicities; witnesses may need a
// number of votes equal to the lcm of LP denominators, so they stay compressed.
struct WeightedVotes {
  int m = 1;
  std::vector<std::pair<Vote, BigInt>> votes;

  BigInt total() const;
  FrequencyMatrix frequency() const;
  // Throws BoundExceeded above maxVotes.
  Election expand(std::size_t maxVotes = 1000000) const;
};

struct DomainSpec {
  enum class Kind { explicit_votes, single_peaked, gs_balanced, gs_caterpillar };
  Kind kind = Kind::explicit_votes;
  std::vector<Vote> votes;
  SocietalAxis axis;
  GSTree tree;
};

// Weights y >= 0 (one per listed vote) with sum_k y_k P(v_k) = x.
std::optional<RatVector> realizable_explicit(const FrequencyMatrix& x, const std::vector<Vote>& votes);
// Integral vote counts realizing a position matrix; exact search, n <= 12.
std::optional<Election> realizable_explicit_integral(const PositionMatrix& x,
                                                     const std::vector<Vote>& votes);

struct CaterpillarFlowVars {
  // l(i-1, j-1) and r(i-1, j-1) hold l_{i,j} and r_{i,j}: candidate c_j sits at
  // position i and is ranked above (l) or below (r) all of c_{j+1..m}.
  RatMatrix l, r;
};

// The linear system over l, r for a matrix whose columns follow the leaf order.
RationalLinearSystem caterpillar_system(const FrequencyMatrix& x);
std::optional<CaterpillarFlowVars> caterpillar_flow(const FrequencyMatrix& x);
// Integral flow on the layered DAG of blocks, split greedily into source-sink paths.
WeightedVotes decompose_caterpillar_flow(const CaterpillarFlowVars& vars);

std::optional<WeightedVotes> realizable_caterpillar(const FrequencyMatrix& x, const GSTree& tree);
std::optional<WeightedVotes> realizable_single_peaked(const FrequencyMatrix& x,
                                                      const SocietalAxis& axis);

// Pairs columns whose row pairs (2i, 2i+1) mirror each other; row blocks of the
// folded matrix add the two rows of each block.
template <typename Scalar>
bool balanced_step(const Matrix<Scalar>& x, std::vector<std::pair<int, int>>& pairs,
                   Matrix<Scalar>& folded) {
  const int m = static_cast<int>(x.rows());
  auto siblings = [&](int a, int b) {
    for (int i = 0; i + 1 < m; i += 2)
      if (x(i + 1, a) != x(i, b) || x(i, a) != x(i + 1, b)) return false;
    return true;
  };
  std::vector<char> taken(m, 0);
  pairs.clear();
  for (int a = 0; a < m; ++a) {
    if (taken[a]) continue;
    int partner = -1;
    for (int b = a + 1; b < m && partner < 0; ++b)
      if (!taken[b] && siblings(a, b)) partner = b;
    if (partner < 0) return false;
    taken[a] = taken[partner] = 1;
    pairs.emplace_back(a, partner);
  }
  const int h = m / 2;
  folded.resize(h, h);
  for (int i = 0; i < h; ++i)
    for (int k = 0; k < h; ++k)
      folded(i, k) = x(2 * i + 1, pairs[k].first) + x(2 * i + 1, pairs[k].second);
  return true;
}

template <typename Scalar>
bool realizable_balanced(const Matrix<Scalar>& x) {
  const int m = static_cast<int>(x.rows());
  if (m == 1) return true;
  if (!is_power_of_two(m)) return false;
  std::vector<std::pair<int, int>> pairs;
  Matrix<Scalar> folded;
  if (!balanced_step(x, pairs, folded)) return false;
  return realizable_balanced(folded);
}

bool realizable_balanced(const PositionMatrix& x);
bool realizable_balanced(const FrequencyMatrix& x);

struct BalancedWitness {
  GSTree tree;
  Election election;
};
std::optional<BalancedWitness> balanced_witness(const PositionMatrix& x);
std::optional<BalancedWitness> balanced_witness(const FrequencyMatrix& x);

enum class Family { sp, gs_caterpillar, gs_balanced };

struct WitnessDescriptor {
  Family family;
  std::optional<SocietalAxis> axis;
  std::optional<GSTree> tree;
  WeightedVotes witness;
  std::size_t structuresTried = 0;
};

// sp / caterpillar: canonical axes (first < last) or leaf orders (last two
// leaves ascending) in lexicographic order; balanced: a single structural check.
std::optional<WitnessDescriptor> recognize_any(const FrequencyMatrix& x, Family family);

struct X3CFixture {
  PositionMatrix matrix;
  DomainSpec domain;
};

// Universe elements 0..3k-1 and 3-element sets; 6k candidates, k voters.
X3CFixture build_x3c_fixture(int universeSize, const std::vector<std::array<int, 3>>& sets);

// Witness checks used by recognizers and tests.
bool votes_in_domain(const WeightedVotes& w, const DomainSpec& d);

}  // namespace posmat
