#pragma once

#include <optional>
#include <vector>

#include "posmat/types.hpp"

namespace posmat {

// Candidate indices, most preferred first.
using Vote = std::vector<int>;

bool is_permutation(const std::vector<int>& p, int m);
void require_permutation(const std::vector<int>& p, int m, const char* what);
Vote identity_vote(int m);
Vote inverse(const Vote& v);  // inverse(v)[c] = position of c

class Election {
public:
  Election() = default;
  explicit Election(int m, std::vector<Vote> votes = {});

  int m() const { return m_; }
  int n() const { return static_cast<int>(votes_.size()); }
  const std::vector<Vote>& votes() const { return votes_; }
  const Vote& operator[](int k) const { return votes_[k]; }

  void add(Vote v);
  // Votes sorted lexicographically; the canonical multiset representative.
  Election canonical() const;

  friend bool operator==(const Election& a, const Election& b);

private:
  int m_ = 1;
  std::vector<Vote> votes_;
};

class PositionMatrix {
public:
  PositionMatrix() = default;
  // Validates nonnegativity and equal row/column sums.
  explicit PositionMatrix(IntMatrix x);

  int m() const { return static_cast<int>(x_.rows()); }
  std::int64_t n() const { return n_; }
  const IntMatrix& entries() const { return x_; }
  std::int64_t operator()(int i, int j) const { return x_(i, j); }

  friend bool operator==(const PositionMatrix& a, const PositionMatrix& b) {
    return a.x_ == b.x_;
  }

private:
  IntMatrix x_;
  std::int64_t n_ = 0;
};

class FrequencyMatrix {
public:
  FrequencyMatrix() = default;
  // Validates nonnegativity and unit row/column sums.
  explicit FrequencyMatrix(RatMatrix y);
  explicit FrequencyMatrix(const PositionMatrix& x);

  int m() const { return static_cast<int>(y_.rows()); }
  const RatMatrix& entries() const { return y_; }
  const Rational& operator()(int i, int j) const { return y_(i, j); }

  friend bool operator==(const FrequencyMatrix& a, const FrequencyMatrix& b) {
    return a.y_ == b.y_;
  }

private:
  RatMatrix y_;
};

struct SocietalAxis {
  std::vector<int> order;  // left to right

  SocietalAxis() = default;
  explicit SocietalAxis(std::vector<int> o);
  int m() const { return static_cast<int>(order.size()); }
};

enum class TreeShape { balanced, caterpillar };

// Ordered binary tree over the candidates. Balanced trees halve the frontier
// recursively; caterpillar trees split off leafOrder[j] at depth j.
struct GSTree {
  TreeShape shape = TreeShape::caterpillar;
  std::vector<int> leafOrder;

  GSTree() = default;
  GSTree(TreeShape s, std::vector<int> leaves);
  int m() const { return static_cast<int>(leafOrder.size()); }
};

bool is_power_of_two(int m);

IntMatrix permutation_matrix(const Vote& v);
PositionMatrix position_matrix_of(const Election& e);
PositionMatrix position_matrix_of(const Election& e, const std::vector<int>& columnOrder);
FrequencyMatrix frequency_matrix_of(const Election& e);
FrequencyMatrix frequency_matrix_of(const Election& e, const std::vector<int>& columnOrder);

// Reorders columns: result column j is input column order[j].
PositionMatrix permute_columns(const PositionMatrix& x, const std::vector<int>& order);
FrequencyMatrix permute_columns(const FrequencyMatrix& x, const std::vector<int>& order);

int swap_distance(const Vote& u, const Vote& v);

// w(a, b) = number of voters ranking a above b.
IntMatrix pairwise_tally(const Election& e);
std::optional<int> condorcet_winner(const Election& e);

bool is_single_peaked_wrt(const Vote& v, const SocietalAxis& axis);
bool is_compatible_with_tree(const Vote& v, const GSTree& t);
// Every pair of candidates changes relative order at most once along the voter sequence.
bool is_single_crossing(const Election& e);

}  // namespace posmat
