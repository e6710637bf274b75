#include <doctest.h>

#include "oracles.hpp"
#include "posmat/cultures.hpp"
#include "posmat/domains.hpp"

using namespace posmat;

namespace {

Election example_one() { return Election(4, {{0, 1, 2, 3}, {1, 0, 3, 2}, {0, 1, 3, 2}, {1, 0, 2, 3}}); }

FrequencyMatrix uniform(int m) { return FrequencyMatrix(RatMatrix::Constant(m, m, Rational(1, m))); }

// A witness must consist of domain votes and reproduce the matrix exactly.
void check_witness(const WeightedVotes& w, const FrequencyMatrix& x, const DomainSpec& d) {
  CHECK(votes_in_domain(w, d));
  CHECK(w.frequency() == x);
}

DomainSpec sp_domain(const SocietalAxis& axis) {
  DomainSpec d;
  d.kind = DomainSpec::Kind::single_peaked;
  d.axis = axis;
  return d;
}

DomainSpec tree_domain(const GSTree& t) {
  DomainSpec d;
  d.kind = t.shape == TreeShape::balanced ? DomainSpec::Kind::gs_balanced : DomainSpec::Kind::gs_caterpillar;
  d.tree = t;
  return d;
}

}  // namespace

TEST_CASE("explicit domains") {
  const Vote v{2, 0, 1};
  const auto y = realizable_explicit(frequency_matrix_of(Election(3, {v})), {v});
  REQUIRE(y);
  CHECK((*y)(0) == 1);
  const auto votes = example_one().votes();
  CHECK(realizable_explicit(frequency_matrix_of(example_one()), votes).has_value());
  CHECK_FALSE(realizable_explicit(frequency_matrix_of(example_one()), {identity_vote(4)}).has_value());

  const auto e = realizable_explicit_integral(position_matrix_of(example_one()), votes);
  REQUIRE(e);
  CHECK(position_matrix_of(*e) == position_matrix_of(example_one()));
}

TEST_CASE("single-peaked recognition") {
  const FrequencyMatrix x = frequency_matrix_of(example_one());
  const SocietalAxis cabd({2, 0, 1, 3});
  const auto w = realizable_single_peaked(x, cabd);
  REQUIRE(w);
  check_witness(*w, x, sp_domain(cabd));

  const FrequencyMatrix id = frequency_matrix_of(Election(5, {identity_vote(5)}));
  CHECK(realizable_single_peaked(id, SocietalAxis(identity_vote(5))).has_value());

  for (const auto& axis : oracle::all_votes(3)) CHECK_FALSE(realizable_single_peaked(uniform(3), SocietalAxis(axis)));
}

TEST_CASE("caterpillar recognition") {
  CHECK(realizable_caterpillar(uniform(1), GSTree(TreeShape::caterpillar, {0})).has_value());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = derive_stream(seed, 1);
    const Election e = sample_group_separable(6, 12, TreeShape::caterpillar, rng);
    const FrequencyMatrix x = frequency_matrix_of(e);
    const GSTree t = canonical_tree(6, TreeShape::caterpillar);
    const auto w = realizable_caterpillar(x, t);
    REQUIRE(w);
    check_witness(*w, x, tree_domain(t));
  }
  // UN, m = 3, natural order: compare with every 3-vote caterpillar election.
  const auto dom = oracle::caterpillar_votes({0, 1, 2});
  const std::vector<Vote> votes(dom.begin(), dom.end());
  bool brute = false;
  for (std::size_t a = 0; a < votes.size(); ++a)
    for (std::size_t b = a; b < votes.size(); ++b)
      for (std::size_t c = b; c < votes.size(); ++c)
        brute = brute || frequency_matrix_of(Election(3, {votes[a], votes[b], votes[c]})) == uniform(3);
  CHECK(realizable_caterpillar(uniform(3), GSTree(TreeShape::caterpillar, {0, 1, 2})).has_value() == brute);
}

TEST_CASE("balanced recognition") {
  CHECK(realizable_balanced(frequency_matrix_of(example_one())));
  CHECK(realizable_balanced(position_matrix_of(example_one())));
  CHECK(realizable_balanced(uniform(1)));
  CHECK_FALSE(realizable_balanced(uniform(3)));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = derive_stream(seed, 2);
    const Election e = sample_group_separable(8, 16, TreeShape::balanced, rng);
    const auto w = balanced_witness(position_matrix_of(e));
    REQUIRE(w);
    CHECK(position_matrix_of(w->election) == position_matrix_of(e));
    for (const auto& v : w->election.votes()) CHECK(is_compatible_with_tree(v, w->tree));
  }
}

TEST_CASE("recognition over all structures") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = derive_stream(seed, 3);
    const Election e = sample_walsh(5, 9, rng);
    const auto d = recognize_any(frequency_matrix_of(e), Family::sp);
    REQUIRE(d);
    REQUIRE(d->axis);
    check_witness(d->witness, frequency_matrix_of(e), sp_domain(*d->axis));
  }
  for (Family f : {Family::sp, Family::gs_caterpillar, Family::gs_balanced})
    CHECK(recognize_any(uniform(1), f).has_value());

  int rejected = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = derive_stream(seed, 4);
    const FrequencyMatrix x = frequency_matrix_of(sample_ic(8, 80, rng));
    rejected += !recognize_any(x, Family::sp) && !recognize_any(x, Family::gs_caterpillar) &&
                !recognize_any(x, Family::gs_balanced);
  }
  CHECK(rejected >= 95);
}

TEST_CASE("small matrices agree with the exhaustive oracle") {
  Rng rng = derive_stream(5, 0);
  for (int t = 0; t < 60; ++t) {
    const int m = uniform_int(rng, 1, 3), n = uniform_int(rng, 1, 4);
    Election e(m);
    for (int k = 0; k < n; ++k) e.add(random_permutation(m, rng));
    const FrequencyMatrix x = frequency_matrix_of(e);
    CHECK(recognize_any(x, Family::sp).has_value() == oracle::realizable_in_some(x.entries(), oracle::sp_domains(m)));
    CHECK(recognize_any(x, Family::gs_caterpillar).has_value() ==
          oracle::realizable_in_some(x.entries(), oracle::caterpillar_domains(m)));
    CHECK(recognize_any(x, Family::gs_balanced).has_value() ==
          oracle::realizable_in_some(x.entries(), oracle::balanced_domains(m)));
  }
}

TEST_CASE("exact cover fixture") {
  const X3CFixture one = build_x3c_fixture(3, {{0, 1, 2}});
  CHECK(one.matrix.m() == 6);
  const auto e = realizable_explicit_integral(one.matrix, one.domain.votes);
  REQUIRE(e);
  CHECK(e->votes() == one.domain.votes);

  const X3CFixture f = build_x3c_fixture(6, {{0, 1, 2}, {3, 4, 5}, {0, 3, 4}, {1, 2, 5}});
  for (int i = 0; i < f.matrix.m(); ++i) {
    CHECK(f.matrix.entries().row(i).sum() == 2);
    CHECK(f.matrix.entries().col(i).sum() == 2);
  }
  for (const auto& v : f.domain.votes) CHECK(is_single_peaked_wrt(v, f.domain.axis));
  // {0,1,2} with {3,4,5} is a cover; the other pairs overlap.
  CHECK(realizable_explicit_integral(f.matrix, f.domain.votes).has_value());
  const X3CFixture g = build_x3c_fixture(6, {{0, 1, 2}, {0, 3, 4}, {1, 3, 5}});
  CHECK_FALSE(realizable_explicit_integral(g.matrix, g.domain.votes).has_value());
  CHECK_THROWS_AS(build_x3c_fixture(4, {}), InvalidInput);
  CHECK_THROWS_AS(build_x3c_fixture(3, {{0, 0, 1}}), InvalidInput);
}
