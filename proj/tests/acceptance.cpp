// Acceptance suite: one PASS/FAIL line per criterion. Criteria 10 to 12 run the
// desk-scale experiments on freshly generated 8x80 data and take minutes.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>

#include "experiments.hpp"
#include "oracles.hpp"
#include "posmat/condorcet.hpp"
#include "posmat/cultures.hpp"
#include "posmat/domains.hpp"
#include "posmat/metric.hpp"
#include "posmat/realize.hpp"

using namespace posmat;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Settings {
  // Seeds never used while developing the library.
  std::uint64_t seed4x16 = 0x5eed4016;
  std::uint64_t seed8x80 = 0x5eed8080;
  int isoswapPairs = 3;
  std::uint64_t probeSteps = 20000;
  int jobs = 1;
};

Settings settings;

// Condorcet verdicts seen anywhere in this process, for the soundness criterion.
struct SoundnessLedger {
  std::size_t checked = 0;
  std::size_t violations = 0;
  void record(bool condition, bool winnerPossible) {
    ++checked;
    violations += !condition && winnerPossible;
  }
};

SoundnessLedger soundness;

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

PositionMatrix random_matrix(int m, int n, Rng& rng) {
  Election e(m);
  for (int k = 0; k < n; ++k) e.add(random_permutation(m, rng));
  return position_matrix_of(e);
}

Election example_election() { return Election(4, {{0, 1, 2, 3}, {1, 0, 3, 2}, {0, 1, 3, 2}, {1, 0, 2, 3}}); }

Outcome criterion1() {
  IntMatrix expected(4, 4);
  expected << 2, 2, 0, 0, 2, 2, 0, 0, 0, 0, 2, 2, 0, 0, 2, 2;
  const PositionMatrix x = position_matrix_of(example_election());
  if (x.entries() != expected) return {false, "position matrix differs from the printed one"};
  const Election r = realize_any(x);
  if (position_matrix_of(r) != x) return {false, "realize_any does not round trip"};
  return {true, "matrix matches and realize_any round trips"};
}

Outcome criterion2() {
  const FrequencyMatrix x = frequency_matrix_of(example_election());
  const SocietalAxis cabd({2, 0, 1, 3});
  const auto w = realizable_single_peaked(x, cabd);
  if (!w) return {false, "single-peaked recognizer rejects axis c a b d"};
  for (const auto& [v, k] : w->votes)
    if (!oracle::single_peaked(v, cabd.order)) return {false, "witness vote is not single-peaked"};
  if (!(w->frequency() == x)) return {false, "witness does not reproduce the matrix"};
  if (!realizable_balanced(x)) return {false, "balanced recognizer rejects"};
  return {true, "accepted by single-peaked (c a b d) and balanced recognizers"};
}

Outcome criterion3() {
  Rng rng = derive_stream(settings.seed4x16, 3);
  for (int t = 0; t < 50; ++t) {
    const int m = uniform_int(rng, 1, 4), n = uniform_int(rng, 1, 6);
    const PositionMatrix x = random_matrix(m, n, rng);
    const BigInt counted = count_realizations(x);
    std::size_t streamed = 0;
    enumerate_realizations(x, [&](const Election& e) {
      streamed += position_matrix_of(e) == x;
      return true;
    });
    const std::size_t brute = oracle::realization_multisets(x.entries(), n).size();
    if (counted != BigInt(streamed) || counted != BigInt(brute))
      return {false, "matrix " + std::to_string(t) + ": count " + counted.str() + ", stream " +
                         std::to_string(streamed) + ", brute force " + std::to_string(brute)};
  }
  int tested = 0;
  double worst = 1;
  while (tested < 5) {
    const PositionMatrix x = random_matrix(4, uniform_int(rng, 3, 6), rng);
    RealizationCounter counter(x);
    const BigInt total = counter.count();
    if (total < 3 || total > 50) continue;
    std::map<std::vector<Vote>, long> freq;
    counter.enumerate([&](const Election& e) {
      freq[e.canonical().votes()] = 0;
      return true;
    });
    for (int d = 0; d < 10000; ++d) {
      auto it = freq.find(counter.sample_uniform(rng).canonical().votes());
      if (it == freq.end()) return {false, "sampler produced a non-realization"};
      ++it->second;
    }
    std::vector<long> counts;
    for (auto& [k, c] : freq) counts.push_back(c);
    worst = std::min(worst, oracle::chi_square_p(counts));
    ++tested;
  }
  if (worst <= 0.001) return {false, "chi-square p = " + fmt("%.5f", worst)};
  return {true, "50 matrices agree with brute force; smallest chi-square p over 5 instances " + fmt("%.4f", worst)};
}

Outcome criterion4() {
  if (permanent(IntMatrix(IntMatrix::Ones(4, 4))) != 24) return {false, "all-ones 4x4 permanent is not 24"};
  Rng rng = derive_stream(settings.seed4x16, 4);
  for (int t = 0; t < 200; ++t) {
    const int m = uniform_int(rng, 1, 6);
    IntMatrix a(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a(i, j) = coin(rng);
    if (permanent(a) != oracle::permanent_by_permutations(a)) return {false, "mismatch on matrix " + std::to_string(t)};
  }
  return {true, "200 random 0/1 matrices and the all-ones 4x4 agree"};
}

Outcome criterion5() {
  const Rational oracle20 =
      oracle::positionwise(oracle::to_rational(un_matrix(4, 4).entries()), oracle::to_rational(id_matrix(4, 4).entries()));
  if (oracle20 != 20 || positionwise_distance(un_matrix(4, 4), id_matrix(4, 4)).raw != 20)
    return {false, "d(UN, ID) for m = 4, n = 4 is not 20"};
  const auto data = build_dataset(dataset_preset("4x16", settings.seed4x16));
  std::vector<PositionMatrix> xs;
  for (const auto& d : data) xs.push_back(position_matrix_of(d.election));
  xs.push_back(un_matrix(4, 16));
  xs.push_back(id_matrix(4, 16));
  const std::int64_t diameter = positionwise_raw(un_matrix(4, 16), id_matrix(4, 16));
  if (Rational(diameter) != positionwise_diameter(4, 16)) return {false, "diameter formula disagrees"};
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < xs.size(); ++a)
    for (std::size_t b = a + 1; b < xs.size(); ++b, ++pairs)
      if (positionwise_raw(xs[a], xs[b]) > diameter)
        return {false, "pair (" + std::to_string(a) + ", " + std::to_string(b) + ") exceeds d(UN, ID)"};
  return {true, std::to_string(pairs) + " pairs within d(UN, ID) = " + std::to_string(diameter)};
}

Outcome criterion6() {
  Rng rng = derive_stream(settings.seed4x16, 6);
  auto election = [&](int m, int n) {
    Election e(m);
    for (int k = 0; k < n; ++k) e.add(random_permutation(m, rng));
    return e;
  };
  auto within_cap = [](const IsoswapResult& r, int m, int n) { return r.raw <= (std::int64_t(n) * m * (m - 1)) / 4; };
  for (int t = 0; t < 100; ++t) {
    const int m = uniform_int(rng, 1, 3), n = uniform_int(rng, 1, 3);
    const Election a = election(m, n), b = election(m, n);
    const IsoswapResult r = isomorphic_swap(a, b);
    if (r.raw != oracle::isoswap(a, b)) return {false, "oracle mismatch on pair " + std::to_string(t)};
    if (!within_cap(r, m, n)) return {false, "cap exceeded on pair " + std::to_string(t)};
  }
  int larger = 0;
  for (int t = 0; t < 200; ++t) {
    const int m = uniform_int(rng, 2, 8), n = uniform_int(rng, 1, 20);
    if (!within_cap(isomorphic_swap(election(m, n), election(m, n)), m, n))
      return {false, "cap exceeded at m = " + std::to_string(m) + ", n = " + std::to_string(n)};
    ++larger;
  }
  return {true, "100 oracle pairs agree; " + std::to_string(100 + larger) + " values within the cap"};
}

// Domain election: n votes drawn uniformly from one structure's compatible votes.
struct DomainDraw {
  Family family;
  Election election;
};

DomainDraw random_domain_election(Rng& rng) {
  const Family family = static_cast<Family>(uniform_int(rng, 0, 2));
  const int m = family == Family::gs_balanced ? uniform_int(rng, 1, 2) : uniform_int(rng, 1, 3);
  const int n = uniform_int(rng, 1, 4);
  const Vote structure = random_permutation(m, rng);
  std::set<Vote> dom;
  if (family == Family::sp) {
    for (const auto& v : oracle::all_votes(m))
      if (oracle::single_peaked(v, structure)) dom.insert(v);
  } else if (family == Family::gs_caterpillar) {
    dom = oracle::caterpillar_votes(structure);
  } else {
    dom = oracle::balanced_votes(structure);
  }
  const std::vector<Vote> votes(dom.begin(), dom.end());
  Election e(m);
  for (int k = 0; k < n; ++k) e.add(votes[uniform_int(rng, 0, static_cast<int>(votes.size()) - 1)]);
  return {family, e};
}

bool witness_verifies(const WitnessDescriptor& d, const FrequencyMatrix& x) {
  if (!(d.witness.frequency() == x)) return false;
  for (const auto& [v, k] : d.witness.votes) {
    if (d.family == Family::sp) {
      if (!d.axis || !oracle::single_peaked(v, d.axis->order)) return false;
    } else if (!d.tree) {
      return false;
    } else {
      const auto dom = d.family == Family::gs_caterpillar ? oracle::caterpillar_votes(d.tree->leafOrder)
                                                          : oracle::balanced_votes(d.tree->leafOrder);
      if (!dom.count(v)) return false;
    }
  }
  return true;
}

Outcome criterion7() {
  Rng rng = derive_stream(settings.seed4x16, 7);
  std::map<int, std::vector<std::set<Vote>>> sp, cat, bal;
  int accepted = 0, rejected = 0;
  for (int t = 0; t < 200; ++t) {
    const DomainDraw draw = random_domain_election(rng);
    const int m = draw.election.m();
    if (!sp.count(m)) {
      sp[m] = oracle::sp_domains(m);
      cat[m] = oracle::caterpillar_domains(m);
      bal[m] = oracle::balanced_domains(m);
    }
    const FrequencyMatrix x = frequency_matrix_of(draw.election);
    const std::pair<Family, const std::vector<std::set<Vote>>*> families[] = {
        {Family::sp, &sp[m]}, {Family::gs_caterpillar, &cat[m]}, {Family::gs_balanced, &bal[m]}};
    for (auto [family, domains] : families) {
      const auto d = recognize_any(x, family);
      const bool expected = oracle::realizable_in_some(x.entries(), *domains);
      if (d.has_value() != expected)
        return {false, "verdict differs from exhaustive search on matrix " + std::to_string(t)};
      if (d && !witness_verifies(*d, x)) return {false, "witness fails on matrix " + std::to_string(t)};
      (d ? accepted : rejected) += 1;
    }
    if (!recognize_any(x, draw.family)) return {false, "generating family rejected matrix " + std::to_string(t)};
  }
  return {true, "200 matrices, " + std::to_string(accepted) + " accepted and " + std::to_string(rejected) +
                    " rejected verdicts match; witnesses verify"};
}

// Possible winners by brute force over the enumerated realizations.
std::vector<bool> enumerated_winners(const PositionMatrix& x) {
  std::vector<bool> can(x.m(), false);
  enumerate_realizations(x, [&](const Election& e) {
    if (auto w = oracle::condorcet_winner(e.m(), e.votes())) can[*w] = true;
    return true;
  });
  return can;
}

Outcome criterion8() {
  // Random small matrices: exhaustive verdicts for every candidate the
  // condition rejects, plus the heuristic witness hunt.
  Rng rng = derive_stream(settings.seed4x16, 8);
  for (int t = 0; t < 300; ++t) {
    const int m = uniform_int(rng, 2, 4), n = uniform_int(rng, 1, 7);
    const PositionMatrix x = random_matrix(m, n, rng);
    const auto can = enumerated_winners(x);
    for (int c = 0; c < m; ++c) {
      const bool cond = necessary_condition(x, c);
      soundness.record(cond, can[c]);
      if (!cond) soundness.record(cond, heuristic_witness(x, c, 2000, t).has_value());
    }
  }
  const auto data = build_dataset(dataset_preset("8x80", settings.seed8x80 + 8));
  for (std::size_t k = 0; k < data.size(); k += 4) {
    const PositionMatrix x = position_matrix_of(data[k].election);
    for (int c = 0; c < 8; ++c)
      if (!necessary_condition(x, c)) soundness.record(false, heuristic_witness(x, c, settings.probeSteps, k).has_value());
  }
  if (soundness.violations) return {false, std::to_string(soundness.violations) + " (condition false, winner possible) cases"};
  return {true, "zero violations over " + std::to_string(soundness.checked) + " candidate checks in this run"};
}

Outcome criterion9() {
  DatasetSpec spec = dataset_preset("4x16", settings.seed4x16 + 9);
  spec.n = 8;
  const auto data = build_dataset(spec);
  long total = 0;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const PositionMatrix x = position_matrix_of(data[k].election);
    const auto can = enumerated_winners(x);
    const PossibleWinners w = count_possible_cw(x);
    if (!w.undecided.empty()) return {false, "undecided candidates on matrix " + data[k].id};
    const int brute = static_cast<int>(std::count(can.begin(), can.end(), true));
    if (w.count != brute) return {false, data[k].id + ": " + std::to_string(w.count) + " vs brute force " + std::to_string(brute)};
    for (int c : w.candidates)
      if (!can[c]) return {false, data[k].id + ": candidate set differs"};
    for (int c = 0; c < x.m(); ++c) soundness.record(necessary_condition(x, c), can[c]);
    total += brute;
  }
  return {true, std::to_string(data.size()) + " matrices agree; mean " + fmt("%.3f", double(total) / data.size())};
}

tools::ExperimentConfig fresh_8x80() {
  tools::ExperimentConfig cfg;
  cfg.seed = settings.seed8x80;
  cfg.jobs = settings.jobs;
  cfg.pairSamples = settings.isoswapPairs;
  cfg.condorcet.seed = settings.seed8x80;
  cfg.condorcet.soundnessProbeSteps = settings.probeSteps;
  return cfg;
}

Outcome criterion10() {
  const auto cfg = fresh_8x80();
  const auto rows = tools::run_condorcet_experiment(cfg, tools::experiment_dataset(cfg));
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.exact.size(); ++c) soundness.record(r.condition[c], r.exact[c] == CwStatus::found);
  const auto s = tools::summarize(rows);
  const std::string detail = "mean " + fmt("%.3f", s.meanPossible) + ", without winner " +
                             std::to_string(s.sampledWithoutWinner) + ", gap candidates " +
                             std::to_string(s.gapCandidates) + ", undecided " + std::to_string(s.undecided) +
                             ", soundness violations " + std::to_string(s.soundnessViolations);
  const bool pass = std::abs(s.meanPossible - 2.6) <= 0.5 && std::abs(double(s.sampledWithoutWinner) - 94) <= 25 &&
                    s.gapCandidates <= 20 && s.undecided == 0 && s.soundnessViolations == 0;
  return {pass, detail};
}

Outcome criterion11() {
  const auto cfg = fresh_8x80();
  const auto data = tools::experiment_dataset(cfg);
  const auto rows = tools::run_structure_experiment(cfg, data);
  int spModels = 0, spOk = 0, gsModels = 0, gsOk = 0, plain = 0, plainRejected = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (r.model == "walsh" || r.model == "conitzer") {
      ++spModels;
      spOk += r.sp;
    } else if (r.model == "gs_balanced" || r.model == "gs_caterpillar") {
      ++gsModels;
      gsOk += r.model == "gs_balanced" ? r.balanced : r.caterpillar;
    }
    // Low reinforcement: alpha below 1/2 keeps urn votes far from identical.
    const bool lowUrn = r.model == "urn" && data[k].parameter && *data[k].parameter < 0.5;
    if (r.model == "ic" || lowUrn) {
      ++plain;
      plainRejected += !(r.sp || r.caterpillar || r.balanced);
    }
  }
  const std::string detail = "sp-any " + std::to_string(spOk) + "/" + std::to_string(spModels) + ", group-separable " +
                             std::to_string(gsOk) + "/" + std::to_string(gsModels) + ", IC/low-alpha urn rejected " +
                             std::to_string(plainRejected) + "/" + std::to_string(plain);
  const bool pass = spOk == spModels && gsOk == gsModels && plain > 0 && plainRejected * 100 >= 95 * plain;
  return {pass, detail};
}

Outcome criterion12() {
  const auto cfg = fresh_8x80();
  const auto data = tools::experiment_dataset(cfg);
  const auto rows = tools::run_distance_experiment(cfg, data);
  const std::size_t n = rows.size();
  std::size_t above = 0;
  std::vector<double> maxima;
  for (const auto& r : rows) {
    above += r.maxNorm() > 0.2;
    maxima.push_back(r.maxNorm());
  }
  std::vector<double> sorted = maxima;
  std::sort(sorted.begin(), sorted.end());
  const double median = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2;

  std::vector<std::pair<Rational, std::size_t>> toId;
  const PositionMatrix id = id_matrix(8, 80);
  for (std::size_t k = 0; k < n; ++k)
    toId.emplace_back(positionwise_distance(position_matrix_of(data[k].election), id).raw, k);
  std::sort(toId.begin(), toId.end());
  const std::size_t decile = (n + 9) / 10;
  std::size_t closeBelow = 0;
  for (std::size_t k = 0; k < decile; ++k) closeBelow += maxima[toId[k].second] < median;

  const std::string detail = std::to_string(above) + "/" + std::to_string(n) + " above 20% of the normalizer, " +
                             std::to_string(closeBelow) + "/" + std::to_string(decile) +
                             " of the decile closest to ID below the median " + fmt("%.4f", median) + " (" +
                             std::to_string(settings.isoswapPairs) + " pairs per matrix)";
  return {above * 100 >= 40 * n && closeBelow == decile, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> which;
  app.add_option("criteria", which, "Criteria to run (default: all twelve)")->check(CLI::Range(1, 12));
  app.add_option("--pairs", settings.isoswapPairs, "Sampled realization pairs per matrix for criterion 12");
  app.add_option("--probe-steps", settings.probeSteps);
  app.add_option("--jobs", settings.jobs);
  CLI11_PARSE(app, argc, argv);
  if (which.empty())
    for (int k = 1; k <= 12; ++k) which.push_back(k);

  const std::map<int, std::function<Outcome()>> criteria = {
      {1, criterion1},  {2, criterion2},  {3, criterion3},   {4, criterion4},   {5, criterion5},   {6, criterion6},
      {7, criterion7},  {8, criterion8},  {9, criterion9},   {10, criterion10}, {11, criterion11}, {12, criterion12}};
  // Criterion 8 covers every verdict recorded in this process, so it goes last.
  std::stable_partition(which.begin(), which.end(), [](int k) { return k != 8; });
  int failed = 0;
  for (int k : which) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria.at(k)();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", k, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
