#pragma once

#include <cstdint>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "posmat/condorcet.hpp"
#include "posmat/cultures.hpp"

namespace posmat::tools {

struct ExperimentConfig {
  std::string preset = "8x80";  // "8x80", "4x16" or "custom" with a dataset directory
  std::uint64_t seed = 0;
  std::string outDir;           // empty: nothing is written
  std::string datasetDir;       // load instead of generating when set
  int jobs = 1;
  int pairSamples = 100;
  // 4x16: matrices with at most this many realizations use every pair of them.
  int enumerationCap = 200;
  CwSearchOptions condorcet;
  bool keepWitnesses = false;
  std::function<void(const std::string&)> progress;
};

std::vector<DatasetEntry> experiment_dataset(const ExperimentConfig& cfg);

// Runs fn(0..count-1) on a pool of `jobs` threads; results go by index.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

struct DistanceRow {
  std::string id, model;
  std::int64_t normalizer = 0;
  std::int64_t minRaw = 0, maxRaw = 0;
  double avgRaw = 0;
  int pairs = 0;
  bool enumerated = false;
  double minNorm() const { return normalizer ? double(minRaw) / normalizer : 0; }
  double avgNorm() const { return normalizer ? avgRaw / normalizer : 0; }
  double maxNorm() const { return normalizer ? double(maxRaw) / normalizer : 0; }
};

// Isomorphic swap distance between realizations of each matrix: all pairs of
// all realizations when few enough exist, otherwise sampled pairs (uniform
// sampler inside the counting bounds, the naive sampler beyond them).
std::vector<DistanceRow> run_distance_experiment(const ExperimentConfig& cfg,
                                                 const std::vector<DatasetEntry>& data);
std::string distance_report_csv(const std::vector<DistanceRow>& rows);

struct StructureRow {
  std::string id, model;
  bool sp = false, caterpillar = false, balanced = false;
};
std::vector<StructureRow> run_structure_experiment(const ExperimentConfig& cfg,
                                                   const std::vector<DatasetEntry>& data);
std::string structure_report_csv(const std::vector<StructureRow>& rows);
// model -> (elections, sp, caterpillar, balanced, none)
std::map<std::string, std::array<int, 5>> structure_crosstab(const std::vector<StructureRow>& rows);

struct CondorcetRow {
  std::string id, model;
  bool sampledHasWinner = false;
  std::vector<bool> condition;
  std::vector<CwStatus> exact;
  std::vector<std::string> decidedBy;
  std::vector<std::string> witness;  // votes joined by ';', filled when witnesses are kept
  int possible = 0;
  int undecided = 0;
};

struct CondorcetSummary {
  double meanPossible = 0;
  int matricesWithZero = 0;
  int sampledWithoutWinner = 0;
  int gapCandidates = 0;          // condition true, exact absent
  int soundnessViolations = 0;    // condition false, witness found
  int undecided = 0;
};

// Checkpoints after every matrix into outDir/condorcet.checkpoint.csv and
// resumes from it when present.
std::vector<CondorcetRow> run_condorcet_experiment(const ExperimentConfig& cfg,
                                                   const std::vector<DatasetEntry>& data);
CondorcetSummary summarize(const std::vector<CondorcetRow>& rows);
std::string condorcet_report_csv(const std::vector<CondorcetRow>& rows);
std::vector<CondorcetRow> parse_condorcet_report(const std::string& csv);
// One row per (matrix, candidate): id,candidate,condition,exact,witness
std::string condorcet_candidate_csv(const std::vector<CondorcetRow>& rows);

}  // namespace posmat::tools
