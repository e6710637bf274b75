#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dataset_io.hpp"
#include "experiments.hpp"
#include "posmat/metric.hpp"

using namespace posmat;
using namespace posmat::tools;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("posmat-test-" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

std::vector<DatasetEntry> id_dataset(int count, int m, int n) {
  std::vector<DatasetEntry> out;
  for (int k = 0; k < count; ++k)
    out.push_back({"id" + std::to_string(k), "id", std::nullopt,
                   Election(m, std::vector<Vote>(n, identity_vote(m)))});
  return out;
}

}  // namespace

TEST_CASE("dataset directories round trip") {
  TempDir dir("dataset");
  const auto data = build_dataset(dataset_preset("4x16", 8));
  save_dataset(dir.str(), data);
  const auto back = load_dataset(dir.str());
  REQUIRE(back.size() == data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    CHECK(back[k].id == data[k].id);
    CHECK(back[k].model == data[k].model);
    CHECK(back[k].parameter == data[k].parameter);
    CHECK(back[k].election.votes() == data[k].election.votes());
  }
  const auto manifest = read_manifest((dir.path / "manifest.csv").string());
  CHECK(manifest.size() == 480);
}

TEST_CASE("schema headers are enforced") {
  std::stringstream ok(schema_line(kManifestSchema) + "\nid,model,parameter\n");
  CHECK_NOTHROW(expect_header(ok, kManifestSchema, "id,model,parameter"));
  std::stringstream wrongSchema("# schema: posmat-manifest/0\nid,model,parameter\n");
  CHECK_THROWS_AS(expect_header(wrongSchema, kManifestSchema, "id,model,parameter"), ParseError);
  std::stringstream wrongHeader(schema_line(kManifestSchema) + "\nid,model\n");
  CHECK_THROWS_AS(expect_header(wrongHeader, kManifestSchema, "id,model,parameter"), ParseError);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<int> hits(500, 0);
  parallel_for(hits.size(), 4, [&](std::size_t k) { hits[k] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t k) { if (k == 7) throw InvalidInput("x"); }), InvalidInput);
}

TEST_CASE("distance experiment") {
  ExperimentConfig cfg;
  cfg.pairSamples = 5;
  const auto ids = run_distance_experiment(cfg, id_dataset(4, 4, 16));
  for (const auto& r : ids) CHECK(r.maxRaw == 0);

  auto data = build_dataset(dataset_preset("4x16", 21));
  std::vector<DatasetEntry> some;
  for (std::size_t k = 0; k < data.size(); k += 24) some.push_back(data[k]);
  cfg.enumerationCap = 30;
  cfg.pairSamples = 10;
  const auto rows = run_distance_experiment(cfg, some);
  int enumerated = 0;
  for (const auto& r : rows) {
    CHECK(r.minRaw <= r.avgRaw);
    CHECK(r.avgRaw <= r.maxRaw);
    CHECK(r.maxRaw <= max_swap_distance(4, 16));
    enumerated += r.enumerated;
  }
  CHECK(enumerated > 0);
  const std::string csv = distance_report_csv(rows);
  CHECK(csv.rfind(schema_line(kDistanceReportSchema), 0) == 0);
}

TEST_CASE("structure experiment") {
  const auto data = build_dataset(dataset_preset("8x80", 5));
  std::vector<DatasetEntry> some;
  for (const auto& d : data)
    if (d.model == "walsh" || d.model == "gs_balanced" || d.model == "gs_caterpillar") some.push_back(d);
  const auto rows = run_structure_experiment({}, some);
  for (const auto& r : rows) {
    if (r.model == "walsh") CHECK(r.sp);
    if (r.model == "gs_balanced") CHECK(r.balanced);
    if (r.model == "gs_caterpillar") CHECK(r.caterpillar);
  }
  const auto table = structure_crosstab(rows);
  CHECK(table.at("walsh")[0] == 20);
  CHECK(table.at("walsh")[1] == 20);
}

TEST_CASE("condorcet experiment with checkpoint and resume") {
  TempDir dir("condorcet");
  ExperimentConfig cfg;
  cfg.outDir = dir.str();
  auto data = id_dataset(3, 4, 5);
  const auto rows = run_condorcet_experiment(cfg, data);
  for (const auto& r : rows) CHECK(r.possible == 1);
  const auto s = summarize(rows);
  CHECK(s.gapCandidates == 0);
  CHECK(s.soundnessViolations == 0);
  CHECK(s.meanPossible == 1.0);

  // A resumed run reads finished rows back instead of recomputing them.
  const std::string checkpoint = (dir.path / "condorcet.checkpoint.csv").string();
  REQUIRE(fs::exists(checkpoint));
  auto edited = parse_condorcet_report(read_file(checkpoint));
  edited[1].possible = 42;
  write_file_atomic(checkpoint, condorcet_report_csv(edited));
  const auto resumed = run_condorcet_experiment(cfg, data);
  CHECK(resumed[1].possible == 42);
  CHECK(resumed[0].possible == 1);

  const auto parsed = parse_condorcet_report(condorcet_report_csv(rows));
  REQUIRE(parsed.size() == rows.size());
  CHECK(parsed[2].condition == rows[2].condition);
  CHECK(parsed[2].exact == rows[2].exact);
  CHECK(parsed[2].decidedBy == rows[2].decidedBy);
  CHECK_THROWS_AS(parse_condorcet_report("# schema: other/1\n"), ParseError);
}
