#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dataset_io.hpp"
#include "experiments.hpp"
#include "posmat/condorcet.hpp"
#include "posmat/domains.hpp"
#include "posmat/io.hpp"
#include "posmat/metric.hpp"
#include "posmat/realize.hpp"

namespace fs = std::filesystem;
using namespace posmat;
using namespace posmat::tools;

namespace {

// Verdict exits are part of the contract; usage errors come out of CLI11 as 2.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;
constexpr int kNegative = 3;
constexpr int kBound = 4;

struct Globals {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;
};

std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InvalidInput("bad index list '" + text + "'");
    }
  }
  return out;
}

bool is_election_path(const std::string& path) { return fs::path(path).extension() == ".elec"; }

void require_out(const Globals& g, const char* what) {
  if (g.out.empty()) throw CLI::ValidationError("-o", std::string(what) + " needs an output path");
}

// Prints to stdout when no output path was given.
void emit(const Globals& g, const std::string& text) {
  if (g.out.empty())
    std::cout << text;
  else
    write_file_atomic(g.out, text);
}

std::string election_text(const Election& e) {
  std::ostringstream s;
  write_election(s, e);
  return s.str();
}

void add_sample(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("sample", "Sample one election from a statistical culture");
  auto model = std::make_shared<std::string>();
  auto m = std::make_shared<int>(0), n = std::make_shared<int>(0), dim = std::make_shared<int>(1);
  auto alpha = std::make_shared<double>(), relphi = std::make_shared<double>();
  auto geometry = std::make_shared<std::string>("cube");
  cmd->add_option("--model", *model, "ic, urn, mallows_norm, euclidean, conitzer, walsh, spoc, gs_balanced, "
                                     "gs_caterpillar, single_crossing")
      ->required();
  cmd->add_option("--m", *m, "Candidates")->required()->check(CLI::Range(1, 64));
  cmd->add_option("--n", *n, "Voters")->required()->check(CLI::NonNegativeNumber);
  auto* alphaOpt = cmd->add_option("--alpha", *alpha, "Urn reinforcement");
  auto* relphiOpt = cmd->add_option("--relphi", *relphi, "Normalized Mallows dispersion")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--dim", *dim, "Euclidean dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--geometry", *geometry)->check(CLI::IsMember({"cube", "sphere"}));
  cmd->callback([=, &g] {
    auto spec = culture_from_name(*model);
    if (!spec) throw CLI::ValidationError("--model", "unknown model '" + *model + "'");
    if (alphaOpt->count()) spec->alpha = *alpha;
    if (relphiOpt->count()) spec->relphi = *relphi;
    spec->dim = *dim;
    spec->geometry = *geometry == "sphere" ? Geometry::sphere : Geometry::cube;
    Rng rng = derive_stream(g.seed, 0);
    emit(g, election_text(sample(*spec, *m, *n, rng)));
  });
}

void add_dataset(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("dataset", "Generate a 480-election preset dataset directory");
  auto preset = std::make_shared<std::string>("8x80");
  cmd->add_option("--preset", *preset)->check(CLI::IsMember({"8x80", "4x16"}));
  cmd->callback([=, &g] {
    require_out(g, "dataset");
    auto data = build_dataset(dataset_preset(*preset, g.seed));
    save_dataset(g.out, data);
    std::cout << data.size() << " elections written to " << g.out << '\n';
  });
}

void add_matrix(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("matrix", "Position (or frequency) matrix of an election");
  auto input = std::make_shared<std::string>();
  auto frequency = std::make_shared<bool>(false);
  auto columns = std::make_shared<std::string>();
  cmd->add_option("election", *input)->required()->check(CLI::ExistingFile);
  cmd->add_flag("--frequency", *frequency, "Divide by the number of voters");
  cmd->add_option("--columns", *columns, "Candidate order for the columns, e.g. \"2,0,1,3\"");
  cmd->callback([=, &g] {
    const Election e = load_election(*input);
    std::vector<int> order = columns->empty() ? identity_vote(e.m()) : parse_index_list(*columns);
    std::ostringstream s;
    if (*frequency)
      write_matrix(s, frequency_matrix_of(e, order));
    else
      write_matrix(s, position_matrix_of(e, order));
    emit(g, s.str());
  });
}

void add_realize(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("realize", "Build, sample, count or enumerate realizations of a position matrix");
  auto mode = std::make_shared<std::string>("any");
  auto matrix = std::make_shared<std::string>();
  cmd->add_option("--mode", *mode)->check(CLI::IsMember({"any", "naive", "uniform", "count", "enumerate"}));
  cmd->add_option("--matrix", *matrix)->required()->check(CLI::ExistingFile);
  cmd->callback([=, &g] {
    const PositionMatrix x = load_position_matrix(*matrix);
    Rng rng = derive_stream(g.seed, 0);
    if (*mode == "any") {
      emit(g, election_text(realize_any(x)));
    } else if (*mode == "naive") {
      emit(g, election_text(sample_realization_naive(x, rng)));
    } else if (*mode == "uniform") {
      emit(g, election_text(sample_realization_uniform(x, rng)));
    } else if (*mode == "count") {
      std::cout << count_realizations(x).str() << '\n';
    } else {
      require_out(g, "enumerate");
      fs::create_directories(g.out);
      std::size_t k = 0;
      enumerate_realizations(x, [&](const Election& e) {
        char name[32];
        std::snprintf(name, sizeof name, "%06zu.elec", k++);
        save((fs::path(g.out) / name).string(), e);
        return true;
      });
      std::cout << k << " realizations written to " << g.out << '\n';
    }
  });
}

void add_distance(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("distance", "Positionwise or isomorphic swap distance between two inputs");
  auto metric = std::make_shared<std::string>("positionwise");
  auto a = std::make_shared<std::string>(), b = std::make_shared<std::string>();
  auto normalized = std::make_shared<bool>(false);
  cmd->add_option("--metric", *metric)->check(CLI::IsMember({"positionwise", "isoswap"}));
  cmd->add_option("A", *a)->required()->check(CLI::ExistingFile);
  cmd->add_option("B", *b)->required()->check(CLI::ExistingFile);
  cmd->add_flag("--normalized", *normalized, "Divide by the diameter (positionwise) or max swap distance (isoswap)");
  cmd->callback([=, &g] {
    DistanceValue d;
    if (*metric == "isoswap") {
      if (!is_election_path(*a) || !is_election_path(*b))
        throw CLI::ValidationError("--metric", "isoswap needs two .elec elections");
      d = isomorphic_swap_distance(load_election(*a), load_election(*b));
    } else {
      auto load = [](const std::string& p) {
        return is_election_path(p) ? position_matrix_of(load_election(p)) : load_position_matrix(p);
      };
      d = positionwise_distance(load(*a), load(*b));
    }
    emit(g, (*normalized ? to_string(d.normalized()) : to_string(d.raw)) + "\n");
  });
}

void write_witness(const std::string& path, const WeightedVotes& w) { save(path, w.expand()); }

void add_recognize(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("recognize", "Decide whether a matrix is realizable within a structured domain");
  auto family = std::make_shared<std::string>();
  auto matrix = std::make_shared<std::string>(), axis = std::make_shared<std::string>();
  auto treeOrder = std::make_shared<std::string>(), votes = std::make_shared<std::string>();
  auto witness = std::make_shared<std::string>();
  cmd->add_option("--family", *family)
      ->required()
      ->check(CLI::IsMember({"sp", "gs-balanced", "gs-caterpillar", "explicit"}));
  cmd->add_option("--matrix", *matrix)->required()->check(CLI::ExistingFile);
  cmd->add_option("--axis", *axis, "Societal axis, best-left first; all axes are tried when omitted");
  cmd->add_option("--tree-order", *treeOrder, "Caterpillar leaf order; all are tried when omitted");
  cmd->add_option("--votes", *votes, "Election whose votes form the explicit domain")->check(CLI::ExistingFile);
  cmd->add_option("--witness", *witness, "Write a realizing election here");
  cmd->callback([=, &g] {
    std::ifstream in(*matrix);
    if (!in) throw InvalidInput("cannot open " + *matrix);
    const FrequencyMatrix x = read_any_as_frequency(in);
    std::optional<WeightedVotes> found;
    std::string detail;
    if (*family == "explicit") {
      if (votes->empty()) throw CLI::ValidationError("--votes", "the explicit family needs --votes");
      const Election domain = load_election(*votes);
      if (auto y = realizable_explicit(x, domain.votes())) {
        WeightedVotes w{x.m()};
        auto [scaled, total] = integral_scale(*y);
        for (std::size_t k = 0; k < scaled.size(); ++k)
          if (scaled[k] != 0) w.votes.emplace_back(domain.votes()[k], scaled[k]);
        found = std::move(w);
      }
    } else if (*family == "sp" && !axis->empty()) {
      found = realizable_single_peaked(x, SocietalAxis(parse_index_list(*axis)));
    } else if (*family == "gs-caterpillar" && !treeOrder->empty()) {
      found = realizable_caterpillar(x, GSTree(TreeShape::caterpillar, parse_index_list(*treeOrder)));
    } else {
      const Family f = *family == "sp" ? Family::sp
                       : *family == "gs-balanced" ? Family::gs_balanced
                                                  : Family::gs_caterpillar;
      if (auto d = recognize_any(x, f)) {
        found = d->witness;
        std::ostringstream s;
        if (d->axis) {
          s << "axis";
          for (int c : d->axis->order) s << ' ' << c;
        } else if (d->tree) {
          s << "leaves";
          for (int c : d->tree->leafOrder) s << ' ' << c;
        }
        detail = s.str();
      }
    }
    std::cout << (found ? "realizable" : "not realizable") << (detail.empty() ? "" : " (" + detail + ")") << '\n';
    if (found && !witness->empty()) write_witness(*witness, *found);
    if (!found) throw CLI::RuntimeError(kNegative);
  });
}

void add_fixture(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("fixture", "Hardness fixtures");
  auto* x3c = cmd->add_subcommand("x3c", "Matrix and explicit domain built from an exact-cover-by-3-sets instance");
  cmd->require_subcommand(1);
  auto universe = std::make_shared<int>(0);
  auto sets = std::make_shared<std::string>();
  x3c->add_option("--universe", *universe, "Universe size, a multiple of 3")->required()->check(CLI::PositiveNumber);
  x3c->add_option("--sets", *sets, "One set per line: three element indices")->required()->check(CLI::ExistingFile);
  x3c->callback([=, &g] {
    require_out(g, "fixture x3c");
    std::ifstream in(*sets);
    std::vector<std::array<int, 3>> family;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
      ++lineNo;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::istringstream ls(line);
      std::array<int, 3> s{};
      std::string extra;
      if (!(ls >> s[0] >> s[1] >> s[2]) || (ls >> extra)) throw ParseError(lineNo, "expected three integers");
      family.push_back(s);
    }
    const X3CFixture f = build_x3c_fixture(*universe, family);
    fs::create_directories(g.out);
    save((fs::path(g.out) / "matrix.pmx").string(), f.matrix);
    save((fs::path(g.out) / "domain.elec").string(), Election(f.matrix.m(), f.domain.votes));
    std::cout << "fixture with " << f.matrix.m() << " candidates and " << f.domain.votes.size()
              << " domain votes written to " << g.out << '\n';
  });
}

void add_condorcet(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("condorcet", "Condorcet winners over the realizations of a position matrix");
  auto matrix = std::make_shared<std::string>(), findWitness = std::make_shared<std::string>();
  auto candidate = std::make_shared<int>(0);
  auto checkCondition = std::make_shared<bool>(false), countWinners = std::make_shared<bool>(false);
  auto opt = std::make_shared<CwSearchOptions>();
  cmd->add_option("--matrix", *matrix)->check(CLI::ExistingFile);
  cmd->add_option("--candidate", *candidate)->check(CLI::NonNegativeNumber);
  cmd->add_flag("--check-condition", *checkCondition, "Only evaluate the necessary condition");
  cmd->add_option("--find-witness", *findWitness, "Write a realization where the candidate wins");
  cmd->add_flag("--count-winners", *countWinners, "Count candidates that win in some realization");
  cmd->add_option("--branch-limit", opt->branchNodeLimit, "Branch-and-bound node budget before backtracking");
  cmd->add_option("--node-limit", opt->nodeLimit, "Backtracking node budget, 0 = unlimited");

  auto* report = cmd->add_subcommand("report", "Per-candidate verdicts for every matrix of a dataset");
  auto dataset = std::make_shared<std::string>();
  report->add_option("--dataset", *dataset)->required()->check(CLI::ExistingDirectory);
  report->callback([=, &g] {
    require_out(g, "condorcet report");
    ExperimentConfig cfg;
    cfg.seed = g.seed;
    cfg.jobs = g.jobs;
    cfg.datasetDir = *dataset;
    cfg.condorcet = *opt;
    cfg.condorcet.seed = g.seed;
    cfg.keepWitnesses = true;
    const auto rows = run_condorcet_experiment(cfg, experiment_dataset(cfg));
    write_file_atomic(g.out, condorcet_candidate_csv(rows));
    const auto s = summarize(rows);
    std::cout << "mean possible winners " << s.meanPossible << ", undecided " << s.undecided << '\n';
  });

  cmd->callback([=, &g] {
    if (cmd->got_subcommand(report)) return;
    if (matrix->empty()) throw CLI::ValidationError("--matrix", "condorcet needs --matrix or the report subcommand");
    const PositionMatrix x = load_position_matrix(*matrix);
    opt->seed = g.seed;
    if (*countWinners) {
      const PossibleWinners w = count_possible_cw(x, *opt);
      std::cout << w.count;
      for (int c : w.candidates) std::cout << ' ' << c;
      std::cout << '\n';
      if (!w.undecided.empty()) throw BoundExceeded(std::to_string(w.undecided.size()) + " candidates undecided");
      if (w.count == 0) throw CLI::RuntimeError(kNegative);
      return;
    }
    const bool cond = necessary_condition(x, *candidate);
    if (*checkCondition) {
      std::cout << "condition " << (cond ? "holds" : "fails") << '\n';
      if (!cond) throw CLI::RuntimeError(kNegative);
      return;
    }
    const CwSearchResult r = search_realization_with_cw(x, *candidate, *opt);
    std::cout << "condition " << (cond ? "holds" : "fails") << ", winner possible: " << to_string(r.status)
              << " (" << r.decidedBy << ")\n";
    if (r.witness && !findWitness->empty()) save(*findWitness, *r.witness);
    if (r.status == CwStatus::unknown) throw BoundExceeded("search budget exhausted");
    if (r.status == CwStatus::absent) throw CLI::RuntimeError(kNegative);
  });
}

void add_map(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("map", "Distance matrices, 2D embeddings and SVG maps");
  cmd->require_subcommand(1);

  auto* dist = cmd->add_subcommand("distances", "All-pairs positionwise distances of a dataset plus UN/ID anchors");
  auto dataset = std::make_shared<std::string>();
  auto noAnchors = std::make_shared<bool>(false);
  dist->add_option("--dataset", *dataset)->required()->check(CLI::ExistingDirectory);
  dist->add_flag("--no-anchors", *noAnchors);
  dist->callback([=, &g] {
    std::vector<std::string> labels;
    std::vector<PositionMatrix> xs;
    for (const auto& e : load_dataset(*dataset)) {
      labels.push_back(e.id);
      xs.push_back(position_matrix_of(e.election));
    }
    const auto d = all_pairs_positionwise(labels, xs, !*noAnchors, g.jobs);
    for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';
    std::ostringstream s;
    write_distance_csv(s, d);
    emit(g, s.str());
  });

  auto* embed = cmd->add_subcommand("embed", "SMACOF embedding of a distance matrix");
  auto distances = std::make_shared<std::string>();
  auto iterations = std::make_shared<int>(300), restarts = std::make_shared<int>(8);
  embed->add_option("distances", *distances)->required()->check(CLI::ExistingFile);
  embed->add_option("--iterations", *iterations)->check(CLI::PositiveNumber);
  embed->add_option("--restarts", *restarts)->check(CLI::PositiveNumber);
  embed->callback([=, &g] {
    std::ifstream in(*distances);
    const Embedding e = embed_2d(read_distance_csv(in), g.seed, *iterations, *restarts);
    std::ostringstream s;
    write_embedding_csv(s, e);
    emit(g, s.str());
    std::cerr << "normalized stress " << e.stress << '\n';
  });

  auto* render = cmd->add_subcommand("render", "Render an embedding as an SVG map");
  auto coords = std::make_shared<std::string>(), manifest = std::make_shared<std::string>();
  auto overlay = std::make_shared<std::string>();
  render->add_option("coords", *coords)->required()->check(CLI::ExistingFile);
  render->add_option("manifest", *manifest)->required()->check(CLI::ExistingFile);
  render->add_option("--overlay", *overlay, "id,value CSV coloring the points")->check(CLI::ExistingFile);
  render->callback([=, &g] {
    std::ifstream in(*coords);
    const auto points = map_points(read_embedding_csv(in), read_manifest(*manifest));
    if (overlay->empty()) {
      emit(g, render_map_svg(points));
    } else {
      std::ifstream ov(*overlay);
      emit(g, render_overlay_svg(points, read_values_csv(ov)));
    }
  });
}

void add_experiment(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("experiment", "End-to-end experiment drivers");
  cmd->require_subcommand(1);
  auto cfg = std::make_shared<ExperimentConfig>();
  auto bind_common = [&, cfg](CLI::App* sub) {
    sub->add_option("--preset", cfg->preset)->check(CLI::IsMember({"8x80", "4x16", "custom"}));
    sub->add_option("--dataset", cfg->datasetDir, "Use this dataset directory instead of generating the preset")
        ->check(CLI::ExistingDirectory);
    sub->add_flag("--quiet", [cfg](std::int64_t) { cfg->progress = nullptr; });
  };
  auto prepare = [cfg, &g](const char* what) {
    require_out(g, what);
    cfg->seed = g.seed;
    cfg->jobs = g.jobs;
    cfg->outDir = g.out;
    fs::create_directories(g.out);
    return experiment_dataset(*cfg);
  };
  cfg->progress = [](const std::string& line) { std::cerr << line << '\n'; };

  auto* dist = cmd->add_subcommand("distance", "Sampled isomorphic swap distances between realizations");
  bind_common(dist);
  dist->add_option("--pairs", cfg->pairSamples, "Sampled pairs per matrix")->check(CLI::PositiveNumber);
  dist->add_option("--enumeration-cap", cfg->enumerationCap, "Enumerate all realizations up to this count");
  dist->callback([=, &g] {
    const auto data = prepare("experiment distance");
    const auto rows = run_distance_experiment(*cfg, data);
    write_file_atomic((fs::path(g.out) / "distance.csv").string(), distance_report_csv(rows));
    std::vector<OverlayValue> values;
    int above = 0;
    for (const auto& r : rows) {
      values.push_back({r.id, r.maxNorm()});
      above += r.maxNorm() > 0.2;
    }
    std::ostringstream s;
    write_values_csv(s, values);
    write_file_atomic((fs::path(g.out) / "distance.values.csv").string(), s.str());
    std::cout << above << " of " << rows.size() << " matrices have max distance above 20% of the normalizer\n";
  });

  auto* structure = cmd->add_subcommand("structure", "Structured-domain recognition for every matrix");
  bind_common(structure);
  structure->callback([=, &g] {
    const auto data = prepare("experiment structure");
    const auto rows = run_structure_experiment(*cfg, data);
    write_file_atomic((fs::path(g.out) / "structure.csv").string(), structure_report_csv(rows));
    std::cout << "model,total,sp,caterpillar,balanced,none\n";
    for (const auto& [model, t] : structure_crosstab(rows))
      std::cout << model << ',' << t[0] << ',' << t[1] << ',' << t[2] << ',' << t[3] << ',' << t[4] << '\n';
  });

  auto* cw = cmd->add_subcommand("condorcet", "Possible Condorcet winners for every matrix (checkpointed)");
  bind_common(cw);
  cw->add_option("--branch-limit", cfg->condorcet.branchNodeLimit);
  cw->add_option("--node-limit", cfg->condorcet.nodeLimit);
  cw->add_option("--probe-steps", cfg->condorcet.soundnessProbeSteps,
                 "Heuristic witness search on candidates failing the condition");
  cw->callback([=, &g] {
    const auto data = prepare("experiment condorcet");
    cfg->condorcet.seed = g.seed;
    const auto rows = run_condorcet_experiment(*cfg, data);
    write_file_atomic((fs::path(g.out) / "condorcet.csv").string(), condorcet_report_csv(rows));
    std::vector<OverlayValue> values;
    for (const auto& r : rows) values.push_back({r.id, double(r.possible)});
    std::ostringstream s;
    write_values_csv(s, values);
    write_file_atomic((fs::path(g.out) / "condorcet.values.csv").string(), s.str());
    const auto sum = summarize(rows);
    std::cout << "mean possible winners " << sum.meanPossible << "\nmatrices with none " << sum.matricesWithZero
              << "\nsampled elections without a winner " << sum.sampledWithoutWinner << "\ngap candidates "
              << sum.gapCandidates << "\nsoundness violations " << sum.soundnessViolations << "\nundecided "
              << sum.undecided << '\n';
  });
}

std::string version_text() {
  std::ostringstream s;
  s << "posmat 1.0\n"
    << "election " << kElectionFormat << "\nmatrix " << kMatrixFormat << "\nmanifest " << kManifestSchema
    << "\ndistance-report " << kDistanceReportSchema << "\nstructure-report " << kStructureReportSchema
    << "\ncondorcet-report " << kCondorcetReportSchema << "\ncondorcet-candidates " << kCondorcetCandidateSchema
    << "\ndistance-matrix posmat-distances/1\nembedding posmat-embedding/1\nmap posmat-map/1\nvalues posmat-values/1";
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Position matrices of ordinal elections"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", version_text());
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("-o,--out", g.out, "Output file or directory");

  add_sample(app, g);
  add_dataset(app, g);
  add_matrix(app, g);
  add_realize(app, g);
  add_distance(app, g);
  add_recognize(app, g);
  add_fixture(app, g);
  add_condorcet(app, g);
  add_map(app, g);
  add_experiment(app, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const BoundExceeded& e) {
    std::cerr << "bound exceeded: " << e.what() << '\n';
    return kBound;
  } catch (const posmat::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
