#include "experiments.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "dataset_io.hpp"
#include "posmat/domains.hpp"
#include "posmat/metric.hpp"
#include "posmat/realize.hpp"

namespace fs = std::filesystem;

namespace posmat::tools {

namespace {

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(s);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

char status_char(CwStatus s) { return s == CwStatus::found ? 'y' : s == CwStatus::absent ? 'n' : 'u'; }

CwStatus status_of(char ch, int line) {
  switch (ch) {
    case 'y': return CwStatus::found;
    case 'n': return CwStatus::absent;
    case 'u': return CwStatus::unknown;
  }
  throw ParseError(line, std::string("bad status '") + ch + "'");
}

std::string encode_election(const Election& e) {
  std::string out;
  for (std::size_t k = 0; k < e.votes().size(); ++k) {
    if (k) out += ';';
    for (int i = 0; i < e.m(); ++i) {
      if (i) out += ' ';
      out += std::to_string(e.votes()[k][i]);
    }
  }
  return out;
}

const std::string kDistanceHeader = "id,model,normalizer,pairs,enumerated,min_raw,avg_raw,max_raw,min,avg,max";
const std::string kStructureHeader = "id,model,sp,caterpillar,balanced";
const std::string kCondorcetHeader = "id,model,sampled_cw,possible,undecided,condition,exact,decided_by";

}  // namespace

std::vector<DatasetEntry> experiment_dataset(const ExperimentConfig& cfg) {
  if (!cfg.datasetDir.empty()) return load_dataset(cfg.datasetDir);
  if (cfg.preset == "custom") throw InvalidInput("a custom experiment needs a dataset directory");
  return build_dataset(dataset_preset(cfg.preset, cfg.seed));
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failureLock;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= count) return;
        try {
          fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> g(failureLock);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<DistanceRow> run_distance_experiment(const ExperimentConfig& cfg, const std::vector<DatasetEntry>& data) {
  std::vector<DistanceRow> rows(data.size());
  std::mutex progressLock;
  parallel_for(data.size(), cfg.jobs, [&](std::size_t k) {
    const PositionMatrix x = position_matrix_of(data[k].election);
    DistanceRow row{data[k].id, data[k].model, max_swap_distance(x.m(), x.n())};
    std::vector<std::int64_t> values;
    Rng rng = derive_stream(cfg.seed ^ 0xd157a11ceULL, k);
    const bool countable = within_counting_bounds(x.m(), x.n());
    std::optional<RealizationCounter> counter;
    if (countable) counter.emplace(x);
    if (countable && counter->count() <= BigInt(cfg.enumerationCap)) {
      std::vector<Election> all;
      counter->enumerate([&](const Election& e) {
        all.push_back(e);
        return true;
      });
      for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b) values.push_back(isomorphic_swap(all[a], all[b]).raw);
      if (values.empty()) values.push_back(0);
      row.enumerated = true;
    } else {
      // One counter per matrix so its memo serves every draw.
      auto draw = [&] { return counter ? counter->sample_uniform(rng) : sample_realization_naive(x, rng); };
      for (int s = 0; s < cfg.pairSamples; ++s) {
        Election a = draw();
        Election b = draw();
        values.push_back(isomorphic_swap(a, b).raw);
      }
    }
    row.pairs = row.enumerated && values.size() == 1 && values[0] == 0 ? 0 : static_cast<int>(values.size());
    row.minRaw = values.empty() ? 0 : *std::min_element(values.begin(), values.end());
    row.maxRaw = values.empty() ? 0 : *std::max_element(values.begin(), values.end());
    double sum = 0;
    for (auto v : values) sum += static_cast<double>(v);
    row.avgRaw = values.empty() ? 0 : sum / static_cast<double>(values.size());
    rows[k] = row;
    if (cfg.progress) {
      std::lock_guard<std::mutex> g(progressLock);
      cfg.progress("distance " + row.id + " max=" + fmt(row.maxNorm(), 4));
    }
  });
  return rows;
}

std::string distance_report_csv(const std::vector<DistanceRow>& rows) {
  std::ostringstream out;
  out << schema_line(kDistanceReportSchema) << '\n' << kDistanceHeader << '\n';
  for (const auto& r : rows)
    out << r.id << ',' << r.model << ',' << r.normalizer << ',' << r.pairs << ',' << (r.enumerated ? 1 : 0) << ','
        << r.minRaw << ',' << fmt(r.avgRaw) << ',' << r.maxRaw << ',' << fmt(r.minNorm()) << ',' << fmt(r.avgNorm())
        << ',' << fmt(r.maxNorm()) << '\n';
  return out.str();
}

std::vector<StructureRow> run_structure_experiment(const ExperimentConfig& cfg,
                                                   const std::vector<DatasetEntry>& data) {
  std::vector<StructureRow> rows(data.size());
  std::mutex progressLock;
  parallel_for(data.size(), cfg.jobs, [&](std::size_t k) {
    const FrequencyMatrix f(position_matrix_of(data[k].election));
    StructureRow row{data[k].id, data[k].model};
    row.sp = recognize_any(f, Family::sp).has_value();
    row.caterpillar = recognize_any(f, Family::gs_caterpillar).has_value();
    row.balanced = is_power_of_two(f.m()) && recognize_any(f, Family::gs_balanced).has_value();
    rows[k] = row;
    if (cfg.progress) {
      std::lock_guard<std::mutex> g(progressLock);
      cfg.progress("structure " + row.id);
    }
  });
  return rows;
}

std::string structure_report_csv(const std::vector<StructureRow>& rows) {
  std::ostringstream out;
  out << schema_line(kStructureReportSchema) << '\n' << kStructureHeader << '\n';
  for (const auto& r : rows)
    out << r.id << ',' << r.model << ',' << r.sp << ',' << r.caterpillar << ',' << r.balanced << '\n';
  return out.str();
}

std::map<std::string, std::array<int, 5>> structure_crosstab(const std::vector<StructureRow>& rows) {
  std::map<std::string, std::array<int, 5>> out;
  for (const auto& r : rows) {
    auto& t = out[r.model];
    ++t[0];
    t[1] += r.sp;
    t[2] += r.caterpillar;
    t[3] += r.balanced;
    t[4] += !(r.sp || r.caterpillar || r.balanced);
  }
  return out;
}

std::vector<CondorcetRow> run_condorcet_experiment(const ExperimentConfig& cfg,
                                                   const std::vector<DatasetEntry>& data) {
  std::vector<CondorcetRow> rows(data.size());
  std::vector<char> done(data.size(), 0);
  std::string checkpoint;
  if (!cfg.outDir.empty()) {
    fs::create_directories(cfg.outDir);
    checkpoint = (fs::path(cfg.outDir) / "condorcet.checkpoint.csv").string();
    if (fs::exists(checkpoint)) {
      std::map<std::string, std::size_t> index;
      for (std::size_t k = 0; k < data.size(); ++k) index[data[k].id] = k;
      for (auto& r : parse_condorcet_report(read_file(checkpoint))) {
        auto it = index.find(r.id);
        if (it == index.end()) throw InvalidInput("checkpoint row '" + r.id + "' is not in the dataset");
        rows[it->second] = std::move(r);
        done[it->second] = 1;
      }
    }
  }
  std::vector<std::size_t> todo;
  for (std::size_t k = 0; k < data.size(); ++k)
    if (!done[k]) todo.push_back(k);
  std::mutex lock;
  parallel_for(todo.size(), cfg.jobs, [&](std::size_t t) {
    const std::size_t k = todo[t];
    const PositionMatrix x = position_matrix_of(data[k].election);
    CondorcetRow row{data[k].id, data[k].model};
    row.sampledHasWinner = condorcet_winner(data[k].election).has_value();
    CwSearchOptions opt = cfg.condorcet;
    opt.seed = cfg.condorcet.seed ^ k;
    for (int c = 0; c < x.m(); ++c) {
      const bool cond = necessary_condition(x, c);
      CwSearchResult r = search_realization_with_cw(x, c, opt);
      if (!cond && opt.soundnessProbeSteps > 0) {
        if (auto w = heuristic_witness(x, c, opt.soundnessProbeSteps, opt.seed)) {
          r.status = CwStatus::found;
          r.witness = std::move(w);
          r.decidedBy = "soundness-probe";
        }
      }
      row.condition.push_back(cond);
      row.exact.push_back(r.status);
      row.decidedBy.push_back(r.decidedBy);
      row.witness.push_back(cfg.keepWitnesses && r.witness ? encode_election(*r.witness) : "");
      row.possible += r.status == CwStatus::found;
      row.undecided += r.status == CwStatus::unknown;
    }
    std::lock_guard<std::mutex> g(lock);
    rows[k] = std::move(row);
    done[k] = 1;
    if (!checkpoint.empty()) {
      std::vector<CondorcetRow> finished;
      for (std::size_t j = 0; j < data.size(); ++j)
        if (done[j]) finished.push_back(rows[j]);
      write_file_atomic(checkpoint, condorcet_report_csv(finished));
    }
    if (cfg.progress) cfg.progress("condorcet " + rows[k].id + " possible=" + std::to_string(rows[k].possible));
  });
  return rows;
}

CondorcetSummary summarize(const std::vector<CondorcetRow>& rows) {
  CondorcetSummary s;
  long total = 0;
  for (const auto& r : rows) {
    total += r.possible;
    s.matricesWithZero += r.possible == 0;
    s.sampledWithoutWinner += !r.sampledHasWinner;
    for (std::size_t c = 0; c < r.exact.size(); ++c) {
      s.gapCandidates += r.condition[c] && r.exact[c] == CwStatus::absent;
      s.soundnessViolations += !r.condition[c] && r.exact[c] == CwStatus::found;
      s.undecided += r.exact[c] == CwStatus::unknown;
    }
  }
  s.meanPossible = rows.empty() ? 0 : double(total) / double(rows.size());
  return s;
}

std::string condorcet_report_csv(const std::vector<CondorcetRow>& rows) {
  std::ostringstream out;
  out << schema_line(kCondorcetReportSchema) << '\n' << kCondorcetHeader << '\n';
  for (const auto& r : rows) {
    out << r.id << ',' << r.model << ',' << r.sampledHasWinner << ',' << r.possible << ',' << r.undecided << ',';
    for (bool b : r.condition) out << (b ? '1' : '0');
    out << ',';
    for (CwStatus s : r.exact) out << status_char(s);
    out << ',';
    for (std::size_t c = 0; c < r.decidedBy.size(); ++c) out << (c ? ";" : "") << r.decidedBy[c];
    out << '\n';
  }
  return out.str();
}

std::vector<CondorcetRow> parse_condorcet_report(const std::string& csv) {
  std::istringstream in(csv);
  expect_header(in, kCondorcetReportSchema, kCondorcetHeader);
  std::vector<CondorcetRow> rows;
  std::string line;
  int lineNo = 2;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != 8) throw ParseError(lineNo, "expected 8 columns");
    CondorcetRow r{cells[0], cells[1]};
    try {
      r.sampledHasWinner = std::stoi(cells[2]) != 0;
      r.possible = std::stoi(cells[3]);
      r.undecided = std::stoi(cells[4]);
    } catch (const std::exception&) {
      throw ParseError(lineNo, "bad integer column");
    }
    for (char ch : cells[5]) {
      if (ch != '0' && ch != '1') throw ParseError(lineNo, "bad condition column");
      r.condition.push_back(ch == '1');
    }
    for (char ch : cells[6]) r.exact.push_back(status_of(ch, lineNo));
    r.decidedBy = split(cells[7], ';');
    if (r.exact.size() != r.condition.size() || r.decidedBy.size() != r.exact.size())
      throw ParseError(lineNo, "per-candidate columns differ in length");
    r.witness.assign(r.exact.size(), "");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string condorcet_candidate_csv(const std::vector<CondorcetRow>& rows) {
  std::ostringstream out;
  out << schema_line(kCondorcetCandidateSchema) << "\nid,candidate,condition,exact,witness\n";
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.exact.size(); ++c)
      out << r.id << ',' << c << ',' << r.condition[c] << ',' << to_string(r.exact[c]) << ','
          << (c < r.witness.size() ? r.witness[c] : "") << '\n';
  return out.str();
}

}  // namespace posmat::tools
