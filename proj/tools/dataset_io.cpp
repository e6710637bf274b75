#include "dataset_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "posmat/io.hpp"

namespace fs = std::filesystem;

namespace posmat::tools {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string param_text(const std::optional<double>& p) {
  if (!p) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", *p);
  return buf;
}

}  // namespace

std::string schema_line(const char* schema) { return std::string("# schema: ") + schema; }

void expect_header(std::istream& in, const char* schema, const std::string& header) {
  std::string line;
  if (!std::getline(in, line) || line != schema_line(schema))
    throw ParseError(1, "expected '" + schema_line(schema) + "'");
  if (!std::getline(in, line) || line != header) throw ParseError(2, "expected header '" + header + "'");
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw Error("failed writing " + tmp);
  }
  fs::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_dataset(const std::string& dir, const std::vector<DatasetEntry>& entries) {
  fs::create_directories(dir);
  std::ostringstream manifest;
  manifest << schema_line(kManifestSchema) << "\nid,model,parameter\n";
  for (const auto& e : entries) {
    save((fs::path(dir) / (e.id + ".elec")).string(), e.election);
    manifest << e.id << ',' << e.model << ',' << param_text(e.parameter) << '\n';
  }
  write_file_atomic((fs::path(dir) / "manifest.csv").string(), manifest.str());
}

std::vector<ManifestRow> read_manifest(const std::string& path) {
  std::istringstream in(read_file(path));
  expect_header(in, kManifestSchema, "id,model,parameter");
  std::vector<ManifestRow> rows;
  std::string line;
  int lineNo = 2;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != 3) throw ParseError(lineNo, "expected id,model,parameter");
    ManifestRow row{cells[0], cells[1], std::nullopt};
    if (!cells[2].empty()) {
      try {
        row.parameter = std::stod(cells[2]);
      } catch (const std::exception&) {
        throw ParseError(lineNo, "bad parameter '" + cells[2] + "'");
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<DatasetEntry> load_dataset(const std::string& dir) {
  std::vector<DatasetEntry> out;
  for (const auto& row : read_manifest((fs::path(dir) / "manifest.csv").string()))
    out.push_back({row.id, row.model, row.parameter, load_election((fs::path(dir) / (row.id + ".elec")).string())});
  return out;
}

}  // namespace posmat::tools
