#pragma once

#include <string>
#include <vector>

#include "posmat/cultures.hpp"
#include "posmat/mapgen.hpp"

namespace posmat::tools {

// Schema tags written as the first line of every CSV the tools produce.
inline constexpr const char* kManifestSchema = "posmat-manifest/1";
inline constexpr const char* kDistanceReportSchema = "posmat-distance-report/1";
inline constexpr const char* kStructureReportSchema = "posmat-structure-report/1";
inline constexpr const char* kCondorcetReportSchema = "posmat-condorcet-report/1";
inline constexpr const char* kCondorcetCandidateSchema = "posmat-condorcet-candidates/1";
inline constexpr const char* kElectionFormat = "elec/1";
inline constexpr const char* kMatrixFormat = "pmx-fmx/1";

std::string schema_line(const char* schema);
// Consumes the schema line and the column header, throwing ParseError on mismatch.
void expect_header(std::istream& in, const char* schema, const std::string& header);

// A dataset directory holds <id>.elec files and manifest.csv (id,model,parameter).
void save_dataset(const std::string& dir, const std::vector<DatasetEntry>& entries);
std::vector<DatasetEntry> load_dataset(const std::string& dir);
std::vector<ManifestRow> read_manifest(const std::string& path);

// Writes to path + ".tmp" and renames over path.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace posmat::tools
