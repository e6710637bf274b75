#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "posmat/core.hpp"

namespace posmat {

// Symmetric positionwise distances (raw, on position matrices) with labels.
struct DistanceMatrixFile {
  std::vector<std::string> labels;
  RatMatrix d;
  std::vector<std::string> warnings;
};

// All pairs, plus "UN" and "ID" anchor rows appended last. UN needs m | n and is
// skipped with a warning otherwise.
DistanceMatrixFile all_pairs_positionwise(const std::vector<std::string>& labels,
                                          const std::vector<PositionMatrix>& matrices,
                                          bool anchors = true, int jobs = 1);

// Header "label,<labels>", then one row per label; values in decimal with 12
// fractional digits. Reading parses those decimals exactly.
void write_distance_csv(std::ostream& out, const DistanceMatrixFile& d);
DistanceMatrixFile read_distance_csv(std::istream& in);

struct Embedding {
  std::vector<std::string> labels;
  Eigen::MatrixX2d coords;
  double stress = 0;  // sum (|p_i - p_j| - d_ij)^2 / sum d_ij^2 over i < j
  std::uint64_t seed = 0;
  int iterations = 0;
  int restart = 0;
};

double normalized_stress(const Eigen::MatrixXd& d, const Eigen::MatrixX2d& p);

// Plain SMACOF (Guttman transform) from a given start. Raw stress after each
// iteration is appended to trace when given; it never increases.
Eigen::MatrixX2d smacof(const Eigen::MatrixXd& d, Eigen::MatrixX2d start, int iterations,
                        std::vector<double>* trace = nullptr);

// Best of `restarts` seeded random starts by (stress, restart index).
Embedding embed_2d(const DistanceMatrixFile& d, std::uint64_t seed, int iterations = 300,
                   int restarts = 8);

void write_embedding_csv(std::ostream& out, const Embedding& e);
Embedding read_embedding_csv(std::istream& in);

struct ManifestRow {
  std::string id;
  std::string model;
  std::optional<double> parameter;
};

struct MapPoint {
  std::string id;
  std::string model;
  std::optional<double> parameter;
  double x = 0, y = 0;
};

// Joins coordinates with the manifest; UN and ID get their own model tags.
std::vector<MapPoint> map_points(const Embedding& e, const std::vector<ManifestRow>& manifest);

// id,model,param,x,y with coordinates rounded to 3 decimals.
void write_map_csv(std::ostream& out, const std::vector<MapPoint>& points);

// Fixed palette indexed by an FNV-1a hash of the model name.
std::string model_color(const std::string& model);
double parameter_opacity(const std::string& model, std::optional<double> parameter);

std::string render_map_svg(const std::vector<MapPoint>& points);

struct OverlayValue {
  std::string id;
  double value = 0;
};

// Integral values with at most 16 distinct levels get a discrete legend,
// anything else a continuous one.
std::string render_overlay_svg(const std::vector<MapPoint>& points,
                               const std::vector<OverlayValue>& values);

void write_values_csv(std::ostream& out, const std::vector<OverlayValue>& values);
std::vector<OverlayValue> read_values_csv(std::istream& in);

}  // namespace posmat
