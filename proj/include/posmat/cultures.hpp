#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "posmat/core.hpp"
#include "posmat/random.hpp"

namespace posmat {

enum class Model {
  ic,
  urn,
  mallows_norm,
  euclidean,
  conitzer,
  walsh,
  spoc,
  gs_balanced,
  gs_caterpillar,
  single_crossing
};

enum class Geometry { cube, sphere };

struct CultureSpec {
  Model model = Model::ic;
  // Urn reinforcement; drawn per election from Gamma(0.8, 1) when unset.
  std::optional<double> alpha;
  // Normalized Mallows dispersion; drawn per election from U[0, 1] when unset.
  std::optional<double> relphi;
  std::optional<Vote> center;  // identity when unset
  int dim = 1;
  Geometry geometry = Geometry::cube;

  // Stable family label, e.g. "euclidean_3d_sphere".
  std::string name() const;
};

std::optional<CultureSpec> culture_from_name(const std::string& name);

struct DatasetSpec {
  int m = 8;
  int n = 80;
  std::vector<std::pair<CultureSpec, int>> blend;
  std::uint64_t seed = 0;
};

struct DatasetEntry {
  std::string id;
  std::string model;
  std::optional<double> parameter;  // alpha or relphi when the model has one
  Election election;
};

Election sample_ic(int m, int n, Rng& rng);
Election sample_urn(int m, int n, double alpha, Rng& rng);

double mallows_expected_swaps(int m, double phi);
double phi_from_rel_phi(int m, double relphi);
Election sample_mallows(int m, int n, double phi, const Vote& center, Rng& rng);
Election sample_mallows_norm(int m, int n, double relphi, const Vote& center, Rng& rng);

Election sample_euclidean(int m, int n, int dim, Geometry geometry, Rng& rng);

Election sample_conitzer(int m, int n, const SocietalAxis& axis, Rng& rng);
Election sample_conitzer(int m, int n, Rng& rng);
// Cyclic axis: extensions wrap around.
Election sample_spoc(int m, int n, const SocietalAxis& axis, Rng& rng);
Election sample_spoc(int m, int n, Rng& rng);

// The index-th (of 2^(m-1)) vote single-peaked on the axis. Bit k of the
// index says which end of the remaining interval takes position m-1-k.
Vote walsh_vote(const SocietalAxis& axis, std::uint64_t index);
Election sample_walsh(int m, int n, const SocietalAxis& axis, Rng& rng);
Election sample_walsh(int m, int n, Rng& rng);

GSTree canonical_tree(int m, TreeShape shape);
Election sample_group_separable(int m, int n, TreeShape shape, Rng& rng);

// Random maximal single-crossing chain, then sorted uniform picks from it.
Election sample_single_crossing(int m, int n, Rng& rng);

// Draws any unset parameter first, reporting it through drawnParameter.
Election sample(const CultureSpec& spec, int m, int n, Rng& rng,
                std::optional<double>* drawnParameter = nullptr);

// "8x80" (m=8, n=80) and "4x16" (m=4, n=16) share the same 480-election blend.
DatasetSpec dataset_preset(const std::string& name, std::uint64_t seed);
std::vector<DatasetEntry> build_dataset(const DatasetSpec& spec);

}  // namespace posmat
