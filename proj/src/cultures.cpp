#include "posmat/cultures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

namespace posmat {

namespace {

void require_m(int m) {
  if (m < 1) throw InvalidInput("need at least one candidate");
}

void require_n(int n) {
  if (n < 0) throw InvalidInput("negative number of voters");
}

std::string euclid_name(int dim, Geometry g) {
  return "euclidean_" + std::to_string(dim) + "d_" + (g == Geometry::cube ? "cube" : "sphere");
}

}  // namespace

std::string CultureSpec::name() const {
  switch (model) {
    case Model::ic: return "ic";
    case Model::urn: return "urn";
    case Model::mallows_norm: return "mallows_norm";
    case Model::euclidean: return euclid_name(dim, geometry);
    case Model::conitzer: return "conitzer";
    case Model::walsh: return "walsh";
    case Model::spoc: return "spoc";
    case Model::gs_balanced: return "gs_balanced";
    case Model::gs_caterpillar: return "gs_caterpillar";
    case Model::single_crossing: return "single_crossing";
  }
  return "unknown";
}

std::optional<CultureSpec> culture_from_name(const std::string& name) {
  CultureSpec s;
  static const std::pair<const char*, Model> plain[] = {
      {"ic", Model::ic},
      {"urn", Model::urn},
      {"mallows_norm", Model::mallows_norm},
      {"mallows", Model::mallows_norm},
      {"euclidean", Model::euclidean},
      {"conitzer", Model::conitzer},
      {"walsh", Model::walsh},
      {"spoc", Model::spoc},
      {"gs_balanced", Model::gs_balanced},
      {"gs_caterpillar", Model::gs_caterpillar},
      {"single_crossing", Model::single_crossing}};
  for (auto& [label, model] : plain)
    if (name == label) {
      s.model = model;
      return s;
    }
  // euclidean_<d>d_<cube|sphere>
  const std::string prefix = "euclidean_";
  if (name.rfind(prefix, 0) == 0) {
    std::string rest = name.substr(prefix.size());
    auto d = rest.find("d_");
    if (d == std::string::npos || d == 0) return std::nullopt;
    std::string dims = rest.substr(0, d), geo = rest.substr(d + 2);
    if (!std::all_of(dims.begin(), dims.end(), ::isdigit)) return std::nullopt;
    s.model = Model::euclidean;
    s.dim = std::stoi(dims);
    if (geo == "cube") s.geometry = Geometry::cube;
    else if (geo == "sphere") s.geometry = Geometry::sphere;
    else return std::nullopt;
    return s;
  }
  return std::nullopt;
}

Election sample_ic(int m, int n, Rng& rng) {
  require_m(m);
  require_n(n);
  Election e(m);
  for (int k = 0; k < n; ++k) e.add(random_permutation(m, rng));
  return e;
}

Election sample_urn(int m, int n, double alpha, Rng& rng) {
  require_m(m);
  require_n(n);
  if (!(alpha >= 0)) throw InvalidInput("urn parameter must be nonnegative");
  Election e(m);
  for (int k = 0; k < n; ++k) {
    // k drawn votes each added alpha*m! copies to an urn of m! orders.
    const double copy = k * alpha / (1.0 + k * alpha);
    if (k > 0 && uniform01(rng) < copy)
      e.add(e[uniform_int(rng, 0, k - 1)]);
    else
      e.add(random_permutation(m, rng));
  }
  return e;
}

double mallows_expected_swaps(int m, double phi) {
  if (phi <= 0) return 0;
  if (phi >= 1 - 1e-9) return m * (m - 1) / 4.0;
  double e = m * phi / (1 - phi);
  for (int i = 1; i <= m; ++i) {
    double pi = std::pow(phi, i);
    e -= i * pi / (1 - pi);
  }
  return e;
}

double phi_from_rel_phi(int m, double relphi) {
  if (!(relphi >= 0 && relphi <= 1)) throw InvalidInput("relphi must lie in [0, 1]");
  if (relphi == 0) return 0;
  if (relphi == 1 || m <= 1) return relphi == 1 ? 1 : 0;
  const double target = relphi * m * (m - 1) / 4.0;
  double lo = 0, hi = 1;
  while (hi - lo > 1e-12) {
    double mid = (lo + hi) / 2;
    if (mallows_expected_swaps(m, mid) < target) lo = mid;
    else hi = mid;
  }
  return (lo + hi) / 2;
}

Election sample_mallows(int m, int n, double phi, const Vote& center, Rng& rng) {
  require_m(m);
  require_n(n);
  require_permutation(center, m, "Mallows center");
  if (!(phi >= 0 && phi <= 1)) throw InvalidInput("Mallows dispersion must lie in [0, 1]");
  std::vector<double> weight(m);
  for (int j = 0; j < m; ++j) weight[j] = std::pow(phi, j);
  weight[0] = 1;
  Election e(m);
  for (int k = 0; k < n; ++k) {
    Vote v;
    v.reserve(m);
    for (int i = 0; i < m; ++i) {
      // j = number of already placed candidates the new one jumps over.
      double total = 0;
      for (int j = 0; j <= i; ++j) total += weight[j];
      double u = uniform01(rng) * total;
      int j = 0;
      while (j < i && u >= weight[j]) u -= weight[j++];
      v.insert(v.end() - j, center[i]);
    }
    e.add(std::move(v));
  }
  return e;
}

Election sample_mallows_norm(int m, int n, double relphi, const Vote& center, Rng& rng) {
  return sample_mallows(m, n, phi_from_rel_phi(m, relphi), center, rng);
}

Election sample_euclidean(int m, int n, int dim, Geometry geometry, Rng& rng) {
  require_m(m);
  require_n(n);
  if (dim < 1) throw InvalidInput("Euclidean dimension must be positive");
  boost::random::normal_distribution<double> gauss;
  auto point = [&] {
    std::vector<double> p(dim);
    if (geometry == Geometry::cube) {
      for (auto& c : p) c = uniform01(rng);
    } else {
      double norm = 0;
      do {
        norm = 0;
        for (auto& c : p) {
          c = gauss(rng);
          norm += c * c;
        }
      } while (norm == 0);
      norm = std::sqrt(norm);
      for (auto& c : p) c /= norm;
    }
    return p;
  };
  std::vector<std::vector<double>> cand(m);
  for (auto& c : cand) c = point();
  Election e(m);
  std::vector<double> dist(m);
  for (int k = 0; k < n; ++k) {
    auto p = point();
    for (int c = 0; c < m; ++c) {
      double s = 0;
      for (int t = 0; t < dim; ++t) s += (p[t] - cand[c][t]) * (p[t] - cand[c][t]);
      dist[c] = s;
    }
    Vote v = identity_vote(m);
    std::stable_sort(v.begin(), v.end(), [&](int a, int b) { return dist[a] < dist[b]; });
    e.add(std::move(v));
  }
  return e;
}

namespace {

Election interval_growth(int m, int n, const SocietalAxis& axis, bool cyclic, Rng& rng) {
  require_m(m);
  require_n(n);
  if (axis.m() != m) throw InvalidInput("axis size differs from m");
  Election e(m);
  for (int k = 0; k < n; ++k) {
    Vote v;
    v.reserve(m);
    int lo = uniform_int(rng, 0, m - 1), hi = lo;
    v.push_back(axis.order[lo]);
    for (int step = 1; step < m; ++step) {
      bool left;
      if (cyclic) left = coin(rng);
      else if (lo == 0) left = false;
      else if (hi == m - 1) left = true;
      else left = coin(rng);
      if (left) {
        lo = (lo - 1 + m) % m;
        v.push_back(axis.order[lo]);
      } else {
        hi = (hi + 1) % m;
        v.push_back(axis.order[hi]);
      }
    }
    e.add(std::move(v));
  }
  return e;
}

}  // namespace

Election sample_conitzer(int m, int n, const SocietalAxis& axis, Rng& rng) {
  return interval_growth(m, n, axis, false, rng);
}

Election sample_conitzer(int m, int n, Rng& rng) {
  require_m(m);
  SocietalAxis axis(random_permutation(m, rng));
  return sample_conitzer(m, n, axis, rng);
}

Election sample_spoc(int m, int n, const SocietalAxis& axis, Rng& rng) {
  return interval_growth(m, n, axis, true, rng);
}

Election sample_spoc(int m, int n, Rng& rng) {
  require_m(m);
  SocietalAxis axis(random_permutation(m, rng));
  return sample_spoc(m, n, axis, rng);
}

Vote walsh_vote(const SocietalAxis& axis, std::uint64_t index) {
  const int m = axis.m();
  Vote v(m);
  int lo = 0, hi = m - 1;
  for (int pos = m - 1; pos > 0; --pos) {
    if ((index >> (m - 1 - pos)) & 1) v[pos] = axis.order[hi--];
    else v[pos] = axis.order[lo++];
  }
  v[0] = axis.order[lo];
  return v;
}

Election sample_walsh(int m, int n, const SocietalAxis& axis, Rng& rng) {
  require_m(m);
  require_n(n);
  if (m > 30) throw BoundExceeded("Walsh sampling supports at most 30 candidates");
  if (axis.m() != m) throw InvalidInput("axis size differs from m");
  const std::uint64_t count = std::uint64_t{1} << (m - 1);
  Election e(m);
  for (int k = 0; k < n; ++k) {
    std::uint64_t index =
        boost::random::uniform_int_distribution<std::uint64_t>(0, count - 1)(rng);
    e.add(walsh_vote(axis, index));
  }
  return e;
}

Election sample_walsh(int m, int n, Rng& rng) {
  require_m(m);
  if (m > 30) throw BoundExceeded("Walsh sampling supports at most 30 candidates");
  SocietalAxis axis(random_permutation(m, rng));
  return sample_walsh(m, n, axis, rng);
}

GSTree canonical_tree(int m, TreeShape shape) { return GSTree(shape, identity_vote(m)); }

namespace {

void frontier(const GSTree& t, int lo, int hi, Rng& rng, Vote& out) {
  if (hi - lo == 1) {
    out.push_back(t.leafOrder[lo]);
    return;
  }
  const int mid = t.shape == TreeShape::caterpillar ? lo + 1 : lo + (hi - lo) / 2;
  if (coin(rng)) {
    frontier(t, mid, hi, rng, out);
    frontier(t, lo, mid, rng, out);
  } else {
    frontier(t, lo, mid, rng, out);
    frontier(t, mid, hi, rng, out);
  }
}

}  // namespace

Election sample_group_separable(int m, int n, TreeShape shape, Rng& rng) {
  require_m(m);
  require_n(n);
  GSTree t = canonical_tree(m, shape);
  Election e(m);
  for (int k = 0; k < n; ++k) {
    Vote v;
    v.reserve(m);
    frontier(t, 0, m, rng, v);
    e.add(std::move(v));
  }
  return e;
}

Election sample_single_crossing(int m, int n, Rng& rng) {
  require_m(m);
  require_n(n);
  Vote start = random_permutation(m, rng);
  Vote startPos = inverse(start);
  std::vector<Vote> chain{start};
  Vote cur = start;
  std::vector<int> allowed;
  for (;;) {
    allowed.clear();
    for (int k = 0; k + 1 < m; ++k)
      if (startPos[cur[k]] < startPos[cur[k + 1]]) allowed.push_back(k);
    if (allowed.empty()) break;
    int k = allowed[uniform_int(rng, 0, static_cast<int>(allowed.size()) - 1)];
    std::swap(cur[k], cur[k + 1]);
    chain.push_back(cur);
  }
  std::vector<int> picks(n);
  for (auto& p : picks) p = uniform_int(rng, 0, static_cast<int>(chain.size()) - 1);
  std::sort(picks.begin(), picks.end());
  Election e(m);
  for (int p : picks) e.add(chain[p]);
  return e;
}

Election sample(const CultureSpec& spec, int m, int n, Rng& rng,
                std::optional<double>* drawnParameter) {
  std::optional<double> param;
  Election e;
  switch (spec.model) {
    case Model::ic: e = sample_ic(m, n, rng); break;
    case Model::urn: {
      double a = spec.alpha ? *spec.alpha
                            : boost::random::gamma_distribution<double>(0.8, 1.0)(rng);
      param = a;
      e = sample_urn(m, n, a, rng);
      break;
    }
    case Model::mallows_norm: {
      double r = spec.relphi ? *spec.relphi : uniform01(rng);
      param = r;
      e = sample_mallows_norm(m, n, r, spec.center ? *spec.center : identity_vote(m), rng);
      break;
    }
    case Model::euclidean: e = sample_euclidean(m, n, spec.dim, spec.geometry, rng); break;
    case Model::conitzer: e = sample_conitzer(m, n, rng); break;
    case Model::walsh: e = sample_walsh(m, n, rng); break;
    case Model::spoc: e = sample_spoc(m, n, rng); break;
    case Model::gs_balanced: e = sample_group_separable(m, n, TreeShape::balanced, rng); break;
    case Model::gs_caterpillar:
      e = sample_group_separable(m, n, TreeShape::caterpillar, rng);
      break;
    case Model::single_crossing: e = sample_single_crossing(m, n, rng); break;
  }
  if (drawnParameter) *drawnParameter = param;
  return e;
}

DatasetSpec dataset_preset(const std::string& name, std::uint64_t seed) {
  DatasetSpec d;
  if (name == "8x80") {
    d.m = 8;
    d.n = 80;
  } else if (name == "4x16") {
    d.m = 4;
    d.n = 16;
  } else {
    throw InvalidInput("unknown preset " + name + " (expected 8x80 or 4x16)");
  }
  d.seed = seed;
  auto add = [&](Model model, int count, int dim = 1, Geometry g = Geometry::cube) {
    CultureSpec s;
    s.model = model;
    s.dim = dim;
    s.geometry = g;
    d.blend.emplace_back(s, count);
  };
  add(Model::ic, 20);
  add(Model::conitzer, 20);
  add(Model::walsh, 20);
  add(Model::spoc, 20);
  add(Model::single_crossing, 20);
  for (int dim : {1, 2, 3, 5, 10, 20}) add(Model::euclidean, 20, dim, Geometry::cube);
  for (int dim : {2, 3, 5}) add(Model::euclidean, 20, dim, Geometry::sphere);
  add(Model::gs_balanced, 20);
  add(Model::gs_caterpillar, 20);
  add(Model::mallows_norm, 80);
  add(Model::urn, 80);
  return d;
}

std::vector<DatasetEntry> build_dataset(const DatasetSpec& spec) {
  std::vector<DatasetEntry> out;
  std::uint64_t index = 0;
  for (const auto& [culture, count] : spec.blend) {
    if (count <= 0) throw InvalidInput("dataset blend counts must be positive");
    for (int k = 0; k < count; ++k, ++index) {
      Rng rng = derive_stream(spec.seed, index);
      DatasetEntry entry;
      char id[16];
      std::snprintf(id, sizeof id, "e%04llu", static_cast<unsigned long long>(index));
      entry.id = id;
      entry.model = culture.name();
      entry.election = sample(culture, spec.m, spec.n, rng, &entry.parameter);
      out.push_back(std::move(entry));
    }
  }
  return out;
}

}  // namespace posmat
