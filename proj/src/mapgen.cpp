#include "posmat/mapgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <boost/random/uniform_real_distribution.hpp>

#include "posmat/io.hpp"
#include "posmat/metric.hpp"
#include "posmat/random.hpp"

namespace posmat {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t k = 0;
  while (k < s.size() && s[k] == ' ') ++k;
  return s.substr(k);
}

bool next_data_line(std::istream& in, std::string& line, int& lineNo) {
  while (std::getline(in, line)) {
    ++lineNo;
    line = strip(line);
    if (!line.empty() && line[0] != '#') return true;
  }
  return false;
}

std::string decimal12(const Rational& q) {
  static const BigInt scale = BigInt(1000000000000LL);
  const bool neg = q < 0;
  Rational a = neg ? Rational(-q) : q;
  Rational scaled = a * Rational(scale) + Rational(1, 2);
  BigInt units = numerator(scaled) / denominator(scaled);
  BigInt whole = units / scale, frac = units % scale;
  std::string f = frac.str();
  f.insert(0, 12 - f.size(), '0');
  return (neg && units != 0 ? "-" : "") + whole.str() + "." + f;
}

Rational parse_decimal(const std::string& token, int lineNo) {
  std::string t = strip(token);
  if (t.find('/') != std::string::npos) return parse_rational(t);
  bool neg = false;
  std::size_t k = 0;
  if (k < t.size() && (t[k] == '-' || t[k] == '+')) neg = t[k++] == '-';
  std::string digits;
  std::size_t fracDigits = 0;
  bool dot = false;
  for (; k < t.size(); ++k) {
    if (t[k] == '.' && !dot) {
      dot = true;
    } else if (t[k] >= '0' && t[k] <= '9') {
      digits += t[k];
      if (dot) ++fracDigits;
    } else {
      throw ParseError(lineNo, "bad decimal '" + t + "'");
    }
  }
  if (digits.empty()) throw ParseError(lineNo, "bad decimal '" + t + "'");
  BigInt num(digits), den(1);
  for (std::size_t i = 0; i < fracDigits; ++i) den *= 10;
  Rational q(num, den);
  return neg ? Rational(-q) : q;
}

double parse_double(const std::string& token, int lineNo) {
  std::string t = strip(token);
  try {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size() || !std::isfinite(v)) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ParseError(lineNo, "bad number '" + t + "'");
  }
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s == "-0.000" || s == "-0.000000000") s.erase(0, 1);
  return s;
}

Eigen::MatrixXd to_double(const RatMatrix& d) {
  Eigen::MatrixXd out(d.rows(), d.cols());
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      out(i, j) = static_cast<double>(d(i, j));
      if (!std::isfinite(out(i, j))) throw InvalidInput("non-finite distance");
    }
  return out;
}

double raw_stress(const Eigen::MatrixXd& d, const Eigen::MatrixX2d& p) {
  double s = 0;
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = i + 1; j < d.rows(); ++j) {
      const double r = (p.row(i) - p.row(j)).norm() - d(i, j);
      s += r * r;
    }
  return s;
}

}  // namespace

DistanceMatrixFile all_pairs_positionwise(const std::vector<std::string>& labels,
                                          const std::vector<PositionMatrix>& matrices,
                                          bool anchors, int jobs) {
  if (labels.size() != matrices.size()) throw InvalidInput("one label per matrix required");
  DistanceMatrixFile out;
  out.labels = labels;
  std::vector<PositionMatrix> all = matrices;
  if (all.empty() && anchors) throw InvalidInput("anchors need at least one matrix for m and n");
  for (const auto& x : all)
    if (x.m() != all[0].m() || x.n() != all[0].n())
      throw InvalidInput("all matrices must share m and n");
  if (anchors) {
    const int m = all[0].m();
    const std::int64_t n = all[0].n();
    if (n % m == 0) {
      all.push_back(un_matrix(m, n));
      out.labels.push_back("UN");
    } else {
      out.warnings.push_back("UN skipped: m does not divide n");
    }
    all.push_back(id_matrix(m, n));
    out.labels.push_back("ID");
  }
  const std::size_t k = all.size();
  std::vector<std::int64_t> raw(k * k, 0);
  auto work = [&](std::size_t start, std::size_t step) {
    for (std::size_t i = start; i < k; i += step)
      for (std::size_t j = i + 1; j < k; ++j) raw[i * k + j] = positionwise_raw(all[i], all[j]);
  };
  const std::size_t workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }
  out.d = RatMatrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      out.d(i, j) = raw[i * k + j];
      out.d(j, i) = raw[i * k + j];
    }
  return out;
}

void write_distance_csv(std::ostream& out, const DistanceMatrixFile& d) {
  out << "# schema: posmat-distances/1\nlabel";
  for (const auto& l : d.labels) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    out << d.labels[i];
    for (std::size_t j = 0; j < d.labels.size(); ++j) out << ',' << decimal12(d.d(i, j));
    out << '\n';
  }
}

DistanceMatrixFile read_distance_csv(std::istream& in) {
  DistanceMatrixFile d;
  std::string line;
  int lineNo = 0;
  if (!next_data_line(in, line, lineNo)) throw ParseError(lineNo, "empty distance file");
  auto header = split_csv(line);
  if (header.empty() || header[0] != "label") throw ParseError(lineNo, "expected header starting with 'label'");
  d.labels.assign(header.begin() + 1, header.end());
  const auto k = static_cast<Eigen::Index>(d.labels.size());
  d.d = RatMatrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!next_data_line(in, line, lineNo)) throw ParseError(lineNo, "missing distance rows");
    auto cells = split_csv(line);
    if (static_cast<Eigen::Index>(cells.size()) != k + 1) throw ParseError(lineNo, "wrong number of cells");
    if (cells[0] != d.labels[i]) throw ParseError(lineNo, "row label does not match header");
    for (Eigen::Index j = 0; j < k; ++j) d.d(i, j) = parse_decimal(cells[j + 1], lineNo);
  }
  if (next_data_line(in, line, lineNo)) throw ParseError(lineNo, "trailing content");
  for (Eigen::Index i = 0; i < k; ++i) {
    if (d.d(i, i) != 0) throw InvalidInput("distance diagonal must be zero");
    for (Eigen::Index j = 0; j < k; ++j)
      if (d.d(i, j) != d.d(j, i) || d.d(i, j) < 0) throw InvalidInput("distances must be symmetric and nonnegative");
  }
  return d;
}

double normalized_stress(const Eigen::MatrixXd& d, const Eigen::MatrixX2d& p) {
  double den = 0;
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = i + 1; j < d.rows(); ++j) den += d(i, j) * d(i, j);
  const double num = raw_stress(d, p);
  return den > 0 ? num / den : num;
}

Eigen::MatrixX2d smacof(const Eigen::MatrixXd& d, Eigen::MatrixX2d x, int iterations,
                        std::vector<double>* trace) {
  const Eigen::Index k = d.rows();
  if (k < 2) return x;
  Eigen::MatrixXd b(k, k);
  for (int it = 0; it < iterations; ++it) {
    b.setZero();
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) {
        if (i == j) continue;
        const double dist = (x.row(i) - x.row(j)).norm();
        if (dist > 0) b(i, j) = -d(i, j) / dist;
      }
    for (Eigen::Index i = 0; i < k; ++i) b(i, i) = -b.row(i).sum();
    x = (b * x) / static_cast<double>(k);
    if (trace) trace->push_back(raw_stress(d, x));
  }
  return x;
}

Embedding embed_2d(const DistanceMatrixFile& file, std::uint64_t seed, int iterations, int restarts) {
  if (iterations < 0 || restarts < 1) throw InvalidInput("iterations must be >= 0 and restarts >= 1");
  const Eigen::MatrixXd d = to_double(file.d);
  const Eigen::Index k = d.rows();
  double spread = 0;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j) spread = std::max(spread, d(i, j));
  if (spread == 0) spread = 1;
  Embedding best;
  best.labels = file.labels;
  best.seed = seed;
  best.iterations = iterations;
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    Rng rng = derive_stream(seed, static_cast<std::uint64_t>(r));
    boost::random::uniform_real_distribution<double> u(-spread / 2, spread / 2);
    Eigen::MatrixX2d start(k, 2);
    for (Eigen::Index i = 0; i < k; ++i) start(i, 0) = u(rng), start(i, 1) = u(rng);
    Eigen::MatrixX2d p = smacof(d, start, iterations);
    const double s = normalized_stress(d, p);
    if (!p.allFinite()) throw Error("embedding diverged");
    if (!have || s < best.stress) {
      best.coords = p;
      best.stress = s;
      best.restart = r;
      have = true;
    }
  }
  return best;
}

void write_embedding_csv(std::ostream& out, const Embedding& e) {
  out << "# schema: posmat-embedding/1\nid,x,y\n";
  for (std::size_t i = 0; i < e.labels.size(); ++i)
    out << e.labels[i] << ',' << fixed(e.coords(i, 0), 9) << ',' << fixed(e.coords(i, 1), 9) << '\n';
}

Embedding read_embedding_csv(std::istream& in) {
  Embedding e;
  std::string line;
  int lineNo = 0;
  if (!next_data_line(in, line, lineNo) || line != "id,x,y") throw ParseError(lineNo, "expected header 'id,x,y'");
  std::vector<std::array<double, 2>> pts;
  while (next_data_line(in, line, lineNo)) {
    auto cells = split_csv(line);
    if (cells.size() != 3) throw ParseError(lineNo, "expected id,x,y");
    e.labels.push_back(cells[0]);
    pts.push_back({parse_double(cells[1], lineNo), parse_double(cells[2], lineNo)});
  }
  e.coords.resize(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) e.coords(i, 0) = pts[i][0], e.coords(i, 1) = pts[i][1];
  return e;
}

std::vector<MapPoint> map_points(const Embedding& e, const std::vector<ManifestRow>& manifest) {
  std::map<std::string, const ManifestRow*> byId;
  for (const auto& row : manifest) byId[row.id] = &row;
  std::vector<MapPoint> out;
  for (std::size_t i = 0; i < e.labels.size(); ++i) {
    MapPoint p;
    p.id = e.labels[i];
    p.x = e.coords(i, 0);
    p.y = e.coords(i, 1);
    if (p.id == "UN" || p.id == "ID") {
      p.model = p.id;
    } else {
      auto it = byId.find(p.id);
      if (it == byId.end()) throw InvalidInput("label '" + p.id + "' is not in the manifest");
      p.model = it->second->model;
      p.parameter = it->second->parameter;
    }
    out.push_back(p);
  }
  return out;
}

void write_map_csv(std::ostream& out, const std::vector<MapPoint>& points) {
  out << "# schema: posmat-map/1\nid,model,param,x,y\n";
  for (const auto& p : points) {
    out << p.id << ',' << p.model << ',';
    if (p.parameter) out << fixed(*p.parameter, 6);
    out << ',' << fixed(p.x, 3) << ',' << fixed(p.y, 3) << '\n';
  }
}

std::string model_color(const std::string& model) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
                                  "#8c6d31", "#843c39", "#7b4173", "#3182bd", "#e6550d", "#31a354"};
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : model) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return palette[h % (sizeof palette / sizeof palette[0])];
}

double parameter_opacity(const std::string& model, std::optional<double> parameter) {
  if (!parameter) return 0.9;
  double t = *parameter;
  if (model == "urn") t = t / (1 + t);
  t = std::clamp(t, 0.0, 1.0);
  return 0.25 + 0.65 * t;
}

namespace {

constexpr double kMapSize = 800, kMargin = 40, kLegendWidth = 260;

struct Frame {
  double minX = 0, minY = 0, scale = 1;
  double sx(double x) const { return kMargin + (x - minX) * scale; }
  double sy(double y) const { return kMapSize - kMargin - (y - minY) * scale; }
};

Frame frame_of(const std::vector<MapPoint>& pts) {
  Frame f;
  if (pts.empty()) return f;
  double maxX = pts[0].x, maxY = pts[0].y;
  f.minX = pts[0].x;
  f.minY = pts[0].y;
  for (const auto& p : pts) {
    f.minX = std::min(f.minX, p.x);
    f.minY = std::min(f.minY, p.y);
    maxX = std::max(maxX, p.x);
    maxY = std::max(maxY, p.y);
  }
  const double span = std::max(maxX - f.minX, maxY - f.minY);
  f.scale = span > 0 ? (kMapSize - 2 * kMargin) / span : 1;
  return f;
}

void svg_open(std::ostream& out) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kMapSize + kLegendWidth, 0)
      << "\" height=\"" << fixed(kMapSize, 0) << "\" viewBox=\"0 0 " << fixed(kMapSize + kLegendWidth, 0) << ' '
      << fixed(kMapSize, 0) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << fixed(kMapSize + kLegendWidth, 0) << "\" height=\"" << fixed(kMapSize, 0)
      << "\" fill=\"#ffffff\"/>\n";
}

void svg_anchor(std::ostream& out, const Frame& f, const MapPoint& p) {
  const double x = f.sx(p.x), y = f.sy(p.y), r = 7;
  out << "<path class=\"cross\" d=\"M" << fixed(x - r, 3) << ',' << fixed(y - r, 3) << 'L' << fixed(x + r, 3) << ','
      << fixed(y + r, 3) << 'M' << fixed(x - r, 3) << ',' << fixed(y + r, 3) << 'L' << fixed(x + r, 3) << ','
      << fixed(y - r, 3) << "\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
  out << "<text x=\"" << fixed(x + r + 2, 3) << "\" y=\"" << fixed(y - r, 3) << "\">" << p.id << "</text>\n";
}

void svg_dot(std::ostream& out, const Frame& f, const MapPoint& p, const std::string& color, double opacity) {
  out << "<circle class=\"dot\" cx=\"" << fixed(f.sx(p.x), 3) << "\" cy=\"" << fixed(f.sy(p.y), 3)
      << "\" r=\"4\" fill=\"" << color << "\" fill-opacity=\"" << fixed(opacity, 3) << "\"><title>" << p.id
      << "</title></circle>\n";
}

void legend_swatch(std::ostream& out, int row, const std::string& color, const std::string& label) {
  const double y = kMargin + 20.0 * row;
  out << "<rect class=\"swatch\" x=\"" << fixed(kMapSize + 10, 3) << "\" y=\"" << fixed(y - 10, 3)
      << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
  out << "<text x=\"" << fixed(kMapSize + 28, 3) << "\" y=\"" << fixed(y, 3) << "\">" << label << "</text>\n";
}

bool is_anchor(const MapPoint& p) { return p.id == "UN" || p.id == "ID"; }

std::string hex_color(double r, double g, double b) {
  char buf[8];
  auto c = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255)); };
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c(r), c(g), c(b));
  return buf;
}

// Five-stop approximation of the viridis ramp.
std::string ramp(double t) {
  static const double stops[5][3] = {{0.267, 0.005, 0.329}, {0.230, 0.322, 0.546}, {0.128, 0.567, 0.551},
                                     {0.369, 0.789, 0.383}, {0.993, 0.906, 0.144}};
  t = std::clamp(t, 0.0, 1.0) * 4;
  const int k = std::min(3, static_cast<int>(t));
  const double u = t - k;
  return hex_color(stops[k][0] + u * (stops[k + 1][0] - stops[k][0]), stops[k][1] + u * (stops[k + 1][1] - stops[k][1]),
                   stops[k][2] + u * (stops[k + 1][2] - stops[k][2]));
}

}  // namespace

std::string render_map_svg(const std::vector<MapPoint>& points) {
  std::ostringstream out;
  const Frame f = frame_of(points);
  svg_open(out);
  std::set<std::string> models;
  for (const auto& p : points)
    if (!is_anchor(p)) {
      svg_dot(out, f, p, model_color(p.model), parameter_opacity(p.model, p.parameter));
      models.insert(p.model);
    }
  for (const auto& p : points)
    if (is_anchor(p)) svg_anchor(out, f, p);
  int row = 0;
  for (const auto& m : models) legend_swatch(out, row++, model_color(m), m);
  out << "</svg>\n";
  return out.str();
}

std::string render_overlay_svg(const std::vector<MapPoint>& points, const std::vector<OverlayValue>& values) {
  std::map<std::string, double> byId;
  for (const auto& v : values) {
    if (!std::isfinite(v.value)) throw InvalidInput("overlay value for '" + v.id + "' is not finite");
    byId[v.id] = v.value;
  }
  std::vector<double> seen;
  for (const auto& p : points) {
    if (is_anchor(p)) continue;
    auto it = byId.find(p.id);
    if (it == byId.end()) throw InvalidInput("no overlay value for '" + p.id + "'");
    seen.push_back(it->second);
  }
  std::set<double> levels(seen.begin(), seen.end());
  const bool discrete = levels.size() <= 16 &&
                        std::all_of(levels.begin(), levels.end(), [](double v) { return v == std::floor(v); });
  static const char* discretePalette[] = {"#440154", "#3b528b", "#21918c", "#5ec962", "#fde725", "#d62728",
                                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
                                          "#1f77b4", "#9467bd", "#2ca02c", "#000000"};
  std::map<double, std::string> levelColor;
  double lo = 0, hi = 0;
  if (discrete) {
    int k = 0;
    for (double v : levels) levelColor[v] = discretePalette[k++];
  } else if (!seen.empty()) {
    lo = *levels.begin();
    hi = *levels.rbegin();
  }
  auto colorOf = [&](double v) {
    if (discrete) return levelColor.at(v);
    return ramp(hi > lo ? (v - lo) / (hi - lo) : 0.0);
  };
  std::ostringstream out;
  const Frame f = frame_of(points);
  svg_open(out);
  for (const auto& p : points)
    if (!is_anchor(p)) svg_dot(out, f, p, colorOf(byId.at(p.id)), 0.9);
  for (const auto& p : points)
    if (is_anchor(p)) svg_anchor(out, f, p);
  if (discrete) {
    int row = 0;
    for (const auto& [v, c] : levelColor) legend_swatch(out, row++, c, fixed(v, 0));
  } else if (!seen.empty()) {
    for (int s = 0; s <= 10; ++s) legend_swatch(out, s, ramp(s / 10.0), fixed(lo + (hi - lo) * s / 10.0, 3));
  }
  out << "</svg>\n";
  return out.str();
}

void write_values_csv(std::ostream& out, const std::vector<OverlayValue>& values) {
  out << "# schema: posmat-values/1\nid,value\n";
  for (const auto& v : values) {
    std::ostringstream num;
    num.precision(17);
    num << v.value;
    out << v.id << ',' << num.str() << '\n';
  }
}

std::vector<OverlayValue> read_values_csv(std::istream& in) {
  std::string line;
  int lineNo = 0;
  if (!next_data_line(in, line, lineNo) || line != "id,value") throw ParseError(lineNo, "expected header 'id,value'");
  std::vector<OverlayValue> out;
  while (next_data_line(in, line, lineNo)) {
    auto cells = split_csv(line);
    if (cells.size() != 2) throw ParseError(lineNo, "expected id,value");
    out.push_back({cells[0], parse_double(cells[1], lineNo)});
  }
  return out;
}

}  // namespace posmat
