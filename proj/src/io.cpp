#include "posmat/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace posmat {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_int(const std::string& tok, long long& out) {
  auto* first = tok.data();
  auto* last = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && p == last;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

// Reads nonblank lines; blank lines are only allowed at the end.
struct LineReader {
  std::istream& in;
  int number = 0;
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++number;
      line = trim(line);
      if (!line.empty()) return true;
    }
    return false;
  }
  void expect_end() {
    std::string line;
    if (next(line)) throw ParseError(number, "unexpected trailing content");
  }
};

std::vector<std::vector<std::string>> read_grid(std::istream& in) {
  LineReader r{in};
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t m = 0;
  while (r.next(line)) {
    auto cells = split_commas(line);
    if (rows.empty()) m = cells.size();
    if (cells.size() != m)
      throw ParseError(r.number, "expected " + std::to_string(m) + " values, found " +
                                     std::to_string(cells.size()));
    for (auto& c : cells)
      if (c.empty()) throw ParseError(r.number, "empty matrix entry");
    rows.push_back(std::move(cells));
    if (rows.size() > m) throw ParseError(r.number, "more rows than columns");
  }
  if (rows.empty()) throw ParseError(r.number, "empty matrix");
  if (rows.size() != m)
    throw ParseError(r.number, "matrix has " + std::to_string(rows.size()) + " rows but " +
                                   std::to_string(m) + " columns");
  return rows;
}

template <typename T, typename F>
T open_and(const std::string& path, F f) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return f(in);
}

template <typename T>
void save_impl(const std::string& path, const T& value) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_matrix(out, value);
  if (!out) throw Error("write failed: " + path);
}

}  // namespace

Election read_election(std::istream& in) {
  LineReader r{in};
  std::string line;
  if (!r.next(line)) throw ParseError(r.number, "missing header \"m n\"");
  auto head = split_ws(line);
  long long m = 0, n = 0;
  if (head.size() != 2 || !parse_int(head[0], m) || !parse_int(head[1], n) || m < 1 || n < 0)
    throw ParseError(r.number, "header must be two integers \"m n\" with m >= 1, n >= 0");
  Election e(static_cast<int>(m));
  for (long long k = 0; k < n; ++k) {
    if (!r.next(line)) throw ParseError(r.number, "expected " + std::to_string(n) + " votes");
    auto toks = split_ws(line);
    Vote v;
    for (auto& t : toks) {
      long long c;
      if (!parse_int(t, c)) throw ParseError(r.number, "not an integer: " + t);
      v.push_back(static_cast<int>(c));
    }
    if (!is_permutation(v, static_cast<int>(m)))
      throw ParseError(r.number, "vote is not a permutation of 0.." + std::to_string(m - 1));
    e.add(std::move(v));
  }
  r.expect_end();
  return e;
}

void write_election(std::ostream& out, const Election& e) {
  out << e.m() << ' ' << e.n() << '\n';
  for (const Vote& v : e.votes()) {
    for (int i = 0; i < e.m(); ++i) out << (i ? " " : "") << v[i];
    out << '\n';
  }
}

PositionMatrix read_position_matrix(std::istream& in) {
  auto rows = read_grid(in);
  const int m = static_cast<int>(rows.size());
  IntMatrix x(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      long long v;
      if (!parse_int(rows[i][j], v) || v < 0)
        throw ParseError(i + 1, "not a nonnegative integer: " + rows[i][j]);
      x(i, j) = v;
    }
  try {
    return PositionMatrix(std::move(x));
  } catch (const InvalidInput& err) {
    throw ParseError(m, err.what());
  }
}

Rational parse_rational(const std::string& token) {
  auto slash = token.find('/');
  auto digits = [](const std::string& s, bool allowSign) {
    if (s.empty()) return false;
    std::size_t k = (allowSign && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (k == s.size()) return false;
    for (; k < s.size(); ++k)
      if (s[k] < '0' || s[k] > '9') return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!digits(token, true)) throw InvalidInput("not a rational: " + token);
    return Rational(BigInt(token));
  }
  std::string p = token.substr(0, slash), q = token.substr(slash + 1);
  if (!digits(p, true) || !digits(q, false)) throw InvalidInput("not a rational: " + token);
  BigInt den(q);
  if (den == 0) throw InvalidInput("zero denominator: " + token);
  return Rational(BigInt(p), den);
}

FrequencyMatrix read_frequency_matrix(std::istream& in) {
  auto rows = read_grid(in);
  const int m = static_cast<int>(rows.size());
  RatMatrix y(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      try {
        y(i, j) = parse_rational(rows[i][j]);
      } catch (const InvalidInput& err) {
        throw ParseError(i + 1, err.what());
      }
    }
  try {
    return FrequencyMatrix(std::move(y));
  } catch (const InvalidInput& err) {
    throw ParseError(m, err.what());
  }
}

FrequencyMatrix read_any_as_frequency(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find('/') == std::string::npos) {
    std::istringstream probe(text);
    try {
      PositionMatrix x = read_position_matrix(probe);
      if (x.n() != 1) return FrequencyMatrix(x);
    } catch (const ParseError&) {
      // Fall through: may be a frequency matrix with integer entries.
    }
  }
  std::istringstream again(text);
  return read_frequency_matrix(again);
}

void write_matrix(std::ostream& out, const PositionMatrix& x) {
  for (int i = 0; i < x.m(); ++i) {
    for (int j = 0; j < x.m(); ++j) out << (j ? "," : "") << x(i, j);
    out << '\n';
  }
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

void write_matrix(std::ostream& out, const FrequencyMatrix& y) {
  for (int i = 0; i < y.m(); ++i) {
    for (int j = 0; j < y.m(); ++j) out << (j ? "," : "") << to_string(y(i, j));
    out << '\n';
  }
}

Election load_election(const std::string& path) {
  return open_and<Election>(path, [](std::istream& in) { return read_election(in); });
}

PositionMatrix load_position_matrix(const std::string& path) {
  return open_and<PositionMatrix>(path, [](std::istream& in) { return read_position_matrix(in); });
}

FrequencyMatrix load_frequency_matrix(const std::string& path) {
  return open_and<FrequencyMatrix>(path, [](std::istream& in) { return read_any_as_frequency(in); });
}

void save(const std::string& path, const Election& e) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_election(out, e);
  if (!out) throw Error("write failed: " + path);
}

void save(const std::string& path, const PositionMatrix& x) { save_impl(path, x); }
void save(const std::string& path, const FrequencyMatrix& y) { save_impl(path, y); }

}  // namespace posmat
