#pragma once

#include <iosfwd>
#include <string>

#include "posmat/core.hpp"

namespace posmat {

// Election text: "m n" then n lines of 0-based candidate indices, best first.
Election read_election(std::istream& in);
void write_election(std::ostream& out, const Election& e);

// Matrix text: m lines of m comma-separated values.
PositionMatrix read_position_matrix(std::istream& in);
FrequencyMatrix read_frequency_matrix(std::istream& in);
// Accepts either flavor; integral inputs are normalized by their row sum.
FrequencyMatrix read_any_as_frequency(std::istream& in);
void write_matrix(std::ostream& out, const PositionMatrix& x);
void write_matrix(std::ostream& out, const FrequencyMatrix& y);

Election load_election(const std::string& path);
PositionMatrix load_position_matrix(const std::string& path);
FrequencyMatrix load_frequency_matrix(const std::string& path);
void save(const std::string& path, const Election& e);
void save(const std::string& path, const PositionMatrix& x);
void save(const std::string& path, const FrequencyMatrix& y);

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& token);  // "p/q" or "p"

}  // namespace posmat
