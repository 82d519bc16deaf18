#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sistab/model.hpp"

namespace sistab {

// Plain-text matrix file: first line "d k", then d lines of k integers.
inline DesignMatrix read_matrix(std::istream& in) {
  std::size_t d = 0, k = 0;
  if (!(in >> d >> k)) throw InvalidInput("matrix file: missing 'd k' header");
  std::vector<Int> entries;
  entries.reserve(d * k);
  for (std::size_t i = 0; i < d * k; ++i) {
    Int v;
    if (!(in >> v)) throw InvalidInput("matrix file: expected " + std::to_string(d * k) + " entries");
    entries.push_back(v);
  }
  return DesignMatrix(d, k, std::move(entries));
}

inline DesignMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open matrix file: " + path);
  return read_matrix(in);
}

inline void write_matrix(std::ostream& out, const DesignMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << m.at(r, c);
    }
    out << '\n';
  }
}

// Plain-text vector file: one line of space-separated integers.
inline std::vector<Int> read_vector(std::istream& in) {
  std::vector<Int> v;
  Int x;
  while (in >> x) v.push_back(x);
  if (v.empty()) throw InvalidInput("vector file: no integers found");
  return v;
}

inline std::vector<Int> read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open vector file: " + path);
  return read_vector(in);
}

/// Comma- or space-separated integer list, e.g. "1,1,1,1".
inline std::vector<Int> parse_int_list(const std::string& text) {
  std::string cleaned = text;
  for (char& c : cleaned) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(cleaned);
  std::vector<Int> v;
  Int x;
  while (in >> x) v.push_back(x);
  std::string rest;
  if (in.clear(), in >> rest) {
    throw InvalidInput("integer list: unexpected token '" + rest + "'");
  }
  if (v.empty()) throw InvalidInput("integer list: empty");
  return v;
}

/// Model shorthand: "indep:I,J" | "unilogit:I" | "bilogit:I,J".
inline ModelSpec parse_model_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw InvalidInput("model spec '" + text + "': expected name:levels");
  }
  const std::string name = text.substr(0, colon);
  const auto levels = parse_int_list(text.substr(colon + 1));
  auto need = [&](std::size_t n) {
    if (levels.size() != n) {
      throw InvalidInput("model spec '" + text + "': expected " + std::to_string(n) +
                         " level value(s)");
    }
  };
  if (name == "indep") {
    need(2);
    return ModelSpec::independence(int(levels[0]), int(levels[1]));
  }
  if (name == "unilogit") {
    need(1);
    return ModelSpec::univariate_logit(int(levels[0]));
  }
  if (name == "bilogit") {
    need(2);
    return ModelSpec::bivariate_logit(int(levels[0]), int(levels[1]));
  }
  throw InvalidInput("model spec '" + text + "': unknown model '" + name + "'");
}

}  // namespace sistab
