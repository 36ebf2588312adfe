#pragma once

// CNF formulas in DIMACS conventions: variables 1..var_count, a literal is a
// nonzero signed integer, negative meaning negation.

#include <cstdint>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "automaton.hpp"

namespace csync {

using Literal = std::int32_t;
using Clause = std::vector<Literal>;

struct Cnf {
  std::int32_t var_count = 0;
  std::vector<Clause> clauses;

  friend bool operator==(const Cnf&, const Cnf&) = default;
};

// Total truth assignment; index 0 is unused so values[v] is variable v.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::int32_t var_count) : values_(static_cast<std::size_t>(var_count) + 1, 0) {}

  std::int32_t var_count() const noexcept { return static_cast<std::int32_t>(values_.size()) - 1; }
  bool value(std::int32_t var) const { return values_.at(static_cast<std::size_t>(var)) != 0; }
  void set(std::int32_t var, bool v) { values_.at(static_cast<std::size_t>(var)) = v ? 1 : 0; }

  bool satisfies(Literal lit) const { return value(std::abs(lit)) == (lit > 0); }

 private:
  std::vector<std::uint8_t> values_;
};

// Independent clause evaluator; shares no code with any solver.
inline bool satisfies(const Cnf& cnf, const Assignment& a) {
  if (a.var_count() < cnf.var_count) return false;
  for (const Clause& c : cnf.clauses) {
    bool sat = false;
    for (Literal l : c)
      if (a.satisfies(l)) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

inline void validate(const Cnf& cnf) {
  if (cnf.var_count < 0) throw std::invalid_argument("negative variable count");
  for (std::size_t i = 0; i < cnf.clauses.size(); ++i)
    for (Literal l : cnf.clauses[i])
      if (l == 0 || std::abs(l) > cnf.var_count)
        throw std::invalid_argument("clause " + std::to_string(i + 1) + " has invalid literal " +
                                    std::to_string(l));
}

inline void write_dimacs(std::ostream& out, const Cnf& cnf, const std::vector<std::string>& comments = {}) {
  for (const auto& c : comments) out << "c " << c << '\n';
  out << "p cnf " << cnf.var_count << ' ' << cnf.clauses.size() << '\n';
  for (const Clause& c : cnf.clauses) {
    for (Literal l : c) out << l << ' ';
    out << "0\n";
  }
}

inline std::string to_dimacs_string(const Cnf& cnf, const std::vector<std::string>& comments = {}) {
  std::ostringstream out;
  write_dimacs(out, cnf, comments);
  return out.str();
}

// Reads "p cnf" files. Clauses may span lines; "c" lines are skipped.
inline Cnf parse_dimacs(std::istream& in) {
  Cnf cnf;
  bool have_header = false;
  long long declared_clauses = 0;
  Clause current;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == 'c' || line[pos] == '%') continue;
    std::istringstream ls(line);
    if (line[pos] == 'p') {
      std::string p, fmt;
      long long vars;
      if (have_header || !(ls >> p >> fmt >> vars >> declared_clauses) || fmt != "cnf" || vars < 0 ||
          declared_clauses < 0)
        throw ParseError("malformed problem line", lineno);
      cnf.var_count = static_cast<std::int32_t>(vars);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("clause before problem line", lineno);
    long long lit;
    while (ls >> lit) {
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (std::llabs(lit) > cnf.var_count)
        throw ParseError("literal " + std::to_string(lit) + " exceeds variable count", lineno);
      current.push_back(static_cast<Literal>(lit));
    }
    if (!ls.eof()) throw ParseError("unexpected token", lineno);
  }
  if (!have_header) throw ParseError("missing problem line", lineno + 1);
  if (!current.empty()) cnf.clauses.push_back(std::move(current));
  if (static_cast<long long>(cnf.clauses.size()) != declared_clauses)
    throw ParseError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                         std::to_string(cnf.clauses.size()),
                     lineno);
  return cnf;
}

inline Cnf parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

}  // namespace csync
