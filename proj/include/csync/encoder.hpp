#pragma once

// Reduction from "does the automaton have a carefully synchronizing word of
// length ℓ" to CNF satisfiability.
//
// Variables: letter variables x(i,t) (the t-th letter is a_i) and state
// variables y(j,t) (state q_j is active after t steps). Clause groups:
//   I  y(j,0) for every state
//   L  per step, at least one letter and pairwise at most one letter
//   T  per step and (q_j, a_i): ¬y(j,t-1) ∨ ¬x(i,t) ∨ y(k,t) when q_j·a_i = q_k,
//      else ¬y(j,t-1) ∨ ¬x(i,t)
//   S  pairwise at most one state active after ℓ steps

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "automaton.hpp"
#include "cnf.hpp"

namespace csync {

// Step t ≥ 1 occupies the contiguous block n + (t-1)(m+n) + 1 .. n + t(m+n):
// first its m letter variables, then its n state variables. Step 0 holds only
// the state variables 1..n.
struct VarLayout {
  std::int32_t n = 0;
  std::int32_t m = 0;
  std::int32_t length = 0;

  std::int32_t block() const noexcept { return m + n; }
  std::int32_t var_count() const noexcept { return block() * length + n; }

  std::int32_t x(std::int32_t letter, std::int32_t step) const noexcept {
    return n + (step - 1) * block() + letter;
  }
  std::int32_t y(std::int32_t state, std::int32_t step) const noexcept {
    return step == 0 ? state : n + (step - 1) * block() + m + state;
  }

  friend bool operator==(const VarLayout&, const VarLayout&) = default;
};

struct GroupSizes {
  std::size_t initial = 0;
  std::size_t letter = 0;
  std::size_t transition = 0;
  std::size_t sync = 0;

  std::size_t total() const noexcept { return initial + letter + transition + sync; }
  friend bool operator==(const GroupSizes&, const GroupSizes&) = default;
};

struct CnfInstance {
  Cnf cnf;
  VarLayout layout;
  GroupSizes groups;

  friend bool operator==(const CnfInstance&, const CnfInstance&) = default;
};

// Clause count ℓ(m(m-1)/2 + mn + 1) + n(n+1)/2.
constexpr std::size_t expected_clause_count(std::size_t n, std::size_t m, std::size_t length) {
  return length * (m * (m - 1) / 2 + m * n + 1) + n * (n + 1) / 2;
}

constexpr std::size_t expected_var_count(std::size_t n, std::size_t m, std::size_t length) {
  return (m + n) * length + n;
}

namespace detail {

inline void emit_step(const Pfa& pfa, const VarLayout& v, std::int32_t t, std::vector<Clause>& out) {
  const auto n = v.n, m = v.m;
  Clause some;
  some.reserve(static_cast<std::size_t>(m));
  for (std::int32_t i = 1; i <= m; ++i) some.push_back(v.x(i, t));
  out.push_back(std::move(some));
  for (std::int32_t r = 1; r <= m; ++r)
    for (std::int32_t s = r + 1; s <= m; ++s) out.push_back({-v.x(r, t), -v.x(s, t)});

  for (std::int32_t j = 1; j <= n; ++j)
    for (std::int32_t i = 1; i <= m; ++i) {
      const State k = pfa.next(static_cast<State>(j), static_cast<Letter>(i));
      if (k != kUndefined)
        out.push_back({-v.y(j, t - 1), -v.x(i, t), v.y(static_cast<std::int32_t>(k), t)});
      else
        out.push_back({-v.y(j, t - 1), -v.x(i, t)});
    }
}

inline void emit_sync(const VarLayout& v, std::vector<Clause>& out) {
  for (std::int32_t r = 1; r <= v.n; ++r)
    for (std::int32_t s = r + 1; s <= v.n; ++s) out.push_back({-v.y(r, v.length), -v.y(s, v.length)});
}

inline GroupSizes group_sizes(std::size_t n, std::size_t m, std::size_t length) {
  return {n, length * (m * (m - 1) / 2 + 1), length * m * n, n * (n - 1) / 2};
}

}  // namespace detail

inline CnfInstance encode(const Pfa& pfa, std::int32_t length) {
  if (length < 1) throw std::invalid_argument("word length must be positive");
  CnfInstance inst;
  inst.layout = {static_cast<std::int32_t>(pfa.states()), static_cast<std::int32_t>(pfa.letters()), length};
  const auto& v = inst.layout;
  inst.cnf.var_count = v.var_count();
  inst.groups = detail::group_sizes(pfa.states(), pfa.letters(), static_cast<std::size_t>(length));
  auto& out = inst.cnf.clauses;
  out.reserve(inst.groups.total());

  for (std::int32_t j = 1; j <= v.n; ++j) out.push_back({v.y(j, 0)});
  for (std::int32_t t = 1; t <= length; ++t) detail::emit_step(pfa, v, t, out);
  detail::emit_sync(v, out);
  return inst;
}

// Builds the length-ℓ instance from a length-1 template by index arithmetic
// alone: the step-1 block is copied ℓ times, shifting every index above n by
// (t-1)(m+n) and redirecting y(j,0) to y(j,t-1); the S group is regenerated
// against the last block.
inline CnfInstance scale(const CnfInstance& tmpl, std::int32_t length) {
  const VarLayout& base = tmpl.layout;
  if (base.length != 1) throw std::invalid_argument("scaling needs a length-1 template");
  if (length < 1) throw std::invalid_argument("word length must be positive");

  const auto n = static_cast<std::size_t>(base.n);
  const std::size_t step_clauses = tmpl.groups.letter + tmpl.groups.transition;
  if (tmpl.cnf.clauses.size() != n + step_clauses + tmpl.groups.sync)
    throw std::invalid_argument("template clause groups do not match its clause list");

  CnfInstance inst;
  inst.layout = {base.n, base.m, length};
  inst.cnf.var_count = inst.layout.var_count();
  inst.groups = detail::group_sizes(n, static_cast<std::size_t>(base.m), static_cast<std::size_t>(length));
  auto& out = inst.cnf.clauses;
  out.reserve(inst.groups.total());

  out.insert(out.end(), tmpl.cnf.clauses.begin(), tmpl.cnf.clauses.begin() + static_cast<std::ptrdiff_t>(n));
  const auto first = tmpl.cnf.clauses.begin() + static_cast<std::ptrdiff_t>(n);
  for (std::int32_t t = 1; t <= length; ++t) {
    const std::int32_t shift = (t - 1) * base.block();
    const std::int32_t prev = t == 1 ? 0 : base.n + (t - 2) * base.block() + base.m;
    for (auto it = first; it != first + static_cast<std::ptrdiff_t>(step_clauses); ++it) {
      Clause c = *it;
      for (Literal& l : c) {
        const std::int32_t var = l < 0 ? -l : l;
        const std::int32_t mapped = var <= base.n ? var + prev : var + shift;
        l = l < 0 ? -mapped : mapped;
      }
      out.push_back(std::move(c));
    }
  }
  detail::emit_sync(inst.layout, out);
  return inst;
}

// Reads the word off the letter variables. Throws if some step does not
// have exactly one letter set.
inline Word decode_word(const Assignment& a, const VarLayout& v) {
  Word w;
  w.reserve(static_cast<std::size_t>(v.length));
  for (std::int32_t t = 1; t <= v.length; ++t) {
    Letter chosen = 0;
    int count = 0;
    for (std::int32_t i = 1; i <= v.m; ++i)
      if (a.value(v.x(i, t))) {
        chosen = static_cast<Letter>(i);
        ++count;
      }
    if (count != 1)
      throw std::invalid_argument("step " + std::to_string(t) + " has " + std::to_string(count) +
                                  " letters set; expected exactly one");
    w.push_back(chosen);
  }
  return w;
}

// The assignment induced by a word: letters from w, y(j,t) true iff q_j is in
// the careful image of the length-t prefix.
inline Assignment word_assignment(const Pfa& pfa, const Word& w) {
  const VarLayout v{static_cast<std::int32_t>(pfa.states()), static_cast<std::int32_t>(pfa.letters()),
                    static_cast<std::int32_t>(w.size())};
  Assignment a(v.var_count());
  std::vector<char> active(pfa.states() + 1, 1), next(pfa.states() + 1);
  for (std::int32_t j = 1; j <= v.n; ++j) a.set(v.y(j, 0), true);
  for (std::int32_t t = 1; t <= v.length; ++t) {
    const Letter letter = w[static_cast<std::size_t>(t - 1)];
    a.set(v.x(static_cast<std::int32_t>(letter), t), true);
    std::fill(next.begin(), next.end(), 0);
    for (State q = 1; q <= pfa.states(); ++q)
      if (active[q] && pfa.defined(q, letter)) next[pfa.next(q, letter)] = 1;
    active.swap(next);
    for (std::int32_t j = 1; j <= v.n; ++j)
      if (active[static_cast<std::size_t>(j)]) a.set(v.y(j, t), true);
  }
  return a;
}

inline std::string dimacs_comment(const VarLayout& v) {
  return "careful synchronization n=" + std::to_string(v.n) + " m=" + std::to_string(v.m) +
         " length=" + std::to_string(v.length);
}

inline std::string to_dimacs(const CnfInstance& inst) {
  return to_dimacs_string(inst.cnf, {dimacs_comment(inst.layout)});
}

}  // namespace csync
