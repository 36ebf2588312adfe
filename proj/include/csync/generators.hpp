#pragma once

// Benchmark automata: random two-letter PFAs with a prescribed number of
// undefined transitions, and the P_n series.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "automaton.hpp"

namespace csync {

// std::mt19937_64 has a fully specified output sequence; bounded draws use
// rejection sampling on raw 64-bit outputs so results do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("empty range");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

struct GenConfig {
  std::size_t n = 10;
  std::size_t undefined = 1;  // transitions of letter b left undefined
  std::uint64_t seed = 0;
  std::optional<State> anchor_a;  // the state letter a never reaches
  std::optional<State> anchor_b;  // a state where letter b is undefined

  void validate() const {
    if (n < 2) throw std::invalid_argument("random automata need at least 2 states");
    if (undefined < 1 || undefined > n)
      throw std::invalid_argument("undefined transition count must be in 1.." + std::to_string(n));
    if (anchor_a && (*anchor_a < 1 || *anchor_a > n)) throw std::invalid_argument("anchor q_a out of range");
    if (anchor_b && (*anchor_b < 1 || *anchor_b > n)) throw std::invalid_argument("anchor q_b out of range");
  }
};

struct GeneratedPfa {
  Pfa pfa;
  State anchor_a;
  State anchor_b;
};

// Letter a (1) is total and avoids q_a: each q·a is uniform over Q∖{q_a}.
// Letter b (2) is undefined at q_b and at `undefined − 1` further states chosen
// uniformly without replacement, and uniform over Q elsewhere.
inline GeneratedPfa random_pfa_with_anchors(const GenConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n;
  Rng rng(cfg.seed);
  const State qa = cfg.anchor_a ? *cfg.anchor_a : static_cast<State>(rng.below(n) + 1);
  const State qb = cfg.anchor_b ? *cfg.anchor_b : static_cast<State>(rng.below(n) + 1);

  Pfa pfa(n, 2);
  for (State q = 1; q <= n; ++q) {
    auto t = static_cast<State>(rng.below(n - 1) + 1);
    if (t >= qa) ++t;
    pfa.set(q, 1, t);
  }

  std::vector<char> undefined(n + 1, 0);
  undefined[qb] = 1;
  std::vector<State> others;
  for (State q = 1; q <= n; ++q)
    if (q != qb) others.push_back(q);
  for (std::size_t i = 0; i + 1 < cfg.undefined; ++i) {
    const std::size_t j = i + rng.below(others.size() - i);
    std::swap(others[i], others[j]);
    undefined[others[i]] = 1;
  }
  for (State q = 1; q <= n; ++q)
    pfa.set(q, 2, undefined[q] ? kUndefined : static_cast<State>(rng.below(n) + 1));
  return {std::move(pfa), qa, qb};
}

inline Pfa random_pfa(const GenConfig& cfg) { return random_pfa_with_anchors(cfg).pfa; }

// P_n: a maps 1→2, 2→3 and fixes 3..n; b is undefined at 1, maps q→q+1 for
// 2 ≤ q < n, and n→1.
inline Pfa pn(std::size_t n) {
  if (n < 3) throw std::invalid_argument("P_n is defined for n >= 3");
  Pfa pfa(n, 2);
  for (State q = 1; q <= n; ++q) {
    pfa.set(q, 1, q <= 2 ? q + 1 : q);
    pfa.set(q, 2, q == 1 ? kUndefined : (q == n ? 1 : q + 1));
  }
  return pfa;
}

}  // namespace csync
