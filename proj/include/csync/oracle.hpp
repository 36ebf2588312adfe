#pragma once

// Exact minimal carefully synchronizing words by breadth-first search in the
// partial power automaton: nodes are subsets of Q, and a letter acts on a
// subset only when it is defined at every member.

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "automaton.hpp"

namespace csync {

enum class SearchStatus { kFound, kNotSynchronizing, kUnknownUpToBound, kBudgetExceeded };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::kFound: return "FOUND";
    case SearchStatus::kNotSynchronizing: return "NOT_SYNCHRONIZING";
    case SearchStatus::kUnknownUpToBound: return "UNKNOWN_UP_TO_BOUND";
    case SearchStatus::kBudgetExceeded: return "BUDGET_EXCEEDED";
  }
  return "?";
}

struct Probe {
  std::int64_t length = 0;
  bool sat = false;
  double seconds = 0.0;
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::kUnknownUpToBound;
  std::int64_t min_length = -1;
  Word witness;
  std::vector<Probe> probes;  // SAT path only, sorted by length
  std::int64_t bound = 0;     // largest length examined
  std::uint64_t visited = 0;  // oracle only: subsets discovered
  double seconds = 0.0;
};

struct OracleOptions {
  std::size_t max_states = 24;
  std::uint64_t max_visited = std::uint64_t{1} << 24;
  bool reconstruct = true;  // false: only decide reachability of a singleton
};

inline SearchOutcome power_bfs(const Pfa& pfa, const OracleOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = pfa.states();
  if (n > opts.max_states || n > kStateSetCap)
    throw std::invalid_argument("oracle limited to " + std::to_string(std::min(opts.max_states, kStateSetCap)) +
                                " states; automaton has " + std::to_string(n));
  SearchOutcome out;
  auto finish = [&](SearchStatus s) {
    out.status = s;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  };

  struct Edge {
    std::uint64_t parent;
    Letter letter;
  };
  const StateSet all = StateSet::full(n);
  std::unordered_map<std::uint64_t, Edge> parent;  // discovered subset → incoming edge
  std::vector<StateSet> layer{all}, next_layer;
  parent.emplace(all.bits(), Edge{0, 0});
  out.visited = 1;

  auto path_to = [&](StateSet s) {
    Word w;
    for (std::uint64_t cur = s.bits(); cur != all.bits();) {
      const Edge& e = parent.at(cur);
      w.push_back(e.letter);
      cur = e.parent;
    }
    return Word(w.rbegin(), w.rend());
  };

  if (all.size() == 1) {
    out.min_length = 0;
    return finish(SearchStatus::kFound);
  }
  // FIFO order with ordered letters yields the lexicographically least
  // witness among those of minimal length.
  for (std::int64_t depth = 1; !layer.empty(); ++depth) {
    next_layer.clear();
    for (StateSet s : layer)
      for (Letter a = 1; a <= pfa.letters(); ++a) {
        const auto t = apply_letter(pfa, s, a);
        if (!t) continue;
        if (!parent.try_emplace(t->bits(), Edge{s.bits(), a}).second) continue;
        ++out.visited;
        if (t->size() == 1) {
          out.min_length = depth;
          out.bound = depth;
          if (opts.reconstruct) out.witness = path_to(*t);
          return finish(SearchStatus::kFound);
        }
        if (out.visited > opts.max_visited) {
          out.bound = depth;
          return finish(SearchStatus::kBudgetExceeded);
        }
        next_layer.push_back(*t);
      }
    layer.swap(next_layer);
    out.bound = depth;
  }
  return finish(SearchStatus::kNotSynchronizing);
}

// Necessary condition for careful synchronization: every pair of states can
// be merged by a word that is defined along both of their paths. Runs in
// O(n² m) for any number of states.
inline bool all_pairs_mergeable(const Pfa& pfa) {
  const std::size_t n = pfa.states();
  if (n <= 1) return true;
  // reverse pair graph: a pair is good if some letter defined at both maps it
  // to a singleton or to a good pair
  auto index = [n](State p, State q) { return (static_cast<std::size_t>(p) - 1) * n + (q - 1); };
  std::vector<std::vector<std::size_t>> preds(n * n);
  std::vector<char> good(n * n, 0);
  std::vector<std::size_t> queue;
  for (State p = 1; p <= n; ++p)
    for (State q = p + 1; q <= n; ++q)
      for (Letter a = 1; a <= pfa.letters(); ++a) {
        const State pa = pfa.next(p, a), qa = pfa.next(q, a);
        if (pa == kUndefined || qa == kUndefined) continue;
        const std::size_t from = index(p, q);
        if (pa == qa) {
          if (!good[from]) {
            good[from] = 1;
            queue.push_back(from);
          }
        } else {
          preds[index(std::min(pa, qa), std::max(pa, qa))].push_back(from);
        }
      }
  for (std::size_t head = 0; head < queue.size(); ++head)
    for (std::size_t from : preds[queue[head]])
      if (!good[from]) {
        good[from] = 1;
        queue.push_back(from);
      }
  for (State p = 1; p <= n; ++p)
    for (State q = p + 1; q <= n; ++q)
      if (!good[index(p, q)]) return false;
  return true;
}

}  // namespace csync
