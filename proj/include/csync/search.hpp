#pragma once

// Minimal carefully synchronizing word length by SAT probing over ℓ.
//
// If w carefully synchronizes, so does a·w for the first letter a of w (a is
// defined everywhere, and images only shrink), so SAT at ℓ implies SAT at
// ℓ+1. This makes galloping followed by binary search exact.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "automaton.hpp"
#include "encoder.hpp"
#include "external.hpp"
#include "oracle.hpp"
#include "solver.hpp"

namespace csync {

// Which SAT solver answers the probes.
struct Backend {
  std::string external_command;  // empty: built-in solver
  SolverOptions builtin;

  static Backend builtin_solver(SolverOptions opts = {}) { return {{}, opts}; }
  static Backend external(std::string command) { return {std::move(command), {}}; }

  // Accepts "builtin" or "external:<command>".
  static Backend parse(const std::string& spec) {
    if (spec == "builtin") return builtin_solver();
    const std::string prefix = "external:";
    if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size()) return external(spec.substr(prefix.size()));
    throw std::invalid_argument("backend must be 'builtin' or 'external:<command>', got '" + spec + "'");
  }

  bool is_external() const noexcept { return !external_command.empty(); }

  SolveResult run(const Cnf& cnf) const {
    return is_external() ? solve_external(cnf, external_command) : solve(cnf, builtin);
  }
};

// A witness or model that fails an independent check.
class CorrectnessError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SearchOptions {
  std::int64_t max_length = std::int64_t{1} << 20;
  Backend backend;
  // Decide synchronizability exactly with the subset oracle before probing,
  // when the automaton has at most this many states (0 disables).
  std::size_t exact_precheck_states = 0;
  // Subsets the precheck may visit before falling back to probing alone.
  std::uint64_t precheck_max_visited = std::uint64_t{1} << 24;
};

inline SearchOutcome min_csw(const Pfa& pfa, const SearchOptions& opts = {}) {
  if (opts.max_length < 1) throw std::invalid_argument("max length must be positive");
  const auto start = std::chrono::steady_clock::now();
  SearchOutcome out;
  auto finish = [&](SearchStatus s) {
    out.status = s;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  };

  if (pfa.states() == 1) {
    out.min_length = 0;
    return finish(SearchStatus::kFound);
  }
  if (pfa.total_letters().empty() || !all_pairs_mergeable(pfa)) return finish(SearchStatus::kNotSynchronizing);
  if (pfa.states() <= opts.exact_precheck_states && pfa.states() <= kStateSetCap) {
    OracleOptions oo;
    oo.max_states = kStateSetCap;
    oo.reconstruct = false;
    oo.max_visited = opts.precheck_max_visited;
    const auto pre = power_bfs(pfa, oo);
    if (pre.status == SearchStatus::kNotSynchronizing) return finish(SearchStatus::kNotSynchronizing);
  }

  const CnfInstance tmpl = encode(pfa, 1);
  std::map<std::int64_t, Word> witnesses;
  // Returns nullopt when the backend ran out of budget.
  auto probe = [&](std::int64_t length) -> std::optional<bool> {
    if (length > std::numeric_limits<std::int32_t>::max()) throw std::overflow_error("length too large to encode");
    const CnfInstance inst = length == 1 ? tmpl : scale(tmpl, static_cast<std::int32_t>(length));
    const SolveResult r = opts.backend.run(inst.cnf);
    if (r.status == SolveStatus::kUnknown) return std::nullopt;
    const bool sat = r.status == SolveStatus::kSat;
    out.probes.push_back({length, sat, r.stats.seconds});
    out.bound = std::max(out.bound, length);
    if (sat) {
      Word w = decode_word(*r.model, inst.layout);
      if (!is_carefully_synchronizing(pfa, w))
        throw CorrectnessError("decoded word of length " + std::to_string(length) + " is not carefully synchronizing");
      witnesses.emplace(length, std::move(w));
    }
    return sat;
  };
  auto sort_probes = [&] {
    std::sort(out.probes.begin(), out.probes.end(), [](const Probe& a, const Probe& b) { return a.length < b.length; });
  };

  // Galloping: 1, 2, 4, ... capped at max_length.
  std::int64_t unsat_below = 0, sat_at = 0;
  for (std::int64_t length = 1;; length = std::min(length * 2, opts.max_length)) {
    const auto r = probe(length);
    if (!r) {
      sort_probes();
      return finish(SearchStatus::kBudgetExceeded);
    }
    if (*r) {
      sat_at = length;
      break;
    }
    unsat_below = length;
    if (length == opts.max_length) {
      sort_probes();
      return finish(SearchStatus::kUnknownUpToBound);
    }
  }
  while (sat_at - unsat_below > 1) {
    const std::int64_t mid = unsat_below + (sat_at - unsat_below) / 2;
    const auto r = probe(mid);
    if (!r) {
      sort_probes();
      return finish(SearchStatus::kBudgetExceeded);
    }
    (*r ? sat_at : unsat_below) = mid;
  }
  sort_probes();
  out.min_length = sat_at;
  out.witness = witnesses.at(sat_at);
  return finish(SearchStatus::kFound);
}

}  // namespace csync
