#pragma once

// Built-in complete SAT solver: conflict-driven clause learning on top of
// two-watched-literal unit propagation, VSIDS decisions, phase saving, Luby
// restarts and activity-based learnt clause reduction.
//
// Decisions are deterministic: activity ties go to the lowest variable index
// and the first polarity tried is false, unless random decisions are enabled
// through SolverOptions (seeded).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "cnf.hpp"

namespace csync {

enum class SolveStatus { kSat, kUnsat, kUnknown };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kSat: return "SAT";
    case SolveStatus::kUnsat: return "UNSAT";
    case SolveStatus::kUnknown: return "UNKNOWN";
  }
  return "?";
}

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
  double seconds = 0.0;
};

// kUnknown only ever means a resource budget ran out.
struct SolveResult {
  SolveStatus status = SolveStatus::kUnknown;
  std::optional<Assignment> model;
  SolveStats stats;
};

struct SolverOptions {
  std::uint64_t conflict_budget = std::numeric_limits<std::uint64_t>::max();
  double time_budget_s = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  double random_decision_freq = 0.0;
};

class CdclSolver {
 public:
  explicit CdclSolver(SolverOptions opts = {}) : opts_(opts), rng_(opts.seed) {}

  SolveResult solve(const Cnf& cnf) {
    validate(cnf);
    const auto start = std::chrono::steady_clock::now();
    SolveResult result;
    load(cnf);
    result.status = ok_ ? search_loop(start) : SolveStatus::kUnsat;
    if (result.status == SolveStatus::kSat) {
      Assignment model(cnf.var_count);
      for (std::int32_t v = 0; v < num_vars_; ++v) model.set(v + 1, assigns_[static_cast<std::size_t>(v)] == kTrue);
      result.model = std::move(model);
    }
    stats_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.stats = stats_;
    return result;
  }

 private:
  // Internal literal: 2*var + (negated ? 1 : 0), var 0-based.
  using Lit = std::uint32_t;
  using CRef = std::uint32_t;
  static constexpr CRef kNoReason = std::numeric_limits<CRef>::max();
  static constexpr std::uint8_t kTrue = 0, kFalse = 1, kUnassigned = 2;

  static Lit make_lit(Literal dimacs) {
    const auto v = static_cast<Lit>((dimacs < 0 ? -dimacs : dimacs) - 1);
    return 2 * v + (dimacs < 0 ? 1u : 0u);
  }
  static std::uint32_t var(Lit l) { return l >> 1; }
  static bool sign(Lit l) { return l & 1u; }
  static Lit neg(Lit l) { return l ^ 1u; }

  struct StoredClause {
    std::vector<Lit> lits;
    double activity = 0.0;
    bool learnt = false;
    bool removed = false;
  };

  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  std::uint8_t value(Lit l) const {
    const std::uint8_t a = assigns_[var(l)];
    return a == kUnassigned ? kUnassigned : static_cast<std::uint8_t>(a ^ static_cast<std::uint8_t>(sign(l)));
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  // ---- variable order heap (max activity, ties to lowest index) ----------
  bool heap_less(std::uint32_t a, std::uint32_t b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }
  void heap_up(std::size_t i) {
    const std::uint32_t x = heap_[i];
    while (i > 0) {
      const std::size_t p = (i - 1) / 2;
      if (!heap_less(x, heap_[p])) break;
      heap_[i] = heap_[p];
      heap_pos_[heap_[i]] = static_cast<std::int32_t>(i);
      i = p;
    }
    heap_[i] = x;
    heap_pos_[x] = static_cast<std::int32_t>(i);
  }
  void heap_down(std::size_t i) {
    const std::uint32_t x = heap_[i];
    for (;;) {
      std::size_t c = 2 * i + 1;
      if (c >= heap_.size()) break;
      if (c + 1 < heap_.size() && heap_less(heap_[c + 1], heap_[c])) ++c;
      if (!heap_less(heap_[c], x)) break;
      heap_[i] = heap_[c];
      heap_pos_[heap_[i]] = static_cast<std::int32_t>(i);
      i = c;
    }
    heap_[i] = x;
    heap_pos_[x] = static_cast<std::int32_t>(i);
  }
  void heap_insert(std::uint32_t v) {
    if (heap_pos_[v] >= 0) return;
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
  }
  std::uint32_t heap_pop() {
    const std::uint32_t top = heap_[0];
    heap_pos_[top] = -1;
    heap_[0] = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_pos_[heap_[0]] = 0;
      heap_down(0);
    }
    return top;
  }

  void bump_var(std::uint32_t v) {
    if ((activity_[v] += var_inc_) > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[v]));
  }
  void bump_clause(StoredClause& c) {
    if ((c.activity += cla_inc_) > 1e20) {
      for (CRef r : learnts_) clauses_[r].activity *= 1e-20;
      cla_inc_ *= 1e-20;
    }
  }

  // ---- setup --------------------------------------------------------------
  void load(const Cnf& cnf) {
    num_vars_ = cnf.var_count;
    const auto nv = static_cast<std::size_t>(num_vars_);
    assigns_.assign(nv, kUnassigned);
    level_.assign(nv, 0);
    reason_.assign(nv, kNoReason);
    polarity_.assign(nv, 1);
    activity_.assign(nv, 0.0);
    seen_.assign(nv, 0);
    heap_pos_.assign(nv, -1);
    heap_.clear();
    watches_.assign(2 * nv, {});
    clauses_.clear();
    learnts_.clear();
    trail_.clear();
    trail_lim_.clear();
    qhead_ = 0;
    var_inc_ = 1.0;
    cla_inc_ = 1.0;
    ok_ = true;
    stats_ = {};
    for (std::uint32_t v = 0; v < nv; ++v) heap_insert(v);

    std::vector<Lit> lits;
    for (const Clause& c : cnf.clauses) {
      lits.clear();
      for (Literal l : c) lits.push_back(make_lit(l));
      std::sort(lits.begin(), lits.end());
      lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
      bool tautology = false;
      for (std::size_t i = 1; i < lits.size(); ++i)
        if (lits[i] == neg(lits[i - 1])) tautology = true;
      if (tautology) continue;
      if (!add_input_clause(lits)) {
        ok_ = false;
        return;
      }
    }
    if (propagate() != kNoReason) ok_ = false;
  }

  bool add_input_clause(std::vector<Lit>& lits) {
    // drop literals already false at level 0, skip satisfied clauses
    std::size_t j = 0;
    for (Lit l : lits) {
      const auto v = value(l);
      if (v == kTrue) return true;
      if (v != kFalse) lits[j++] = l;
    }
    lits.resize(j);
    if (lits.empty()) return false;
    if (lits.size() == 1) {
      enqueue(lits[0], kNoReason);
      return true;
    }
    const CRef cr = static_cast<CRef>(clauses_.size());
    clauses_.push_back({lits, 0.0, false, false});
    attach(cr);
    return true;
  }

  void attach(CRef cr) {
    const auto& c = clauses_[cr].lits;
    watches_[neg(c[0])].push_back({cr, c[1]});
    watches_[neg(c[1])].push_back({cr, c[0]});
  }

  void enqueue(Lit l, CRef from) {
    const auto v = var(l);
    assigns_[v] = static_cast<std::uint8_t>(sign(l));
    level_[v] = decision_level();
    reason_[v] = from;
    trail_.push_back(l);
  }

  // ---- propagation ----------------------------------------------------------
  CRef propagate() {
    CRef conflict = kNoReason;
    while (qhead_ < trail_.size()) {
      const Lit p = trail_[qhead_++];  // p is true; visit clauses watching ¬p
      auto& ws = watches_[p];
      ++stats_.propagations;
      std::size_t i = 0, j = 0;
      const std::size_t end = ws.size();
      while (i < end) {
        const Watcher w = ws[i];
        if (value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        StoredClause& sc = clauses_[w.cref];
        if (sc.removed) {
          ++i;
          continue;
        }
        auto& c = sc.lits;
        const Lit false_lit = neg(p);
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        ++i;
        const Lit first = c[0];
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k)
          if (value(c[k]) != kFalse) {
            std::swap(c[1], c[k]);
            watches_[neg(c[1])].push_back({w.cref, first});
            moved = true;
            break;
          }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) == kFalse) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < end) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  // ---- conflict analysis ----------------------------------------------------
  void analyze(CRef confl, std::vector<Lit>& learnt, int& backtrack_level) {
    learnt.clear();
    learnt.push_back(0);  // placeholder for the asserting literal
    int path = 0;
    Lit p = 0;
    bool have_p = false;
    std::size_t index = trail_.size();
    do {
      StoredClause& c = clauses_[confl];
      if (c.learnt) bump_clause(c);
      for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
        const Lit q = c.lits[k];
        const auto v = var(q);
        if (seen_[v] || level_[v] == 0) continue;
        bump_var(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level())
          ++path;
        else
          learnt.push_back(q);
      }
      while (!seen_[var(trail_[--index])]) {
      }
      p = trail_[index];
      confl = reason_[var(p)];
      seen_[var(p)] = 0;
      have_p = true;
      --path;
    } while (path > 0);
    learnt[0] = neg(p);

    // local minimization: drop literals implied by the rest of the clause
    analyze_toclear_ = learnt;
    std::size_t j = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      const CRef r = reason_[var(learnt[i])];
      bool redundant = r != kNoReason;
      if (redundant)
        for (std::size_t k = 1; k < clauses_[r].lits.size(); ++k) {
          const auto v = var(clauses_[r].lits[k]);
          if (!seen_[v] && level_[v] > 0) {
            redundant = false;
            break;
          }
        }
      if (!redundant) learnt[j++] = learnt[i];
    }
    learnt.resize(j);

    backtrack_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i)
        if (level_[var(learnt[i])] > level_[var(learnt[max_i])]) max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      backtrack_level = level_[var(learnt[1])];
    }
    for (Lit l : analyze_toclear_) seen_[var(l)] = 0;
  }

  void cancel_until(int level) {
    if (decision_level() <= level) return;
    for (std::size_t c = trail_.size(); c-- > trail_lim_[static_cast<std::size_t>(level)];) {
      const auto v = var(trail_[c]);
      assigns_[v] = kUnassigned;
      reason_[v] = kNoReason;
      polarity_[v] = static_cast<std::uint8_t>(sign(trail_[c]));
      heap_insert(v);
    }
    qhead_ = trail_lim_[static_cast<std::size_t>(level)];
    trail_.resize(trail_lim_[static_cast<std::size_t>(level)]);
    trail_lim_.resize(static_cast<std::size_t>(level));
  }

  std::optional<Lit> pick_branch() {
    if (opts_.random_decision_freq > 0.0 && !heap_.empty()) {
      std::uniform_real_distribution<double> coin(0.0, 1.0);
      if (coin(rng_) < opts_.random_decision_freq) {
        const auto v = heap_[std::uniform_int_distribution<std::size_t>(0, heap_.size() - 1)(rng_)];
        if (assigns_[v] == kUnassigned) return 2 * v + polarity_[v];
      }
    }
    while (!heap_.empty()) {
      const auto v = heap_pop();
      if (assigns_[v] == kUnassigned) return 2 * v + polarity_[v];
    }
    return std::nullopt;
  }

  void reduce_db() {
    std::vector<CRef> keep;
    std::sort(learnts_.begin(), learnts_.end(), [&](CRef a, CRef b) {
      const auto& ca = clauses_[a];
      const auto& cb = clauses_[b];
      return ca.lits.size() > 2 && (cb.lits.size() == 2 || ca.activity < cb.activity);
    });
    const double extra = cla_inc_ / static_cast<double>(learnts_.size());
    for (std::size_t i = 0; i < learnts_.size(); ++i) {
      StoredClause& c = clauses_[learnts_[i]];
      const bool locked = reason_[var(c.lits[0])] == learnts_[i] && value(c.lits[0]) == kTrue;
      if (c.lits.size() > 2 && !locked && (i < learnts_.size() / 2 || c.activity < extra)) {
        c.removed = true;
        c.lits.shrink_to_fit();
      } else {
        keep.push_back(learnts_[i]);
      }
    }
    learnts_.swap(keep);
    for (auto& ws : watches_)
      ws.erase(std::remove_if(ws.begin(), ws.end(), [&](const Watcher& w) { return clauses_[w.cref].removed; }),
               ws.end());
  }

  static double luby(double y, std::uint64_t x) {
    std::uint64_t size = 1, seq = 0;
    while (size < x + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      --seq;
      x = x % size;
    }
    double r = 1.0;
    for (std::uint64_t i = 0; i < seq; ++i) r *= y;
    return r;
  }

  template <typename Clock>
  bool out_of_budget(const Clock& start) const {
    if (stats_.conflicts >= opts_.conflict_budget) return true;
    if (opts_.time_budget_s != std::numeric_limits<double>::infinity() && (stats_.conflicts & 0xff) == 0) {
      const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return t > opts_.time_budget_s;
    }
    return false;
  }

  template <typename TimePoint>
  SolveStatus search_loop(const TimePoint& start) {
    max_learnts_ = std::max<double>(static_cast<double>(clauses_.size()) / 3.0, 1000.0);
    std::uint64_t restart_no = 0;
    std::vector<Lit> learnt;
    for (;;) {
      const auto restart_limit = static_cast<std::uint64_t>(luby(2.0, restart_no) * 100.0);
      std::uint64_t conflicts_here = 0;
      for (;;) {
        const CRef confl = propagate();
        if (confl != kNoReason) {
          ++stats_.conflicts;
          ++conflicts_here;
          if (decision_level() == 0) return SolveStatus::kUnsat;
          int bt = 0;
          analyze(confl, learnt, bt);
          cancel_until(bt);
          if (learnt.size() == 1) {
            enqueue(learnt[0], kNoReason);
          } else {
            const CRef cr = static_cast<CRef>(clauses_.size());
            clauses_.push_back({learnt, 0.0, true, false});
            learnts_.push_back(cr);
            attach(cr);
            bump_clause(clauses_[cr]);
            enqueue(learnt[0], cr);
          }
          var_inc_ /= 0.95;
          cla_inc_ /= 0.999;
          if (out_of_budget(start)) {
            cancel_until(0);
            return SolveStatus::kUnknown;
          }
          continue;
        }
        if (conflicts_here >= restart_limit) {
          cancel_until(0);
          ++stats_.restarts;
          break;
        }
        if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts_) {
          reduce_db();
          max_learnts_ *= 1.1;
        }
        const auto next = pick_branch();
        if (!next) return SolveStatus::kSat;
        ++stats_.decisions;
        trail_lim_.push_back(trail_.size());
        enqueue(*next, kNoReason);
      }
      ++restart_no;
    }
  }

  SolverOptions opts_;
  std::mt19937_64 rng_;
  std::int32_t num_vars_ = 0;
  bool ok_ = true;
  std::vector<std::uint8_t> assigns_;
  std::vector<int> level_;
  std::vector<CRef> reason_;
  std::vector<std::uint8_t> polarity_;
  std::vector<double> activity_;
  std::vector<std::uint8_t> seen_;
  std::vector<std::uint32_t> heap_;
  std::vector<std::int32_t> heap_pos_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<StoredClause> clauses_;
  std::vector<CRef> learnts_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::vector<Lit> analyze_toclear_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 0.0;
  SolveStats stats_;
};

// Solves with the built-in solver and re-checks any model with the
// independent evaluator.
inline SolveResult solve(const Cnf& cnf, const SolverOptions& opts = {}) {
  CdclSolver solver(opts);
  SolveResult r = solver.solve(cnf);
  if (r.status == SolveStatus::kSat && !satisfies(cnf, *r.model))
    throw std::logic_error("built-in solver produced a model that fails verification");
  return r;
}

}  // namespace csync
