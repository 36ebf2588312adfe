#pragma once

// Experiment drivers: average minimal length ℓ(n) over random datasets, a
// least-squares cubic fit of ℓ(n), and the SAT-versus-subset-BFS comparison.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "automaton.hpp"
#include "generators.hpp"
#include "oracle.hpp"
#include "search.hpp"

namespace csync {

using AutomatonSource = std::function<Pfa(std::size_t n, std::uint64_t seed)>;

inline AutomatonSource random_source(std::size_t undefined = 1) {
  return [undefined](std::size_t n, std::uint64_t seed) {
    GenConfig cfg;
    cfg.n = n;
    cfg.undefined = undefined;
    cfg.seed = seed;
    return random_pfa(cfg);
  };
}

inline AutomatonSource pn_source() {
  return [](std::size_t n, std::uint64_t) { return pn(n); };
}

struct SampleStats {
  double mean = 0.0;
  double rsd = 0.0;  // sample standard deviation over the mean
};

inline SampleStats sample_stats(const std::vector<double>& xs) {
  SampleStats s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2 || s.mean == 0.0) return s;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.rsd = std::sqrt(ss / static_cast<double>(xs.size() - 1)) / s.mean;
  return s;
}

struct ExperimentConfig {
  std::vector<std::size_t> sizes;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  SearchOptions search = [] {
    SearchOptions o;
    o.max_length = 4096;
    o.exact_precheck_states = kStateSetCap;
    o.precheck_max_visited = std::uint64_t{1} << 22;
    return o;
  }();
  // Attempts per row before giving up on reaching `samples`.
  std::size_t max_attempts_per_sample = 20;
};

struct ExperimentRow {
  std::size_t n = 0;
  std::size_t samples = 0;
  std::size_t discards = 0;
  std::size_t budget_exceeded = 0;
  double mean_length = 0.0;
  double rsd = 0.0;
  double mean_time_s = 0.0;
  std::vector<std::int64_t> lengths;
};

// For each n, draws automata with seeds seed, seed+1, ... and keeps the first
// `samples` that are carefully synchronizing; the rest count as discards.
inline std::vector<ExperimentRow> run_experiment(const AutomatonSource& source, const ExperimentConfig& cfg) {
  std::vector<ExperimentRow> rows;
  for (std::size_t n : cfg.sizes) {
    ExperimentRow row;
    row.n = n;
    std::vector<double> lengths;
    double total_time = 0.0;
    const std::size_t max_attempts = cfg.samples * cfg.max_attempts_per_sample + 100;
    for (std::size_t attempt = 0; row.samples < cfg.samples && attempt < max_attempts; ++attempt) {
      const Pfa pfa = source(n, cfg.seed + attempt);
      const SearchOutcome out = min_csw(pfa, cfg.search);
      switch (out.status) {
        case SearchStatus::kFound:
          ++row.samples;
          row.lengths.push_back(out.min_length);
          lengths.push_back(static_cast<double>(out.min_length));
          total_time += out.seconds;
          break;
        case SearchStatus::kBudgetExceeded:
          ++row.budget_exceeded;
          ++row.discards;
          break;
        default:
          ++row.discards;
      }
    }
    const SampleStats st = sample_stats(lengths);
    row.mean_length = st.mean;
    row.rsd = st.rsd;
    row.mean_time_s = row.samples ? total_time / static_cast<double>(row.samples) : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

struct TableFormat {
  char separator = ',';
};

inline void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, TableFormat fmt = {}) {
  const char s = fmt.separator;
  out << "n" << s << "samples" << s << "discards" << s << "mean_length" << s << "rsd" << s << "mean_time_s" << s
      << "budget_exceeded\n";
  for (const auto& r : rows) {
    std::ostringstream line;
    line << r.n << s << r.samples << s << r.discards << s << std::fixed << std::setprecision(6) << r.mean_length
         << s << r.rsd << s << std::setprecision(9) << r.mean_time_s << s << r.budget_exceeded;
    out << line.str() << '\n';
  }
}

// ---------------------------------------------------------------------------

struct FitResult {
  std::array<double, 4> coefficients{};  // c0 + c1 n + c2 n² + c3 n³
  double rss = 0.0;

  double operator()(double x) const {
    return coefficients[0] + x * (coefficients[1] + x * (coefficients[2] + x * coefficients[3]));
  }
};

inline double residual_sum_of_squares(const std::array<double, 4>& c, const std::vector<std::pair<double, double>>& pts) {
  long double rss = 0.0L;
  for (auto [x, y] : pts) {
    const long double lx = x;
    const long double r = y - (c[0] + lx * (c[1] + lx * (c[2] + lx * c[3])));
    rss += r * r;
  }
  return static_cast<double>(rss);
}

// Least-squares cubic through (n, ℓ(n)) points via the 4×4 normal equations.
// The abscissa is centred and scaled before forming the equations; the
// solution is then expanded back into powers of n.
inline FitResult fit_cubic(const std::vector<std::pair<double, double>>& pts) {
  std::set<double> distinct;
  for (auto [x, y] : pts) distinct.insert(x);
  if (distinct.size() < 4)
    throw std::invalid_argument("cubic fit needs at least 4 distinct abscissae, got " + std::to_string(distinct.size()));

  long double lo = *distinct.begin(), hi = *distinct.rbegin();
  const long double centre = (lo + hi) / 2, half = (hi - lo) / 2;

  using Row = std::array<long double, 5>;
  std::array<Row, 4> a{};
  for (auto [x, y] : pts) {
    const long double u = (x - centre) / half;
    const std::array<long double, 4> p{1.0L, u, u * u, u * u * u};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) a[i][j] += p[i] * p[j];
      a[i][4] += p[i] * y;
    }
  }
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-300L) throw std::invalid_argument("normal equations are singular");
    std::swap(a[col], a[piv]);
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const long double f = a[r][col] / a[col][col];
      for (int k = col; k < 5; ++k) a[r][k] -= f * a[col][k];
    }
  }
  std::array<long double, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = a[i][4] / a[i][i];

  // Σ b_k ((x - centre)/half)^k expanded in powers of x.
  std::array<long double, 4> c{};
  const long double binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  for (int k = 0; k < 4; ++k) {
    const long double scale = b[k] / std::pow(half, static_cast<long double>(k));
    for (int j = 0; j <= k; ++j)
      c[j] += scale * binom[k][j] * std::pow(-centre, static_cast<long double>(k - j));
  }
  FitResult fit;
  for (int i = 0; i < 4; ++i) fit.coefficients[i] = static_cast<double>(c[i]);
  fit.rss = residual_sum_of_squares(fit.coefficients, pts);
  return fit;
}

// ---------------------------------------------------------------------------

struct CompareConfig {
  std::vector<std::size_t> sizes;
  std::size_t samples = 50;
  std::uint64_t seed = 1;
  std::size_t undefined = 1;
  SearchOptions search = [] {
    SearchOptions o;
    o.max_length = 4096;
    return o;
  }();
  OracleOptions oracle;
  std::size_t max_attempts_per_sample = 20;
};

struct CompareRow {
  std::size_t n = 0;
  std::size_t samples = 0;
  std::size_t discards = 0;
  std::size_t disagreements = 0;
  std::size_t oracle_budget_exceeded = 0;
  double sat_mean_time_s = 0.0;
  double oracle_mean_time_s = 0.0;
};

// Runs both exact methods on the same random automata. Instances the oracle
// proves non-synchronizing are discarded (after checking that the cheap
// refutations used by the SAT path never contradict it); on the others the
// SAT path runs without the oracle precheck and both lengths must match.
inline std::vector<CompareRow> compare_backends(const CompareConfig& cfg) {
  std::vector<CompareRow> rows;
  SearchOptions sat_opts = cfg.search;
  sat_opts.exact_precheck_states = 0;
  const AutomatonSource source = random_source(cfg.undefined);
  for (std::size_t n : cfg.sizes) {
    CompareRow row;
    row.n = n;
    double sat_time = 0.0, oracle_time = 0.0;
    const std::size_t max_attempts = cfg.samples * cfg.max_attempts_per_sample + 100;
    for (std::size_t attempt = 0; row.samples < cfg.samples && attempt < max_attempts; ++attempt) {
      const Pfa pfa = source(n, cfg.seed + attempt);
      const SearchOutcome oracle = power_bfs(pfa, cfg.oracle);
      if (oracle.status == SearchStatus::kBudgetExceeded) {
        ++row.oracle_budget_exceeded;
        ++row.discards;
        continue;
      }
      const bool cheap_refutation = pfa.total_letters().empty() || !all_pairs_mergeable(pfa);
      if (oracle.status == SearchStatus::kNotSynchronizing) {
        ++row.discards;
        continue;
      }
      const SearchOutcome sat = min_csw(pfa, sat_opts);
      ++row.samples;
      sat_time += sat.seconds;
      oracle_time += oracle.seconds;
      if (cheap_refutation || sat.status != SearchStatus::kFound || sat.min_length != oracle.min_length ||
          !is_carefully_synchronizing(pfa, oracle.witness))
        ++row.disagreements;
    }
    if (row.samples) {
      row.sat_mean_time_s = sat_time / static_cast<double>(row.samples);
      row.oracle_mean_time_s = oracle_time / static_cast<double>(row.samples);
    }
    rows.push_back(row);
  }
  return rows;
}

inline void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows, TableFormat fmt = {}) {
  const char s = fmt.separator;
  out << "n" << s << "samples" << s << "discards" << s << "disagreements" << s << "oracle_budget_exceeded" << s
      << "sat_mean_time_s" << s << "oracle_mean_time_s\n";
  for (const auto& r : rows) {
    std::ostringstream line;
    line << r.n << s << r.samples << s << r.discards << s << r.disagreements << s << r.oracle_budget_exceeded << s
         << std::fixed << std::setprecision(9) << r.sat_mean_time_s << s << r.oracle_mean_time_s;
    out << line.str() << '\n';
  }
}

}  // namespace csync
