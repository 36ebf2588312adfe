// csync: careful synchronization of partial automata via SAT.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csync/automaton.hpp"
#include "csync/cnf.hpp"
#include "csync/encoder.hpp"
#include "csync/experiment.hpp"
#include "csync/external.hpp"
#include "csync/generators.hpp"
#include "csync/oracle.hpp"
#include "csync/search.hpp"
#include "csync/solver.hpp"

namespace {

using namespace csync;

enum ExitCode { kOk = 0, kUsage = 1, kBudget = 2, kCorrectness = 3 };

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_like_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return line[pos] == 'p' || line[pos] == 'c';
  }
  return false;
}

std::vector<std::size_t> parse_sizes(const std::string& spec) {
  // "10,20,50" or "6..14"
  std::vector<std::size_t> out;
  if (const auto dots = spec.find(".."); dots != std::string::npos) {
    const auto lo = std::stoul(spec.substr(0, dots)), hi = std::stoul(spec.substr(dots + 2));
    for (auto n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  std::istringstream in(spec);
  for (std::string tok; std::getline(in, tok, ',');)
    if (!tok.empty()) out.push_back(std::stoul(tok));
  return out;
}

void print_outcome(const SearchOutcome& o, const Pfa& pfa) {
  std::cout << "status " << to_string(o.status) << '\n';
  if (o.status == SearchStatus::kFound) {
    std::cout << "length " << o.min_length << '\n';
    std::cout << "word " << (o.witness.empty() ? "(empty)" : format_word(o.witness, pfa.letters())) << '\n';
  }
  std::cout << "bound " << o.bound << '\n';
  std::cout << "seconds " << o.seconds << '\n';
}

int status_exit(SearchStatus s) { return s == SearchStatus::kBudgetExceeded ? kBudget : kOk; }

void write_gnuplot(const std::string& prefix, const std::string& data_text, bool compare) {
  std::ofstream(prefix + ".dat") << data_text;
  std::ofstream gp(prefix + ".gp");
  gp << "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'n'\n";
  if (compare) {
    gp << "set ylabel 'time (s)'\nplot '" << prefix << ".dat' using 1:6 with linespoints title 'SAT', '' using 1:7 "
       << "with linespoints title 'power automaton'\n";
  } else {
    gp << "set ylabel 'mean minimal length'\nplot '" << prefix << ".dat' using 1:4 with linespoints title 'l(n)'\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Careful synchronization of partial automata via SAT"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string backend_spec = "builtin";
  std::string format = "csv";
  app.add_option("--seed", seed, "Base seed for generators and experiments");
  app.add_option("--backend", backend_spec, "builtin or external:<command>");
  app.add_option("--format", format, "Table format")->check(CLI::IsMember({"csv", "tsv"}));

  // encode
  auto* enc = app.add_subcommand("encode", "Write the DIMACS instance for (automaton, length)");
  std::string enc_in;
  std::int32_t enc_len = 1;
  enc->add_option("input", enc_in, "Automaton file ('-' for stdin)")->required();
  enc->add_option("-l,--length", enc_len, "Word length")->required()->check(CLI::PositiveNumber);

  // solve
  auto* sol = app.add_subcommand("solve", "Solve a DIMACS file, or an automaton at a given length");
  std::string sol_in;
  std::int32_t sol_len = 0;
  sol->add_option("input", sol_in, "DIMACS or automaton file ('-' for stdin)")->required();
  sol->add_option("-l,--length", sol_len, "Word length (automaton input)");

  // min
  auto* mn = app.add_subcommand("min", "Minimal carefully synchronizing word by SAT search");
  std::string mn_in, mn_probes;
  std::int64_t mn_max = std::int64_t{1} << 20;
  std::size_t mn_precheck = 24;
  mn->add_option("input", mn_in, "Automaton file ('-' for stdin)")->required();
  mn->add_option("--max-length", mn_max, "Largest length probed")->check(CLI::PositiveNumber);
  mn->add_option("--emit-probes", mn_probes, "Write the probe record as CSV to this file");
  mn->add_option("--exact-precheck", mn_precheck,
                 "Refute synchronizability with the subset oracle up to this many states (0 = off)");

  // oracle
  auto* orc = app.add_subcommand("oracle", "Minimal carefully synchronizing word by subset BFS");
  std::string orc_in;
  OracleOptions orc_opts;
  orc->add_option("input", orc_in, "Automaton file ('-' for stdin)")->required();
  orc->add_option("--max-states", orc_opts.max_states, "Largest automaton accepted");
  orc->add_option("--max-visited", orc_opts.max_visited, "Subset budget");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate benchmark automata");
  std::string gen_family = "random", gen_dir;
  std::size_t gen_n = 10, gen_k = 1, gen_count = 1;
  gen->add_option("--family", gen_family)->check(CLI::IsMember({"random", "pn"}));
  gen->add_option("--n", gen_n, "Number of states");
  gen->add_option("--k", gen_k, "Undefined transitions of letter b (random family)");
  gen->add_option("--count", gen_count, "Number of automata");
  gen->add_option("--out-dir", gen_dir, "Directory for one file per automaton (required when count > 1)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run experiments");
  bench->require_subcommand(1);
  auto* exp = bench->add_subcommand("experiment", "Average minimal length per n over random automata");
  std::string exp_family = "random", exp_sizes = "10", exp_gnuplot;
  ExperimentConfig exp_cfg;
  std::size_t exp_k = 1;
  exp->add_option("--family", exp_family)->check(CLI::IsMember({"random", "pn"}));
  exp->add_option("--sizes", exp_sizes, "Comma list or range lo..hi");
  exp->add_option("--samples", exp_cfg.samples);
  exp->add_option("--k", exp_k, "Undefined transitions of letter b");
  exp->add_option("--max-length", exp_cfg.search.max_length)->check(CLI::PositiveNumber);
  exp->add_option("--gnuplot", exp_gnuplot, "Also write <prefix>.dat and <prefix>.gp");
  auto* cmp = bench->add_subcommand("compare", "SAT search versus subset BFS on identical instances");
  std::string cmp_sizes = "6..14", cmp_gnuplot;
  CompareConfig cmp_cfg;
  cmp->add_option("--sizes", cmp_sizes, "Comma list or range lo..hi");
  cmp->add_option("--samples", cmp_cfg.samples);
  cmp->add_option("--k", cmp_cfg.undefined, "Undefined transitions of letter b");
  cmp->add_option("--max-visited", cmp_cfg.oracle.max_visited, "Oracle subset budget");
  cmp->add_option("--gnuplot", cmp_gnuplot, "Also write <prefix>.dat and <prefix>.gp");

  // fit
  auto* fit = app.add_subcommand("fit", "Least-squares cubic through (n, value) rows");
  std::string fit_in, fit_col = "mean_length";
  fit->add_option("input", fit_in, "CSV/TSV with a header row ('-' for stdin)")->required();
  fit->add_option("--column", fit_col, "Value column (first column is n)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  const TableFormat table{format == "tsv" ? '\t' : ','};
  try {
    const Backend backend = Backend::parse(backend_spec);

    if (*enc) {
      const Pfa pfa = parse_pfa(read_input(enc_in));
      std::cout << to_dimacs(encode(pfa, enc_len));
      return kOk;
    }

    if (*sol) {
      const std::string text = read_input(sol_in);
      if (looks_like_dimacs(text)) {
        const Cnf cnf = parse_dimacs(text);
        const SolveResult r = backend.run(cnf);
        std::cout << "s " << (r.status == SolveStatus::kSat     ? "SATISFIABLE"
                              : r.status == SolveStatus::kUnsat ? "UNSATISFIABLE"
                                                                : "UNKNOWN")
                  << '\n';
        if (r.model) {
          std::cout << 'v';
          for (std::int32_t v = 1; v <= cnf.var_count; ++v) std::cout << ' ' << (r.model->value(v) ? v : -v);
          std::cout << " 0\n";
        }
        return r.status == SolveStatus::kUnknown ? kBudget : kOk;
      }
      if (sol_len < 1) throw std::invalid_argument("--length is required for automaton input");
      const Pfa pfa = parse_pfa(text);
      const CnfInstance inst = encode(pfa, sol_len);
      const SolveResult r = backend.run(inst.cnf);
      std::cout << to_string(r.status) << '\n';
      if (r.status == SolveStatus::kSat) {
        const Word w = decode_word(*r.model, inst.layout);
        if (!is_carefully_synchronizing(pfa, w)) throw CorrectnessError("decoded word fails the careful check");
        std::cout << "word " << format_word(w, pfa.letters()) << '\n';
      }
      return r.status == SolveStatus::kUnknown ? kBudget : kOk;
    }

    if (*mn) {
      const Pfa pfa = parse_pfa(read_input(mn_in));
      SearchOptions opts;
      opts.max_length = mn_max;
      opts.backend = backend;
      opts.exact_precheck_states = mn_precheck;
      const SearchOutcome o = min_csw(pfa, opts);
      print_outcome(o, pfa);
      if (!mn_probes.empty()) {
        std::ofstream f(mn_probes);
        f << "length" << table.separator << "result" << table.separator << "seconds\n";
        for (const Probe& p : o.probes)
          f << p.length << table.separator << (p.sat ? "SAT" : "UNSAT") << table.separator << p.seconds << '\n';
      }
      return status_exit(o.status);
    }

    if (*orc) {
      const Pfa pfa = parse_pfa(read_input(orc_in));
      const SearchOutcome o = power_bfs(pfa, orc_opts);
      print_outcome(o, pfa);
      std::cout << "visited " << o.visited << '\n';
      return status_exit(o.status);
    }

    if (*gen) {
      if (gen_count > 1 && gen_dir.empty()) throw std::invalid_argument("--out-dir is required when --count > 1");
      if (!gen_dir.empty()) std::filesystem::create_directories(gen_dir);
      for (std::size_t i = 0; i < gen_count; ++i) {
        const std::uint64_t s = seed + i;
        std::string comment, name;
        Pfa pfa = gen_family == "pn" ? pn(gen_n) : [&] {
          GenConfig cfg;
          cfg.n = gen_n;
          cfg.undefined = gen_k;
          cfg.seed = s;
          return random_pfa(cfg);
        }();
        if (gen_family == "pn") {
          comment = "family=pn n=" + std::to_string(gen_n);
          name = "pn_n" + std::to_string(gen_n) + ".pfa";
        } else {
          comment = "family=random n=" + std::to_string(gen_n) + " k=" + std::to_string(gen_k) +
                    " seed=" + std::to_string(s);
          name = "random_n" + std::to_string(gen_n) + "_k" + std::to_string(gen_k) + "_s" + std::to_string(s) + ".pfa";
        }
        if (gen_dir.empty()) {
          write_pfa(std::cout, pfa, comment);
        } else {
          std::ofstream f(std::filesystem::path(gen_dir) / name);
          write_pfa(f, pfa, comment);
        }
      }
      return kOk;
    }

    if (*exp) {
      exp_cfg.sizes = parse_sizes(exp_sizes);
      exp_cfg.seed = seed;
      exp_cfg.search.backend = backend;
      const auto source = exp_family == "pn" ? pn_source() : random_source(exp_k);
      if (exp_family == "pn") exp_cfg.samples = 1;
      const auto rows = run_experiment(source, exp_cfg);
      std::ostringstream csv;
      write_experiment_csv(csv, rows, table);
      std::cout << csv.str();
      if (!exp_gnuplot.empty()) {
        std::ostringstream data;
        write_experiment_csv(data, rows);
        write_gnuplot(exp_gnuplot, data.str(), false);
      }
      for (const auto& r : rows)
        if (r.budget_exceeded) return kBudget;
      return kOk;
    }

    if (*cmp) {
      cmp_cfg.sizes = parse_sizes(cmp_sizes);
      cmp_cfg.seed = seed;
      cmp_cfg.search.backend = backend;
      const auto rows = compare_backends(cmp_cfg);
      std::ostringstream csv;
      write_compare_csv(csv, rows, table);
      std::cout << csv.str();
      if (!cmp_gnuplot.empty()) {
        std::ostringstream data;
        write_compare_csv(data, rows);
        write_gnuplot(cmp_gnuplot, data.str(), true);
      }
      for (const auto& r : rows)
        if (r.disagreements) {
          std::cerr << "error: SAT and oracle lengths disagree at n=" << r.n << '\n';
          return kCorrectness;
        }
      for (const auto& r : rows)
        if (r.oracle_budget_exceeded) return kBudget;
      return kOk;
    }

    if (*fit) {
      std::istringstream in(read_input(fit_in));
      std::string header;
      std::getline(in, header);
      const char sep = header.find('\t') != std::string::npos ? '\t' : ',';
      std::vector<std::string> cols;
      {
        std::istringstream hs(header);
        for (std::string c; std::getline(hs, c, sep);) cols.push_back(c);
      }
      std::size_t col = 1;
      for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i] == fit_col) col = i;
      if (cols.size() < 2) throw std::invalid_argument("fit input needs at least two columns");
      std::vector<std::pair<double, double>> pts;
      for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, sep);) cells.push_back(c);
        if (cells.size() <= col) throw std::invalid_argument("short row: " + line);
        pts.emplace_back(std::stod(cells[0]), std::stod(cells[col]));
      }
      const FitResult r = fit_cubic(pts);
      std::cout << std::setprecision(10);
      for (int i = 0; i < 4; ++i) std::cout << "c" << i << ' ' << r.coefficients[i] << '\n';
      std::cout << "rss " << r.rss << '\n';
      return kOk;
    }
  } catch (const CorrectnessError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCorrectness;
  } catch (const ExternalSolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ExternalSolverError::Kind::kModelVerificationFailed ? kCorrectness : kUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::out_of_range*>(&e) ? kUsage
                                                                                                          : kCorrectness;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
