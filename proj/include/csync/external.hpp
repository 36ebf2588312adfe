#pragma once

// Adapter for external SAT solvers reading DIMACS.
//
// The command is a shell command template. "{input}" is replaced by the path
// of a temporary DIMACS file (appended as the last argument when absent) and
// "{output}" by the path of a temporary result file. Results are accepted in
// SAT-competition form on stdout ("s SATISFIABLE" plus "v" lines) or, when
// "{output}" is used, in MiniSat's result-file form ("SAT" then the model, or
// "UNSAT"). Every model is re-verified before it is returned.

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cnf.hpp"
#include "solver.hpp"

namespace csync {

class ExternalSolverError : public std::runtime_error {
 public:
  enum class Kind { kProcessFailure, kUnparseableOutput, kModelVerificationFailed };

  ExternalSolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

namespace detail {

class TempFile {
 public:
  explicit TempFile(const char* suffix) {
    std::string tmpl = (std::filesystem::temp_directory_path() / "csync-XXXXXX").string() + suffix;
    const int fd = mkstemps(tmpl.data(), static_cast<int>(std::char_traits<char>::length(suffix)));
    if (fd < 0) throw ExternalSolverError(ExternalSolverError::Kind::kProcessFailure, "cannot create temporary file");
    ::close(fd);
    path_ = tmpl;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

inline void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

// Reads model literals into `model`; returns false on a malformed token.
inline bool read_model_tokens(std::istream& in, Assignment& model) {
  long long lit;
  while (in >> lit) {
    if (lit == 0) continue;
    const long long v = std::llabs(lit);
    if (v > model.var_count()) continue;  // solvers may print auxiliary variables
    model.set(static_cast<std::int32_t>(v), lit > 0);
  }
  return in.eof();
}

inline std::optional<SolveStatus> parse_competition_output(const std::string& out, Assignment& model) {
  std::optional<SolveStatus> status;
  std::istringstream lines(out);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("s ", 0) == 0) {
      if (line.find("UNSATISFIABLE") != std::string::npos)
        status = SolveStatus::kUnsat;
      else if (line.find("SATISFIABLE") != std::string::npos)
        status = SolveStatus::kSat;
      else if (line.find("UNKNOWN") != std::string::npos)
        status = SolveStatus::kUnknown;
    } else if (line.rfind("v ", 0) == 0 || line == "v") {
      std::istringstream vs(line.substr(1));
      if (!read_model_tokens(vs, model))
        throw ExternalSolverError(ExternalSolverError::Kind::kUnparseableOutput, "malformed model line: " + line);
    }
  }
  return status;
}

inline std::optional<SolveStatus> parse_minisat_result(const std::string& path, Assignment& model) {
  std::ifstream in(path);
  std::string head;
  if (!(in >> head)) return std::nullopt;
  if (head == "UNSAT") return SolveStatus::kUnsat;
  if (head == "INDET") return SolveStatus::kUnknown;
  if (head != "SAT") return std::nullopt;
  if (!read_model_tokens(in, model))
    throw ExternalSolverError(ExternalSolverError::Kind::kUnparseableOutput, "malformed model in result file");
  return SolveStatus::kSat;
}

}  // namespace detail

inline SolveResult solve_external(const Cnf& cnf, const std::string& command) {
  validate(cnf);
  const auto start = std::chrono::steady_clock::now();
  detail::TempFile input(".cnf");
  detail::TempFile output(".out");
  {
    std::ofstream f(input.path());
    write_dimacs(f, cnf);
    if (!f) throw ExternalSolverError(ExternalSolverError::Kind::kProcessFailure, "cannot write DIMACS input");
  }

  std::string cmd = command;
  const bool uses_output = cmd.find("{output}") != std::string::npos;
  if (cmd.find("{input}") == std::string::npos) cmd += " {input}";
  detail::replace_all(cmd, "{input}", detail::shell_quote(input.path()));
  detail::replace_all(cmd, "{output}", detail::shell_quote(output.path()));
  cmd += " 2>/dev/null";

  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw ExternalSolverError(ExternalSolverError::Kind::kProcessFailure, "cannot launch: " + command);
  std::string stdout_text;
  std::array<char, 4096> buf;
  for (std::size_t got; (got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0;) stdout_text.append(buf.data(), got);
  const int raw = ::pclose(pipe);
  const int code = raw != -1 && WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;

  Assignment model(cnf.var_count);
  std::optional<SolveStatus> status = detail::parse_competition_output(stdout_text, model);
  if (!status && uses_output) status = detail::parse_minisat_result(output.path(), model);
  if (!status) {
    // exit codes 10/20 are the competition convention for SAT/UNSAT
    if (code != 0 && code != 10 && code != 20)
      throw ExternalSolverError(ExternalSolverError::Kind::kProcessFailure,
                                "solver exited with status " + std::to_string(code));
    throw ExternalSolverError(ExternalSolverError::Kind::kUnparseableOutput, "no result line in solver output");
  }

  SolveResult result;
  result.status = *status;
  if (result.status == SolveStatus::kSat) {
    if (!satisfies(cnf, model))
      throw ExternalSolverError(ExternalSolverError::Kind::kModelVerificationFailed, "model verification failed");
    result.model = std::move(model);
  }
  result.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace csync
