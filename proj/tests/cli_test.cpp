#include <gtest/gtest.h>

#include <sys/wait.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "csync/automaton.hpp"
#include "csync/cnf.hpp"

namespace csync {
namespace {

const std::string kCli = CSYNC_CLI;

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  for (std::size_t k; (k = fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, k);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("csync_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream(path) << content;
    return path.string();
  }

  std::filesystem::path dir_;
};

TEST_F(Cli, EncodeWritesDimacs) {
  const CliRun r = run("encode " + file("a1.pfa", "2 2\n1 2\n1 0\n") + " -l 1");
  ASSERT_EQ(r.code, 0);
  const Cnf cnf = parse_dimacs(r.out);
  EXPECT_EQ(cnf.var_count, 6);
  EXPECT_EQ(cnf.clauses.size(), 9u);
  EXPECT_EQ(r.out.rfind("c ", 0), 0u);
}

TEST_F(Cli, SolveAutomatonAndDimacs) {
  const std::string a1 = file("a1.pfa", "2 2\n1 2\n1 0\n");
  CliRun r = run("solve " + a1 + " -l 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "SAT\nword a\n");
  r = run("solve " + file("u.cnf", "p cnf 1 2\n1 0\n-1 0\n"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "s UNSATISFIABLE\n");
  r = run("solve " + file("s.cnf", "p cnf 2 2\n1 0\n-1 -2 0\n"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "s SATISFIABLE\nv 1 -2 0\n");
  EXPECT_EQ(run("solve " + a1).code, 1);
}

TEST_F(Cli, MinAndOracleAgree) {
  const std::string c3 = file("c3.pfa", "3 2\n2 2\n3 2\n1 3\n");
  const std::string probes = (dir_ / "probes.csv").string();
  const CliRun m = run("min " + c3 + " --emit-probes " + probes);
  ASSERT_EQ(m.code, 0);
  EXPECT_NE(m.out.find("status FOUND\nlength 4\n"), std::string::npos) << m.out;
  std::ifstream pin(probes);
  std::string header;
  std::getline(pin, header);
  EXPECT_EQ(header, "length,result,seconds");
  const CliRun o = run("oracle " + c3);
  ASSERT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("status FOUND\nlength 4\nword baab\n"), std::string::npos) << o.out;
}

TEST_F(Cli, MinReportsNonSynchronizingAndBounds) {
  CliRun r = run("min " + file("swap.pfa", "2 2\n2 1\n1 0\n"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("status NOT_SYNCHRONIZING"), std::string::npos);
  r = run("min " + file("perm.pfa", "3 2\n2 1\n3 1\n1 0\n") + " --exact-precheck 0 --max-length 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("status UNKNOWN_UP_TO_BOUND\nbound 3"), std::string::npos) << r.out;
}

TEST_F(Cli, OracleBudget) {
  const CliRun r = run("oracle " + file("p.pfa", "3 2\n2 2\n3 2\n1 3\n") + " --max-visited 1");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("status BUDGET_EXCEEDED"), std::string::npos);
}

TEST_F(Cli, MalformedInputIsUsageError) {
  EXPECT_EQ(run("min " + file("bad.pfa", "2 2\n1 5\n1 0\n")).code, 1);
  EXPECT_EQ(run("min " + (dir_ / "missing.pfa").string()).code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("").code, 1);
}

TEST_F(Cli, ExternalLiarIsCorrectnessFailure) {
  const std::string liar = std::string(CSYNC_FIXTURES) + "/liar.sh";
  const CliRun r = run("--backend 'external:sh " + liar + "' solve " + file("a.pfa", "2 2\n1 2\n1 0\n") + " -l 1");
  EXPECT_EQ(r.code, 3);
}

TEST_F(Cli, GenIsDeterministic) {
  const CliRun a = run("--seed 9 gen --n 7"), b = run("--seed 9 gen --n 7");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const Pfa pfa = parse_pfa(a.out);
  EXPECT_EQ(pfa.states(), 7u);
  EXPECT_EQ(pfa.undefined_count(), 1u);

  const CliRun d = run("gen --family random --n 5 --k 2 --count 3 --out-dir " + (dir_ / "out").string());
  ASSERT_EQ(d.code, 0);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir_ / "out")) {
    ++files;
    std::ifstream in(e.path());
    EXPECT_EQ(parse_pfa(in).undefined_count(), 2u);
  }
  EXPECT_EQ(files, 3u);
  EXPECT_EQ(run("gen --count 2").code, 1);
  EXPECT_EQ(parse_pfa(run("gen --family pn --n 5").out), parse_pfa("5 2\n2 0\n3 3\n3 4\n4 5\n5 1\n"));
}

TEST_F(Cli, BenchAndFit) {
  const std::string prefix = (dir_ / "plot").string();
  const CliRun e = run("bench experiment --family pn --sizes 4..6 --gnuplot " + prefix);
  ASSERT_EQ(e.code, 0);
  EXPECT_EQ(e.out.substr(0, e.out.find('\n')), "n,samples,discards,mean_length,rsd,mean_time_s,budget_exceeded");
  EXPECT_NE(e.out.find("\n5,1,0,15.000000,"), std::string::npos) << e.out;
  EXPECT_TRUE(std::filesystem::exists(prefix + ".gp"));
  EXPECT_TRUE(std::filesystem::exists(prefix + ".dat"));

  const CliRun c = run("--format tsv bench compare --sizes 5,6 --samples 5");
  ASSERT_EQ(c.code, 0);
  EXPECT_NE(c.out.find("n\tsamples\tdiscards"), std::string::npos);

  std::string table = "n,mean_length\n";
  for (int n = 1; n <= 6; ++n) table += std::to_string(n) + "," + std::to_string(2 + n * n * n) + "\n";
  const CliRun f = run("fit " + file("t.csv", table));
  ASSERT_EQ(f.code, 0);
  EXPECT_NE(f.out.find("c0 2\n"), std::string::npos) << f.out;
  EXPECT_NE(f.out.find("c3 1\n"), std::string::npos) << f.out;
}

}  // namespace
}  // namespace csync
