#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ckam/cli.hpp"

using namespace ckam;

namespace {

struct TempPath {
  explicit TempPath(const std::string& name) : path("/tmp/ckam_cli_" + name) {}
  ~TempPath() { std::remove(path.c_str()); }
  std::string path;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("detect parse keeps documented defaults") {
  const RunConfig cfg = parse_args({"detect"});
  CHECK(cfg.subcommand == "detect");
  CHECK(cfg.model == "twowave");
  CHECK(cfg.mu == 0.0);
  CHECK(cfg.nu == 1.0);
  CHECK(cfg.k == 1);
  CHECK(cfg.foliation == "r");
  CHECK(cfg.tmax == 150.0);
  CHECK(cfg.rtol == 1e-8);
  CHECK(cfg.atol == 1e-10);
  CHECK(cfg.workers == 1);
  CHECK(cfg.seed == 0u);
}

TEST_CASE("detect flags override defaults, leaving the rest in place") {
  const RunConfig cfg = parse_args(
      {"detect", "--model", "twowave", "--mu", "0.015", "--foliation", "s1",
       "--p0", "0.5"});
  CHECK(cfg.mu == 0.015);
  CHECK(cfg.foliation == "s1");
  CHECK(cfg.p0 == 0.5);
  CHECK(cfg.nu == 1.0);  // untouched defaults
  CHECK(cfg.k == 1);
}

TEST_CASE("qflow sweep parses with a Q-flow line") {
  const RunConfig cfg = parse_args(
      {"sweep", "--model", "qflow", "--q", "5", "--foliation", "qpsi",
       "--ic-line", "y0", "--axis1", "eps:0:0.2:10", "--axis2", "y0:0:5:10",
       "--out", "/tmp/ckam_cli_q5.csv"});
  CHECK(cfg.model == "qflow");
  CHECK(cfg.q == 5);
  CHECK(cfg.foliation == "qpsi");
  CHECK(cfg.ic_line == "y0");
}

TEST_CASE("usage errors name the offending construct") {
  // An initial-condition line from the wrong model family.
  CHECK_THROWS_AS(parse_args({"sweep", "--model", "twowave", "--ic-line", "uu0",
                              "--axis1", "mu:0:0.03:5", "--axis2", "p0:0:1:5",
                              "--out", "/tmp/x.csv"}),
                  CliError);
  CHECK_THROWS_AS(parse_args({"detect", "--no-such-flag", "1"}), CliError);
  CHECK_THROWS_AS(parse_args({"detect", "--mu", "-0.01"}), CliError);
  CHECK_THROWS_AS(parse_args({"detect", "--foliation", "zz"}), CliError);
  CHECK_THROWS_AS(parse_args({"detect", "--model", "qflow", "--foliation", "r"}),
                  CliError);
  CHECK_THROWS_AS(parse_args({"sweep", "--axis1", "mu:0:0.03", "--axis2",
                              "p0:0:1:5", "--out", "/tmp/x.csv"}),
                  CliError);
  CHECK_THROWS_AS(parse_args({"sweep", "--axis1", "mu:0:0.03:5", "--axis2",
                              "p0:0:1:5"}),
                  CliError);  // no --out
  CHECK_THROWS_AS(parse_args({"hist"}), CliError);  // no --input
  CHECK_THROWS_AS(parse_args({"verify", "bogus"}), CliError);
  CHECK_THROWS_AS(parse_args({}), CliError);  // missing subcommand
}

TEST_CASE("config file applies before flags and rejects unknown keys") {
  TempPath cfg_file("opts.cfg");
  std::ofstream(cfg_file.path) << "# tuned defaults\n"
                               << "mu = 0.02\n"
                               << "foliation = p\n"
                               << "\n"
                               << "tmax = 80  # shorter horizon\n";

  const RunConfig from_file = parse_args({"detect", "--config", cfg_file.path});
  CHECK(from_file.mu == 0.02);
  CHECK(from_file.foliation == "p");
  CHECK(from_file.tmax == 80.0);

  const RunConfig overridden =
      parse_args({"detect", "--config", cfg_file.path, "--mu", "0.01"});
  CHECK(overridden.mu == 0.01);       // flag wins
  CHECK(overridden.foliation == "p");  // file still applies elsewhere

  TempPath bad("bad.cfg");
  std::ofstream(bad.path) << "muu = 0.02\n";
  CHECK_THROWS_AS(parse_args({"detect", "--config", bad.path}), CliError);

  TempPath malformed("malformed.cfg");
  std::ofstream(malformed.path) << "just words\n";
  CHECK_THROWS_AS(parse_args({"detect", "--config", malformed.path}), CliError);

  CHECK_THROWS_AS(parse_args({"detect", "--config", "/tmp/ckam_no_such.cfg"}),
                  CliError);
}

TEST_CASE("config can drive a sweep completely") {
  TempPath cfg_file("sweep.cfg");
  std::ofstream(cfg_file.path) << "axis1 = mu:0:0.03:5\n"
                               << "axis2 = p0:0.05:1:5\n"
                               << "out = /tmp/ckam_cli_sweepcfg.csv\n"
                               << "workers = 2\n";
  const RunConfig cfg = parse_args({"sweep", "--config", cfg_file.path});
  CHECK(cfg.axis1 == "mu:0:0.03:5");
  CHECK(cfg.workers == 2);
  CHECK(cfg.out == "/tmp/ckam_cli_sweepcfg.csv");
}

TEST_CASE("help is raised as its own signal") {
  CHECK_THROWS_AS(parse_args({"--help"}), CliHelp);
  CHECK_THROWS_AS(parse_args({"detect", "--help"}), CliHelp);
}

TEST_CASE("verify accepts a positional suite and a seed") {
  const RunConfig cfg = parse_args({"verify", "residuals", "--seed", "7"});
  CHECK(cfg.subcommand == "verify");
  CHECK(cfg.suite == "residuals");
  CHECK(cfg.seed == 7u);
  CHECK(parse_args({"verify"}).suite == "all");
}

TEST_CASE("run_cli detects, sweeps, and histograms end to end") {
  CHECK(run_cli({"detect", "--mu", "0", "--p0", "0.5"}) == 0);

  TempPath csv("e2e.csv");
  TempPath pgm("e2e.pgm");
  const int sweep_rc = run_cli({"sweep", "--foliation", "r", "--axis1",
                                "mu:0:0.03:5", "--axis2", "p0:0.05:1:5",
                                "--out", csv.path, "--image", pgm.path});
  CHECK(sweep_rc == 0);
  const std::string text = slurp(csv.path);
  CHECK(text.rfind("axis1,axis2,status,t_c\n", 0) == 0);
  CHECK(slurp(pgm.path).rfind("P5\n", 0) == 0);

  TempPath hist_out("e2e_hist.csv");
  CHECK(run_cli({"hist", "--input", csv.path, "--bin-width", "30", "--out",
                 hist_out.path}) == 0);
  CHECK(slurp(hist_out.path).rfind("bin_start,count\n", 0) == 0);

  TempPath inv_out("e2e_inv.csv");
  CHECK(run_cli({"hist", "--input", csv.path, "--mode", "inverse", "--out",
                 inv_out.path}) == 0);
  CHECK(slurp(inv_out.path).rfind("axis1,axis2,inv_tc\n", 0) == 0);

  TempPath sec_out("e2e_sec.csv");
  CHECK(run_cli({"section", "--mu", "0", "--p0", "0.5", "--crossings", "3",
                 "--out", sec_out.path}) == 0);
  const std::string sec = slurp(sec_out.path);
  CHECK(sec.rfind("crossing_index,q,p\n", 0) == 0);
}

TEST_CASE("run_cli reports usage failures with a nonzero exit") {
  CHECK(run_cli({"detect", "--mu", "-1"}) == 1);
  CHECK(run_cli({"nonsense"}) == 1);
  CHECK(run_cli({"--help"}) == 0);
}

TEST_CASE("a sweep whose cells all fail exits with the sweep error code") {
  TempPath csv("allerr.csv");
  const int rc = run_cli({"sweep", "--foliation", "s2", "--k", "2", "--axis1",
                          "mu:0:0.02:2", "--axis2", "p0:0.3:0.7:2", "--out",
                          csv.path});
  CHECK(rc == 2);
  // The sweep still completed and persisted every cell.
  const std::string text = slurp(csv.path);
  CHECK(text.rfind("axis1,axis2,status,t_c\n", 0) == 0);
  CHECK(text.find("error") != std::string::npos);
}

TEST_CASE("detect writes a per-step trace when asked") {
  TempPath trace("trace.csv");
  CHECK(run_cli({"detect", "--mu", "0.015", "--p0", "0.5", "--trace",
                 trace.path}) == 0);
  const std::string text = slurp(trace.path);
  CHECK(text.rfind("t,K,guard,c0,c1,c2\n", 0) == 0);
  // First sample is the degenerate start: t = 0 with K = 0.
  CHECK(text.find("\n0,0,", 8) != std::string::npos);
}
