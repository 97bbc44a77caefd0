#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "orbitalis/cli.hpp"
#include "orbitalis/trace_zeta.hpp"

using namespace orbitalis;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run(const std::vector<std::string>& args, std::string& out) {
  std::ostringstream os, es;
  const int code = run_cli(args, os, es);
  out = os.str() + es.str();
  return code;
}

}  // namespace

TEST_CASE("poisson subcommand emits a residual column") {
  std::string out;
  CHECK(run({"poisson", "--t", "1"}, out) == 0);
  CHECK(out.rfind("t,spectral_side,geometric_side,residual", 0) == 0);
  // the row reproduces the library value at full precision
  auto [s, g] = poisson_both_sides(1.0);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", s);
  CHECK(out.find(buf) != std::string::npos);
  (void)g;
}

TEST_CASE("deterministic output: identical runs are byte-identical") {
  const std::string p1 = "/tmp/orbitalis_cli_run1.csv";
  const std::string p2 = "/tmp/orbitalis_cli_run2.csv";
  std::string out;
  CHECK(run({"hypo", "--a", "0:2:3", "--b", "0.5,2", "--t", "1", "--out", p1}, out) == 0);
  CHECK(run({"hypo", "--a", "0:2:3", "--b", "0.5,2", "--t", "1", "--out", p2}, out) == 0);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(!slurp(p1).empty());
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("usage errors exit with code 1") {
  std::string out;
  CHECK(run({"orbital", "--model", "nosuch"}, out) == 1);
  CHECK(run({"orbital", "--gamma", "spinning:q=1"}, out) == 1);
  CHECK(run({"zeta"}, out) == 1);  // needs --spectrum or --circle-theta
  CHECK(run({"surface-trace"}, out) == 1);  // --spectrum required
  CHECK(run({"poisson", "--t", "0.5:2:0"}, out) == 1);  // sweep count < 1
}

TEST_CASE("numerical non-convergence exits with code 2") {
  std::string out;
  CHECK(run({"orbital", "--model", "sl2", "--gamma", "identity", "--t", "1", "--method",
             "explicit", "--quad-nodes", "4", "--quad-tol", "1e-16"},
            out) == 2);
}

TEST_CASE("config file supplies defaults, flags win") {
  const std::string cfg = "/tmp/orbitalis_cli_cfg.json";
  {
    std::ofstream f(cfg);
    f << R"({"t":"4"})";
  }
  std::string out;
  CHECK(run({"poisson", "--config", cfg}, out) == 0);
  CHECK(out.find("\n4,") != std::string::npos);
  // explicit flag takes precedence over the config value
  CHECK(run({"poisson", "--config", cfg, "--t", "9"}, out) == 0);
  CHECK(out.find("\n9,") != std::string::npos);
  CHECK(out.find("\n4,") == std::string::npos);
  std::remove(cfg.c_str());
}

TEST_CASE("plot data is two-column whitespace-separated") {
  const std::string plot = "/tmp/orbitalis_cli_plot.dat";
  std::string out;
  CHECK(run({"torsion", "--theta", "1:3:5", "--plot-out", plot}, out) == 0);
  std::ifstream f(plot);
  std::string line;
  int rows = 0;
  while (std::getline(f, line)) {
    double x, y;
    CHECK(std::sscanf(line.c_str(), "%lf %lf", &x, &y) == 2);
    ++rows;
  }
  CHECK(rows == 5);
  std::remove(plot.c_str());
}

TEST_CASE("validate subcommand passes") {
  std::string out;
  CHECK(run({"validate", "--seed", "7"}, out) == 0);
  CHECK(out.find("check,residual,tolerance,pass") == 0);
  CHECK(out.find(",0\n") == std::string::npos);  // no failing rows
}

TEST_CASE("trace subcommand on the circle") {
  std::string out;
  CHECK(run({"trace", "--t", "0.5"}, out) == 0);
  CHECK(out.rfind("t,assembled,geometric_side,residual", 0) == 0);
}

TEST_CASE("algebra-check subcommand reports all passes") {
  std::string out;
  CHECK(run({"algebra-check", "--n", "1", "--D", "5"}, out) == 0);
  CHECK(out.find(",0\n") == std::string::npos);
}

TEST_CASE("trace subcommand with a spectrum file") {
  const std::string spec = "/tmp/orbitalis_cli_spec.json";
  {
    std::ofstream f(spec);
    f << R"({"classes":[{"length":2.0,"multiplicity":1,"chi_orb":[1,1],"n":1}]})";
  }
  std::string out;
  CHECK(run({"trace", "--spectrum", spec, "--vol", "12.566370614359172", "--t", "1"}, out) == 0);
  CHECK(out.rfind("t,assembled,surface_trace,residual", 0) == 0);
  // the two assembly routes agree to the printed residual
  const auto last_comma = out.rfind(',');
  const double residual = std::stod(out.substr(last_comma + 1));
  CHECK(residual < 1e-10);
  std::remove(spec.c_str());
}

TEST_CASE("orbital rank-one method through the CLI") {
  std::string out;
  CHECK(run({"orbital", "--model", "sl2", "--gamma", "hyperbolic:a=1", "--t", "1", "--method",
             "rank-one"},
            out) == 0);
  CHECK(out.find("rank_one") != std::string::npos);
}
