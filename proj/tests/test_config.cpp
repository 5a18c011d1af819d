#include <doctest.h>

#include "sbp/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace sbp;

namespace {

RunConfig parse_string(const std::string& text) {
  const std::string path = "cfg_under_test.ini";
  {
    std::ofstream os(path);
    os << text;
  }
  RunConfig cfg = parse_config_file(path);
  std::remove(path.c_str());
  return cfg;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("parsing sections, comments, and well lists") {
  RunConfig cfg = parse_string(
      "# leading comment\n"
      "[problem]\n"
      "n = 16\n"
      "L = 7.5\n"
      "potential = multi_well\n"
      "kappa = 10\n"
      "well_radius = 0.5\n"
      "wells = 0.75 0 0; -0.75 0 0\n"
      "family = one_sign\n"
      "p = 3\n"
      "eps = 0.25\n"
      "\n"
      "[solver]\n"
      "max_iter = 500\n"
      "tol_residual = 1e-7\n"
      "\n"
      "[run]\n"
      "seed = 42\n");
  CHECK(cfg.n == 16);
  CHECK(cfg.L == 7.5);
  CHECK(cfg.potential == PotentialKind::multi_well);
  CHECK(cfg.kappa == 10.0);
  REQUIRE(cfg.wells.size() == 2);
  CHECK(cfg.wells[0] == Vec3(0.75, 0, 0));
  CHECK(cfg.wells[1] == Vec3(-0.75, 0, 0));
  CHECK(cfg.family == NonlinearityFamily::one_sign_power);
  CHECK(cfg.eps == 0.25);
  CHECK(cfg.solve.max_iter == 500);
  CHECK(cfg.solve.tol_residual == 1e-7);
  CHECK(cfg.seed == 42);
  cfg.validate();
  Problem P = cfg.make_problem();
  CHECK(P.grid().n == 16);
  CHECK(P.eps() == 0.25);
}

TEST_CASE("overrides and validation failures") {
  RunConfig cfg;
  apply_override(cfg, "problem.n=48");
  apply_override(cfg, "solver.max_iter=9");
  CHECK(cfg.n == 48);
  CHECK(cfg.solve.max_iter == 9);
  CHECK_THROWS_AS(apply_override(cfg, "no_dot_here"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "problem.unknown=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "problem.n=abc"), ConfigError);

  // assumption checks: p outside (2,6), nonpositive V0, bad grid
  RunConfig bad;
  bad.family = NonlinearityFamily::one_sign_power;
  bad.p = 7.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = RunConfig{};
  bad.V0 = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = RunConfig{};
  bad.n = 9;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = RunConfig{};
  bad.potential = PotentialKind::multi_well;  // no wells given
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("config echo re-parses to the same configuration") {
  RunConfig cfg;
  apply_override(cfg, "problem.n=16");
  apply_override(cfg, "problem.potential=multi_well");
  apply_override(cfg, "problem.wells=1 0 0; -1 0 0");
  apply_override(cfg, "problem.family=odd");
  apply_override(cfg, "problem.p=3.5");
  apply_override(cfg, "solver.tol_residual=1e-9");
  apply_override(cfg, "experiment.c_list=0.5 1 2");
  apply_override(cfg, "run.seed=99");

  std::ostringstream os;
  echo_config(cfg, os);
  RunConfig back = parse_string(os.str());
  CHECK(back.n == cfg.n);
  CHECK(back.potential == cfg.potential);
  CHECK(back.wells == cfg.wells);
  CHECK(back.family == cfg.family);
  CHECK(back.p == cfg.p);
  CHECK(back.solve.tol_residual == cfg.solve.tol_residual);
  CHECK(back.c_list == cfg.c_list);
  CHECK(back.seed == cfg.seed);
}

TEST_CASE("malformed files are rejected with line context") {
  CHECK_THROWS_AS(parse_string("[problem\nn = 16\n"), ConfigError);
  CHECK_THROWS_AS(parse_string("n = 16\n"), ConfigError);            // key before any section
  CHECK_THROWS_AS(parse_string("[problem]\nn 16\n"), ConfigError);   // missing equals
  CHECK_THROWS_AS(parse_config_file("no_such_file.ini"), ConfigError);
}

}  // TEST_SUITE
