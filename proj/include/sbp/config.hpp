#pragma once

#include "sbp/descent.hpp"
#include "sbp/energy.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sbp {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Declarative run configuration: [section] blocks of key = value lines,
/// plus flat "section.key=value" command-line overrides.
struct RunConfig {
  // [problem]
  int n = 32;
  double L = 9.0;
  PotentialKind potential = PotentialKind::constant;
  double V0 = 1.0;
  double kappa = 1.0;
  double well_radius = 1.0;
  std::vector<Vec3> wells;
  std::string user_potential_path;
  double eps = 1.0;
  NonlinearityFamily family = NonlinearityFamily::zero;
  double p = 3.0;
  double a = 1.0;
  double c = 1.0;

  // [solver]
  SolveConfig solve;

  // [radial]
  int radial_m = 2000;
  double radial_r_max = 20.0;

  // [experiment]
  std::vector<double> eps_list;
  std::vector<double> c_list;
  double cutoff_T = 0.0;  // 0 = auto: 4x the ground state's half-mass radius
  double rho = 0.0;       // 0 = auto: encloses the 2T-neighborhood of the wells
  int morse_k = 8;
  int random_starts = 4;  // deflated high-energy search

  // [run]
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int threads = 1;
  bool quick = false;

  void validate() const;
  Nonlinearity make_nonlinearity() const;
  ExternalPotential make_potential() const;
  Problem make_problem() const;
  Problem make_problem_at(double eps_override) const;
};

RunConfig parse_config_file(const std::string& path);
/// Override "section.key=value" (for example solver.max_iter=100).
void apply_override(RunConfig& cfg, const std::string& assignment);
/// Reproducibility echo in the same file format the parser accepts.
void echo_config(const RunConfig& cfg, std::ostream& os);

}  // namespace sbp
