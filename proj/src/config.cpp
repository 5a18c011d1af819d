#include "sbp/config.hpp"

#include "sbp/io.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace sbp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  double v;
  while (is >> v) out.push_back(v);
  return out;
}

std::vector<Vec3> parse_points(const std::string& s) {
  std::vector<Vec3> out;
  std::istringstream groups(s);
  std::string group;
  while (std::getline(groups, group, ';')) {
    const auto nums = parse_numbers(group);
    if (nums.empty()) continue;
    if (nums.size() != 3) throw ConfigError("well center needs three coordinates: " + group);
    out.emplace_back(nums[0], nums[1], nums[2]);
  }
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ConfigError("bad boolean: " + v);
}

void assign(RunConfig& cfg, const std::string& section, const std::string& key,
            const std::string& value) {
  const std::string full = section + "." + key;
  try {
    if (full == "problem.n") cfg.n = std::stoi(value);
    else if (full == "problem.L") cfg.L = std::stod(value);
    else if (full == "problem.potential") {
      if (value == "constant") cfg.potential = PotentialKind::constant;
      else if (value == "multi_well") cfg.potential = PotentialKind::multi_well;
      else if (value == "radial_coercive") cfg.potential = PotentialKind::radial_coercive;
      else if (value == "user_field") cfg.potential = PotentialKind::user_field;
      else throw ConfigError("unknown potential kind: " + value);
    } else if (full == "problem.V0") cfg.V0 = std::stod(value);
    else if (full == "problem.kappa") cfg.kappa = std::stod(value);
    else if (full == "problem.well_radius") cfg.well_radius = std::stod(value);
    else if (full == "problem.wells") cfg.wells = parse_points(value);
    else if (full == "problem.user_potential_path") cfg.user_potential_path = value;
    else if (full == "problem.eps") cfg.eps = std::stod(value);
    else if (full == "problem.family") {
      if (value == "zero") cfg.family = NonlinearityFamily::zero;
      else if (value == "one_sign") cfg.family = NonlinearityFamily::one_sign_power;
      else if (value == "odd") cfg.family = NonlinearityFamily::odd_power;
      else throw ConfigError("unknown nonlinearity family: " + value);
    } else if (full == "problem.p") cfg.p = std::stod(value);
    else if (full == "problem.a") cfg.a = std::stod(value);
    else if (full == "problem.c") cfg.c = std::stod(value);
    else if (full == "solver.tol_residual") cfg.solve.tol_residual = std::stod(value);
    else if (full == "solver.max_iter") cfg.solve.max_iter = std::stoi(value);
    else if (full == "solver.armijo_c") cfg.solve.armijo_c = std::stod(value);
    else if (full == "solver.step_init") cfg.solve.step_init = std::stod(value);
    else if (full == "solver.step_shrink") cfg.solve.step_shrink = std::stod(value);
    else if (full == "solver.precondition") cfg.solve.precondition = parse_bool(value);
    else if (full == "solver.distinct_tol") cfg.solve.distinct_tol = std::stod(value);
    else if (full == "radial.m") cfg.radial_m = std::stoi(value);
    else if (full == "radial.r_max") cfg.radial_r_max = std::stod(value);
    else if (full == "experiment.eps_list") cfg.eps_list = parse_numbers(value);
    else if (full == "experiment.c_list") cfg.c_list = parse_numbers(value);
    else if (full == "experiment.cutoff_T") cfg.cutoff_T = std::stod(value);
    else if (full == "experiment.rho") cfg.rho = std::stod(value);
    else if (full == "experiment.morse_k") cfg.morse_k = std::stoi(value);
    else if (full == "experiment.random_starts") cfg.random_starts = std::stoi(value);
    else if (full == "run.out_dir") cfg.out_dir = value;
    else if (full == "run.seed") cfg.seed = std::stoull(value);
    else if (full == "run.threads") cfg.threads = std::stoi(value);
    else if (full == "run.quick") cfg.quick = parse_bool(value);
    else throw ConfigError("unknown config key: " + full);
  } catch (const std::invalid_argument&) {
    throw ConfigError("bad value for " + full + ": " + value);
  }
}

}  // namespace

RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  RunConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("bad section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value at line " + std::to_string(lineno));
    if (section.empty()) throw ConfigError("key outside any [section] at line " + std::to_string(lineno));
    assign(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("override must look like section.key=value: " + assignment);
  assign(cfg, trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
         trim(assignment.substr(eq + 1)));
}

void RunConfig::validate() const {
  if (n < 8 || n % 2 != 0) throw ConfigError("problem.n must be even and >= 8");
  if (L <= 0) throw ConfigError("problem.L must be positive");
  if (V0 <= 0) throw ConfigError("problem.V0 must be positive");
  if (eps <= 0) throw ConfigError("problem.eps must be positive");
  if (c <= 0) throw ConfigError("problem.c must be positive");
  if (family != NonlinearityFamily::zero && (p <= 2.0 || p >= 6.0))
    throw ConfigError("problem.p must lie in (2,6)");
  if (family != NonlinearityFamily::zero && a < 0) throw ConfigError("problem.a must be >= 0");
  if (potential == PotentialKind::multi_well && wells.empty())
    throw ConfigError("multi_well potential needs problem.wells");
  if (potential == PotentialKind::user_field && user_potential_path.empty())
    throw ConfigError("user_field potential needs problem.user_potential_path");
  if (radial_m < 16 || radial_r_max <= 0) throw ConfigError("bad [radial] block");
  for (double e : eps_list)
    if (e <= 0) throw ConfigError("experiment.eps_list entries must be positive");
  for (double ci : c_list)
    if (ci <= 0) throw ConfigError("experiment.c_list entries must be positive");
  solve.validate();
}

Nonlinearity RunConfig::make_nonlinearity() const {
  switch (family) {
    case NonlinearityFamily::zero: return Nonlinearity::zero();
    case NonlinearityFamily::one_sign_power: return Nonlinearity::one_sign(p, a);
    case NonlinearityFamily::odd_power: return Nonlinearity::odd(p, a);
  }
  return Nonlinearity::zero();
}

ExternalPotential RunConfig::make_potential() const {
  ExternalPotential V;
  V.kind = potential;
  V.V0 = V0;
  V.kappa = kappa;
  V.well_radius = well_radius;
  V.centers = wells;
  if (potential == PotentialKind::user_field) V.user_values = read_field(user_potential_path);
  return V;
}

Problem RunConfig::make_problem() const { return make_problem_at(eps); }

Problem RunConfig::make_problem_at(double eps_override) const {
  validate();
  return Problem(GridSpec(n, L), make_potential(), eps_override, make_nonlinearity(), c);
}

void echo_config(const RunConfig& cfg, std::ostream& os) {
  os << "[problem]\n";
  os << "n = " << cfg.n << "\nL = " << cfg.L << "\n";
  const char* pk = cfg.potential == PotentialKind::constant        ? "constant"
                   : cfg.potential == PotentialKind::multi_well    ? "multi_well"
                   : cfg.potential == PotentialKind::radial_coercive ? "radial_coercive"
                                                                     : "user_field";
  os << "potential = " << pk << "\nV0 = " << cfg.V0 << "\nkappa = " << cfg.kappa
     << "\nwell_radius = " << cfg.well_radius << "\n";
  if (!cfg.wells.empty()) {
    os << "wells =";
    for (size_t i = 0; i < cfg.wells.size(); ++i) {
      os << " " << cfg.wells[i][0] << " " << cfg.wells[i][1] << " " << cfg.wells[i][2];
      if (i + 1 < cfg.wells.size()) os << " ;";
    }
    os << "\n";
  }
  if (!cfg.user_potential_path.empty()) os << "user_potential_path = " << cfg.user_potential_path << "\n";
  const char* fam = cfg.family == NonlinearityFamily::zero ? "zero"
                    : cfg.family == NonlinearityFamily::one_sign_power ? "one_sign"
                                                                       : "odd";
  os << "eps = " << cfg.eps << "\nfamily = " << fam << "\np = " << cfg.p << "\na = " << cfg.a
     << "\nc = " << cfg.c << "\n\n";
  os << "[solver]\n";
  os << "tol_residual = " << cfg.solve.tol_residual << "\nmax_iter = " << cfg.solve.max_iter
     << "\narmijo_c = " << cfg.solve.armijo_c << "\nstep_init = " << cfg.solve.step_init
     << "\nstep_shrink = " << cfg.solve.step_shrink
     << "\nprecondition = " << (cfg.solve.precondition ? "true" : "false")
     << "\ndistinct_tol = " << cfg.solve.distinct_tol << "\n\n";
  os << "[radial]\nm = " << cfg.radial_m << "\nr_max = " << cfg.radial_r_max << "\n\n";
  os << "[experiment]\n";
  auto list = [&](const char* key, const std::vector<double>& v) {
    if (v.empty()) return;
    os << key << " =";
    for (double x : v) os << " " << x;
    os << "\n";
  };
  list("eps_list", cfg.eps_list);
  list("c_list", cfg.c_list);
  os << "cutoff_T = " << cfg.cutoff_T << "\nrho = " << cfg.rho << "\nmorse_k = " << cfg.morse_k
     << "\nrandom_starts = " << cfg.random_starts << "\n\n";
  os << "[run]\nout_dir = " << cfg.out_dir << "\nseed = " << cfg.seed
     << "\nthreads = " << cfg.threads << "\nquick = " << (cfg.quick ? "true" : "false") << "\n";
}

}  // namespace sbp
