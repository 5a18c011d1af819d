#include "sbp/concentration.hpp"
#include "sbp/config.hpp"
#include "sbp/io.hpp"
#include "sbp/morse.hpp"
#include "sbp/optimizer.hpp"
#include "sbp/radial.hpp"
#include "sbp/records.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <vector>

namespace fs = std::filesystem;
using namespace sbp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitAssertion = 3;
constexpr int kExitVerify = 4;

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  bool quick = false;
  double kernel_fault = 0.0;
};

RunConfig load_config(const CliOptions& opt) {
  RunConfig cfg;
  if (!opt.config_path.empty()) cfg = parse_config_file(opt.config_path);
  for (const auto& ov : opt.overrides) apply_override(cfg, ov);
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (opt.seed_set) cfg.seed = opt.seed;
  if (opt.threads > 0) cfg.threads = opt.threads;
  if (opt.quick) cfg.quick = true;
  if (cfg.quick) {
    cfg.n = std::min(cfg.n, 16);
    cfg.radial_m = std::min(cfg.radial_m, 400);
    cfg.solve.max_iter = std::min(cfg.solve.max_iter, 2000);
  }
  cfg.validate();
  return cfg;
}

void prepare_out(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  std::ofstream echo(fs::path(cfg.out_dir) / "config.echo");
  echo_config(cfg, echo);
}

RadialGrid radial_grid_of(const RunConfig& cfg) { return RadialGrid(cfg.radial_m, cfg.radial_r_max); }

ScalarField default_start(const Problem& P) {
  // negative gaussian at the box center: in the basin of the ground state
  // for every family (one_sign keeps f inactive on it, which is fine)
  return gaussian_field(P.grid(), 1.0, Vec3::Zero(), -1.0);
}

void print_record(const SolutionRecord& rec) {
  std::printf("energy=%.12g lambda=%.12g residual=%.3e iters=%d sign=%s converged=%s\n",
              rec.energy, rec.lambda, rec.residual, rec.iterations, to_string(rec.sign_class),
              rec.converged ? "yes" : "no");
}

int cmd_solve(const RunConfig& cfg) {
  prepare_out(cfg);
  Problem P = cfg.make_problem();
  SolutionRecord rec = minimize(P, default_start(P), cfg.solve);
  const std::string field_path = (fs::path(cfg.out_dir) / "solution.bpf1").string();
  write_field(field_path, rec.u);
  append_record_line((fs::path(cfg.out_dir) / "records.jsonl").string(),
                     record_to_json(rec, field_path));
  print_record(rec);
  return rec.converged ? kExitOk : kExitNotConverged;
}

int cmd_autonomous(const RunConfig& cfg) {
  prepare_out(cfg);
  auto gs = autonomous_ground_state(cfg.V0, cfg.make_nonlinearity(), cfg.c, radial_grid_of(cfg),
                                    cfg.solve);
  std::ofstream csv(fs::path(cfg.out_dir) / "autonomous.csv");
  csv << "r,u\n";
  csv.precision(17);
  for (int j = 0; j < gs.profile.grid.m; ++j)
    csv << gs.profile.grid.r(j) << "," << gs.profile.values[j] << "\n";

  nlohmann::json j;
  j["mu"] = gs.mu;
  j["c"] = gs.c;
  j["energy"] = gs.energy;
  j["lambda"] = gs.lambda;
  j["residual"] = gs.residual;
  j["iterations"] = gs.iterations;
  j["converged"] = gs.converged;
  j["half_mass_radius"] = gs.half_mass_radius();
  append_record_line((fs::path(cfg.out_dir) / "records.jsonl").string(), j);
  std::printf("energy=%.12g lambda=%.12g residual=%.3e iters=%d converged=%s\n", gs.energy,
              gs.lambda, gs.residual, gs.iterations, gs.converged ? "yes" : "no");
  return gs.converged ? kExitOk : kExitNotConverged;
}

int cmd_bifurcation(const RunConfig& cfg) {
  prepare_out(cfg);
  std::vector<double> cs = cfg.c_list;
  if (cs.empty()) cs = {0.25, 0.5, 1.0, 2.0, 4.0};
  for (size_t i = 0; i + 1 < cs.size(); ++i)
    if (cs[i + 1] <= cs[i]) throw ConfigError("bifurcation: c list must be increasing");

  if (cfg.potential != PotentialKind::constant)
    throw ConfigError("bifurcation: sweep is defined for the constant potential");

  const RadialGrid rg = radial_grid_of(cfg);
  const Nonlinearity f = cfg.make_nonlinearity();
  const Array w = radial_weights(rg);

  struct Row {
    double c, wnorm, lambda, q, fu;
  };
  std::vector<Row> rows;
  RadialProfile cont;  // continuation start: previous solution, rescaled
  bool all_ok = true;

  for (double ci : cs) {
    RadialProblem P(rg, cfg.V0, f, ci);
    RadialProfile start = cont.values.size() ? cont : RadialProfile(rg, (-(rg.dr() * Array::LinSpaced(rg.m, 0, rg.m - 1)).square()).exp() * -1.0);
    RadialSolution sol = minimize_radial(P, start, cfg.solve);
    all_ok = all_ok && sol.converged;
    cont = sol.u;
    Row row;
    row.c = ci;
    row.wnorm = P.w_norm_sq(sol.u.values);
    row.lambda = sol.lambda;
    row.q = row.wnorm / std::sqrt(ci);
    row.fu = (w * sol.u.values.unaryExpr([&](double v) { return f.f(v); }) * sol.u.values).sum();
    rows.push_back(row);
  }

  std::ofstream csv(fs::path(cfg.out_dir) / "bifurcation.csv");
  csv << "c,wnorm,lambda,q\n";
  csv.precision(17);
  for (const auto& r : rows) csv << r.c << "," << r.wnorm << "," << r.lambda << "," << r.q << "\n";

  if (!all_ok) {
    std::fprintf(stderr, "bifurcation: a sweep point failed to certify\n");
    return kExitNotConverged;
  }

  bool ok = true;
  for (size_t i = 0; i + 1 < rows.size(); ++i)
    if (rows[i + 1].q < rows[i].q * (1.0 - 1e-6)) ok = false;
  for (const auto& r : rows) {
    const double viol = std::abs(r.lambda * r.c + r.wnorm + r.fu) / std::max(r.wnorm, 1e-300);
    if (viol > 1e-6) ok = false;
  }

  // c -> 0 trend of |lambda|, reported as data (bounded vs divergent)
  const char* trend = "bounded";
  if (rows.size() >= 2 && std::abs(rows[0].lambda) > 1.2 * std::abs(rows[1].lambda))
    trend = "divergent";
  for (const auto& r : rows)
    std::printf("c=%-8g |u|_W^2=%.10g lambda=%.10g q=%.10g\n", r.c, r.wnorm, r.lambda, r.q);
  std::printf("lambda trend as c->0: %s\n", trend);

  if (!ok) {
    std::fprintf(stderr, "bifurcation: monotonicity or multiplier identity violated\n");
    return kExitAssertion;
  }
  return kExitOk;
}

int cmd_multiplicity(const RunConfig& cfg) {
  prepare_out(cfg);
  if (cfg.potential != PotentialKind::multi_well || cfg.wells.empty())
    throw ConfigError("multiplicity: needs a multi_well potential with wells");
  std::vector<double> eps_list = cfg.eps_list;
  if (eps_list.empty()) eps_list = {1.0, 0.5, 0.25};
  for (size_t i = 0; i + 1 < eps_list.size(); ++i)
    if (eps_list[i + 1] >= eps_list[i]) throw ConfigError("multiplicity: eps list must be decreasing");

  const auto gs = autonomous_ground_state(cfg.V0, cfg.make_nonlinearity(), cfg.c,
                                          radial_grid_of(cfg), cfg.solve);
  if (!gs.converged) {
    std::fprintf(stderr, "multiplicity: autonomous ground state did not certify\n");
    return kExitNotConverged;
  }
  const double T = cfg.cutoff_T > 0.0 ? cfg.cutoff_T : 4.0 * gs.half_mass_radius();
  double rho = cfg.rho;
  if (rho <= 0.0) {
    for (const auto& y : cfg.wells) rho = std::max(rho, y.norm());
    rho += 2.0 * T;
  }
  const CutoffSpec cut(T);

  std::ofstream table(fs::path(cfg.out_dir) / "multiplicity.csv");
  table << "eps,solution,energy,lambda,bx,by,bz,dist_to_well,sign,morse_index,converged\n";
  table.precision(17);
  const std::string records = (fs::path(cfg.out_dir) / "records.jsonl").string();

  bool assertion_ok = true;
  std::mt19937_64 rng(cfg.seed);

  for (size_t ei = 0; ei < eps_list.size(); ++ei) {
    const double eps = eps_list[ei];
    const bool last = ei + 1 == eps_list.size();
    Problem P = cfg.make_problem_at(eps);

    std::vector<ScalarField> starts;
    double h_eps = 0.0;
    for (const auto& y : cfg.wells) {
      ScalarField phi = make_phi(P, gs, y, cut);
      h_eps = std::max(h_eps, std::abs(energy(P, phi) - gs.energy));
      starts.push_back(std::move(phi));
    }
    auto sols = multi_start(P, starts, cfg.solve);

    std::printf("eps=%g  h(eps)=%.6g  distinct=%zu\n", eps, h_eps, sols.size());
    for (size_t si = 0; si < sols.size(); ++si) {
      auto& s = sols[si];
      s.barycenter = barycenter(s.u, eps, rho);
      double dwell = std::numeric_limits<double>::infinity();
      for (const auto& y : cfg.wells) dwell = std::min(dwell, (s.barycenter - y).norm());
      if (s.converged && (last || !cfg.quick)) {
        try {
          s.morse_index = morse_index(P, s, cfg.morse_k).morse_index;
        } catch (const DegenerateInput&) {
        }
      }
      const std::string field_path =
          (fs::path(cfg.out_dir) / ("sol_eps" + std::to_string(ei) + "_" + std::to_string(si) + ".bpf1")).string();
      write_field(field_path, s.u);
      auto j = record_to_json(s, field_path);
      j["eps"] = eps;
      j["cell"] = {static_cast<int>(ei), static_cast<int>(si)};
      append_record_line(records, j);
      table << eps << "," << si << "," << s.energy << "," << s.lambda << "," << s.barycenter[0]
            << "," << s.barycenter[1] << "," << s.barycenter[2] << "," << dwell << ","
            << to_string(s.sign_class) << "," << (s.morse_index ? *s.morse_index : -1) << ","
            << s.converged << "\n";
      std::printf("  #%zu E=%.10g lambda=%.6g beta=(%.3g,%.3g,%.3g) d=%.3g %s%s\n", si, s.energy,
                  s.lambda, s.barycenter[0], s.barycenter[1], s.barycenter[2], dwell,
                  to_string(s.sign_class), s.converged ? "" : " [not certified]");
    }

    if (last) {
      size_t certified = 0;
      bool all_negative = true, low_energy = true;
      for (const auto& s : sols) {
        if (!s.converged) continue;
        ++certified;
        if (s.sign_class != SignClass::negative) all_negative = false;
        if (s.energy > gs.energy + h_eps + 1e-9) low_energy = false;
      }
      if (certified < cfg.wells.size() || !all_negative || !low_energy) {
        assertion_ok = false;
        std::fprintf(stderr,
                     "multiplicity: assertion failed (certified=%zu wells=%zu negative=%d low=%d)\n",
                     certified, cfg.wells.size(), all_negative ? 1 : 0, low_energy ? 1 : 0);
      }

      // unscored deflated search for a higher-energy solution
      std::normal_distribution<double> dist;
      for (int rs = 0; rs < cfg.random_starts; ++rs) {
        ScalarField r0(P.grid());
        for (long i = 0; i < r0.values.size(); ++i) r0.values[i] = dist(rng);
        // smooth the noise so the start has finite discrete energy scale
        r0 = P.spectral().inverse_helmholtz(r0, 1.0);
        SolutionRecord rr = minimize(P, r0, cfg.solve);
        if (!rr.converged) continue;
        bool dup = false;
        for (const auto& s : sols) {
          const double denom = std::max(norm_l2(s.u), norm_l2(rr.u));
          if (norm_l2(ScalarField(rr.u.grid, rr.u.values - s.u.values)) / denom <
              cfg.solve.distinct_tol)
            dup = true;
        }
        if (!dup && rr.energy > gs.energy + h_eps) {
          std::printf("high-energy candidate: E=%.10g lambda=%.6g %s\n", rr.energy, rr.lambda,
                      to_string(rr.sign_class));
          auto j = record_to_json(rr, "");
          j["eps"] = eps;
          j["high_energy_candidate"] = true;
          append_record_line(records, j);
        }
      }
    }
  }
  return assertion_ok ? kExitOk : kExitAssertion;
}

int cmd_verify(const RunConfig& cfg, double kernel_fault) {
  prepare_out(cfg);
  bool all = true;
  auto check = [&](const char* name, bool ok) {
    std::printf("%-42s %s\n", name, ok ? "PASS" : "FAIL");
    all = all && ok;
  };

  const int n = cfg.quick ? 12 : std::min(cfg.n, 16);
  const GridSpec g(n, 6.0);
  Problem P(g, ExternalPotential{}, 1.0, Nonlinearity::one_sign(3.0, 1.0), 1.0);
  if (kernel_fault != 0.0) P.kernel_mutable().corrupt(kernel_fault);
  const ScalarField u = gaussian_field(g, 1.0, Vec3(0.3, -0.2, 0.1), -1.0);
  const ScalarField v = gaussian_field(g, 1.5, Vec3(-0.4, 0.1, 0.2), 0.7);
  const double h3 = g.h() * g.h() * g.h();

  {
    const ScalarField fast = solve_potential(P.kernel(), u);
    const ScalarField direct = solve_potential_direct(u);
    const double err = (fast.values - direct.values).abs().maxCoeff() /
                       direct.values.abs().maxCoeff();
    check("potential fast vs direct oracle", err <= 1e-10);
    check("potential nonnegative", fast.values.minCoeff() >= 0.0);
  }
  {
    const double G1 = constraint_value(P.kernel(), u);
    bool ok = true;
    for (double t : {0.5, 2.0, 3.0}) {
      const double Gt = constraint_value(P.kernel(), ScalarField(g, t * u.values));
      ok = ok && std::abs(Gt - t * t * t * t * G1) <= 1e-12 * std::abs(Gt);
    }
    check("constraint quartic homogeneity", ok);
  }
  {
    const double h = 1e-5;
    const ScalarField gr = euclidean_gradient(P, u);
    const double lhs = h3 * (gr.values * v.values).sum();
    const double fd = (energy(P, ScalarField(g, u.values + h * v.values)) -
                       energy(P, ScalarField(g, u.values - h * v.values))) /
                      (2 * h);
    check("energy gradient vs central difference", std::abs(lhs - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));

    const ScalarField b = constraint_gradient(P, u);
    const double glhs = 4.0 * h3 * (b.values * v.values).sum();
    const double gfd = (constraint_value(P.kernel(), ScalarField(g, u.values + h * v.values)) -
                        constraint_value(P.kernel(), ScalarField(g, u.values - h * v.values))) /
                       (2 * h);
    check("constraint gradient vs central difference",
          std::abs(glhs - gfd) <= 1e-6 * std::max(1.0, std::abs(gfd)));

    const double lambda = -0.7;
    auto lagr_grad = [&](const ScalarField& x) {
      const ScalarField gx = euclidean_gradient(P, x);
      const ScalarField bx = constraint_gradient(P, x);
      return Array(gx.values + lambda * bx.values);
    };
    const ScalarField Hv = hessian_apply(P, u, lambda, v);
    const Array hfd = (lagr_grad(ScalarField(g, u.values + h * v.values)) -
                       lagr_grad(ScalarField(g, u.values - h * v.values))) /
                      (2 * h);
    const double herr = std::sqrt(h3 * (Hv.values - hfd).square().sum()) /
                        std::max(1.0, std::sqrt(h3 * hfd.square().sum()));
    check("hessian action vs gradient differences", herr <= 1e-5);
  }
  {
    const auto pr = project_to_manifold(P, u);
    const double Gc = constraint_value(P.kernel(), pr.tu);
    check("projection lands on the manifold", std::abs(Gc - P.c()) <= 1e-10 * P.c());
    const double lam = lagrange_multiplier(P, pr.tu);
    check("multiplier negative on projected data", lam < 0.0);
  }
  {
    // narrow gaussian: the tail that wraps with the shift must be below the
    // comparison tolerance for the free-space identity to be exact
    const ScalarField un = gaussian_field(g, 2.5, Vec3(0.3, -0.2, 0.1), -1.0);
    const ScalarField phi = solve_potential(P.kernel(), un);
    const int sx = 2, sy = -1, sz = 3;
    const ScalarField phis = solve_potential(P.kernel(), shift(un, sx, sy, sz));
    // free-space convolution: covariance is exact at target points whose
    // shifted preimage stays inside the box (wrapping rows see different
    // geometry by construction)
    double err = 0.0;
    for (int ix = 0; ix < g.n; ++ix)
      for (int iy = 0; iy < g.n; ++iy)
        for (int iz = 0; iz < g.n; ++iz) {
          const int jx = ix - sx, jy = iy - sy, jz = iz - sz;
          if (jx < 0 || jx >= g.n || jy < 0 || jy >= g.n || jz < 0 || jz >= g.n) continue;
          err = std::max(err, std::abs(phis.at(ix, iy, iz) - phi.at(jx, jy, jz)));
        }
    check("potential translation covariance", err / phi.values.abs().maxCoeff() <= 1e-12);
  }
  {
    const RadialGrid rg(cfg.quick ? 200 : 400, 12.0);
    RadialProblem RP(rg, 1.0, Nonlinearity::zero(), 1.0);
    Array r = Array::LinSpaced(rg.m, 0.0, rg.dr() * (rg.m - 1));
    RadialProfile p(rg, ((-0.5 * (r - 2.0).square()).exp() + 0.3 * (-(r - 4.0).square()).exp()));
    const auto sym = symmetrization_test(RP, p);
    check("symmetrization inequality", sym.holds);
  }

  std::printf("verify: %s\n", all ? "all checks passed" : "FAILURES detected");
  return all ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained variational solver for a nonlocal field problem"};
  app.require_subcommand(1);

  CliOptions opt;
  app.add_option("--config", opt.config_path, "configuration file");
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_option("--seed", opt.seed, "random seed")->each([&](const std::string&) { opt.seed_set = true; });
  app.add_option("--threads", opt.threads, "worker threads");
  app.add_flag("--quick", opt.quick, "reduced sizes for smoke runs");
  app.add_option("--set", opt.overrides, "override section.key=value")->take_all();

  auto* solve = app.add_subcommand("solve", "minimize from the configured start");
  auto* autonomous = app.add_subcommand("autonomous", "constant-potential radial ground state");
  auto* bifurcation = app.add_subcommand("bifurcation", "sweep the constraint level c");
  auto* multiplicity = app.add_subcommand("multiplicity", "well-count experiment");
  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("--inject-kernel-fault", opt.kernel_fault,
                     "corrupt the convolution kernel by this relative amount");
  for (auto* sub : {solve, autonomous, bifurcation, multiplicity, verify}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = load_config(opt);
    if (solve->parsed()) return cmd_solve(cfg);
    if (autonomous->parsed()) return cmd_autonomous(cfg);
    if (bifurcation->parsed()) return cmd_bifurcation(cfg);
    if (multiplicity->parsed()) return cmd_multiplicity(cfg);
    if (verify->parsed()) return cmd_verify(cfg, opt.kernel_fault);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
