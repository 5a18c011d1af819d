#include "sbp/concentration.hpp"

#include "sbp/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace sbp {

double CutoffSpec::eta(double s) const {
  const double half2 = 0.25 * T * T;
  const double s2 = s * s;
  if (s2 <= half2) return 1.0;
  if (s2 >= T * T) return 0.0;
  const double tau = (s2 - half2) / (T * T - half2);
  const double step = tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau));
  return 1.0 - step;
}

double AutonomousGroundState::half_mass_radius() const {
  const Array w = radial_weights(profile.grid);
  const Array q = profile.values.square();
  const double total = (w * q).sum();
  double acc = 0.0;
  for (int j = 0; j < profile.grid.m; ++j) {
    acc += w[j] * q[j];
    if (acc >= 0.5 * total) return profile.grid.r(j);
  }
  return profile.grid.r_max;
}

AutonomousGroundState autonomous_ground_state(double mu, const Nonlinearity& f, double c,
                                              const RadialGrid& g, const SolveConfig& cfg,
                                              const RadialProfile* start) {
  RadialProblem P(g, mu, f, c);
  RadialProfile u0(g);
  if (start) {
    if (!(start->grid == g)) throw DimensionError("autonomous_ground_state: start grid mismatch");
    u0 = *start;
  } else {
    // negative Gaussian seed, matching the ground state's orientation
    for (int j = 0; j < g.m; ++j) {
      const double r = g.r(j);
      u0.values[j] = -std::exp(-r * r);
    }
  }
  RadialSolution sol = minimize_radial(P, u0, cfg);

  // Orient nonpositive. For sign-symmetric families the flip is free; for
  // one_sign starts the solver already stays in the negative cone.
  if ((P.weights() * sol.u.values).sum() > 0.0 &&
      f.family != NonlinearityFamily::one_sign_power) {
    sol.u.values = -sol.u.values;
  }
  const double amp = sol.u.values.abs().maxCoeff();
  if (sol.u.values.maxCoeff() <= 1e-10 * amp) sol.u.values = sol.u.values.min(0.0);

  AutonomousGroundState gs;
  gs.mu = mu;
  gs.c = c;
  gs.profile = std::move(sol.u);
  gs.energy = sol.energy;
  gs.lambda = sol.lambda;
  gs.residual = sol.residual;
  gs.iterations = sol.iterations;
  gs.converged = sol.converged;
  return gs;
}

RadialProfile decreasing_rearrangement(const RadialProfile& p) {
  const int m = p.grid.m;
  const Array w = radial_weights(p.grid);
  // sort |values| descending together with their volume weights
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(p.values[a]) > std::abs(p.values[b]);
  });
  std::vector<double> cum(m + 1, 0.0);
  for (int k = 0; k < m; ++k) cum[k + 1] = cum[k] + w[order[k]];

  // assign to radius bins by cumulative-volume quantile matching
  RadialProfile out(p.grid);
  double target = 0.0;
  int k = 0;
  for (int j = 0; j < m; ++j) {
    const double mid = target + 0.5 * w[j];
    while (k + 1 < m && cum[k + 1] < mid) ++k;
    out.values[j] = std::abs(p.values[order[k]]);
    target += w[j];
  }
  return out;
}

SymmetrizationCheck symmetrization_test(const RadialProblem& P, const RadialProfile& p) {
  if (!(p.grid == P.grid())) throw DimensionError("symmetrization_test: grid mismatch");
  RadialProfile absu(p.grid, p.values.abs());
  const double G = constraint_value_radial(absu);
  if (G <= 0.0) throw DegenerateInput("symmetrization_test: G = 0");
  // scale the input onto the manifold first so both sides are comparable
  const double t0 = std::pow(P.c() / G, 0.25);
  absu.values *= t0;

  RadialProfile star = decreasing_rearrangement(absu);
  const double Gs = constraint_value_radial(star);
  if (Gs <= 0.0) throw DegenerateInput("symmetrization_test: G(u*) = 0");
  SymmetrizationCheck chk;
  chk.t_star = std::pow(P.c() / Gs, 0.25);
  star.values *= chk.t_star;
  chk.energy_before = P.energy(absu.values);
  chk.energy_after = P.energy(star.values);
  chk.holds = chk.energy_after <= chk.energy_before + 1e-10 * std::max(1.0, chk.energy_before);
  return chk;
}

ScalarField make_bump(const AutonomousGroundState& gs, double eps, const Vec3& y,
                      const CutoffSpec& cut, const GridSpec& grid) {
  if (eps <= 0.0) throw DegenerateInput("make_bump: eps must be positive");
  const Vec3 center = y / eps;
  // the profile vanishes beyond its own r_max, so the effective support is
  // the smaller of the cutoff ball and the profile ball
  const double radius = std::min(cut.T / eps, gs.profile.grid.r_max);
  for (int d = 0; d < 3; ++d) {
    if (center[d] - radius < -grid.L || center[d] + radius >= grid.L)
      throw GeometryError("make_bump: support ball does not fit the grid box");
  }
  return sample_field(grid, [&](double x0, double x1, double x2) {
    const Vec3 x(x0, x1, x2);
    const double s = (eps * x - y).norm();
    if (s >= cut.T) return 0.0;
    return cut.eta(s) * radial_interpolate(gs.profile, (x - center).norm());
  });
}

ScalarField make_phi(const Problem& P, const AutonomousGroundState& gs, const Vec3& y,
                     const CutoffSpec& cut) {
  ScalarField psi = make_bump(gs, P.eps(), y, cut, P.grid());
  return project_to_manifold(P, psi).tu;
}

Vec3 barycenter(const ScalarField& u, double eps, double rho) {
  if (eps <= 0.0 || rho <= 0.0) throw DegenerateInput("barycenter: eps and rho must be positive");
  const GridSpec& g = u.grid;
  Vec3 num = Vec3::Zero();
  double den = 0.0;
  for (int ix = 0; ix < g.n; ++ix)
    for (int iy = 0; iy < g.n; ++iy)
      for (int iz = 0; iz < g.n; ++iz) {
        const double q = u.at(ix, iy, iz) * u.at(ix, iy, iz);
        if (q == 0.0) continue;
        Vec3 chi(eps * g.coord(ix), eps * g.coord(iy), eps * g.coord(iz));
        const double norm = chi.norm();
        if (norm > rho) chi *= rho / norm;
        num += q * chi;
        den += q;
      }
  if (den <= 0.0) throw DegenerateInput("barycenter: zero field");
  return num / den;
}

}  // namespace sbp
