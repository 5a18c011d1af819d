#include "sbp/radial.hpp"

#include "sbp/potential.hpp"

#include <cmath>
#include <vector>

namespace sbp {

RadialProblem::RadialProblem(const RadialGrid& g, double mu, Nonlinearity f, double c)
    : grid_(g), mu_(mu), c_(c), f_(f), w_(radial_weights(g)) {
  if (mu_ <= 0.0) throw DegenerateInput("radial problem: mu must be positive");
  if (c_ <= 0.0) throw DegenerateInput("radial problem: constraint level must be positive");
  const double dr = g.dr();
  k_ = Array(g.m);
  for (int j = 0; j < g.m; ++j) {
    const double rm = (j + 0.5) * dr;
    k_[j] = 4.0 * M_PI * rm * rm / dr;
  }
}

double RadialProblem::gradient_sq(const Array& u) const {
  const int m = grid_.m;
  double acc = 0.0;
  for (int j = 0; j + 1 < m; ++j) {
    const double d = u[j + 1] - u[j];
    acc += k_[j] * d * d;
  }
  acc += k_[m - 1] * u[m - 1] * u[m - 1];  // ghost zero at r_max
  return acc;
}

Array RadialProblem::kinetic_apply(const Array& u) const {
  const int m = grid_.m;
  Array Tu(m);
  for (int i = 0; i < m; ++i) {
    double v = 0.0;
    if (i > 0) v += k_[i - 1] * (u[i] - u[i - 1]);
    v += k_[i] * (u[i] - (i + 1 < m ? u[i + 1] : 0.0));
    Tu[i] = v;
  }
  return Tu;
}

Array RadialProblem::helmholtz_solve(const Array& rhs) const {
  const int m = grid_.m;
  std::vector<double> diag(m), sub(m);
  for (int i = 0; i < m; ++i) {
    diag[i] = k_[i] + (i > 0 ? k_[i - 1] : 0.0) + mu_ * w_[i];
    sub[i] = -k_[i];  // coupling between i and i+1
  }
  Array x = rhs;
  // Thomas forward sweep
  for (int i = 1; i < m; ++i) {
    const double f = sub[i - 1] / diag[i - 1];
    diag[i] -= f * sub[i - 1];
    x[i] -= f * x[i - 1];
  }
  x[m - 1] /= diag[m - 1];
  for (int i = m - 2; i >= 0; --i) x[i] = (x[i] - sub[i] * x[i + 1]) / diag[i];
  return x;
}

double RadialProblem::energy(const Array& u) const {
  double Fsum = 0.0;
  if (f_.family != NonlinearityFamily::zero)
    for (int i = 0; i < grid_.m; ++i) Fsum += w_[i] * f_.F(u[i]);
  return 0.5 * gradient_sq(u) + 0.5 * mu_ * (w_ * u.square()).sum() + Fsum;
}

Array RadialProblem::grad(const Array& u) const {
  Array g = kinetic_apply(u) / w_ + mu_ * u;
  if (f_.family != NonlinearityFamily::zero)
    for (int i = 0; i < grid_.m; ++i) g[i] += f_.f(u[i]);
  return g;
}

namespace {

struct RadialAdapter {
  using Vector = Array;
  const RadialProblem& P;

  Vector phi(const Vector& u) const {
    return solve_potential_radial(RadialProfile(P.grid(), u)).values;
  }
  double constraint_from_phi(const Vector& u, const Vector& ph) const {
    return (P.weights() * ph * u.square()).sum();
  }
  Vector b_from_phi(const Vector& u, const Vector& ph) const { return ph * u; }
  double energy(const Vector& u) const { return P.energy(u); }
  Vector grad(const Vector& u) const { return P.grad(u); }
  double inner(const Vector& a, const Vector& b) const { return P.inner(a, b); }
  Vector precondition(const Vector& g) const { return P.helmholtz_solve((P.weights() * g).eval()); }
  Vector hess(const Vector& u, const Vector& ph, double lambda, const Vector& v) const {
    Vector Hv = P.kinetic_apply(v) / P.weights() + P.mu() * v;
    const Nonlinearity& f = P.nonlinearity();
    if (f.family != NonlinearityFamily::zero)
      for (int i = 0; i < P.grid().m; ++i) Hv[i] += f.fprime(u[i]) * v[i];
    // K*(uv) by polarization of the quadratic map, kept exactly symmetric
    const Array phip = solve_potential_radial(RadialProfile(P.grid(), (u + v).eval())).values;
    const Array phim = solve_potential_radial(RadialProfile(P.grid(), (u - v).eval())).values;
    const Array Kuv = 0.25 * (phip - phim);
    Hv += lambda * (ph * v + 2.0 * Kuv * u);
    return Hv;
  }
  double c() const { return P.c(); }
};

}  // namespace

RadialSolution minimize_radial(const RadialProblem& P, const RadialProfile& u0,
                               const SolveConfig& cfg) {
  if (!(u0.grid == P.grid())) throw DimensionError("minimize_radial: grid mismatch");
  RadialAdapter a{P};
  auto o = minimize_on_manifold(a, Array(u0.values), cfg);
  RadialSolution sol;
  sol.u = RadialProfile(P.grid(), std::move(o.u));
  sol.lambda = o.lambda;
  sol.energy = o.energy;
  sol.constraint = constraint_value_radial(sol.u);
  sol.residual = o.residual;
  sol.iterations = o.iterations;
  sol.converged = o.converged;
  return sol;
}

}  // namespace sbp
