#include "sbp/energy.hpp"

#include <cmath>

namespace sbp {

Nonlinearity Nonlinearity::one_sign(double p, double a) {
  if (p <= 2.0 || p >= 6.0) throw DegenerateInput("nonlinearity: p must be in (2,6)");
  if (a < 0.0) throw DegenerateInput("nonlinearity: amplitude must be >= 0");
  return {NonlinearityFamily::one_sign_power, p, a};
}

Nonlinearity Nonlinearity::odd(double p, double a) {
  if (p <= 2.0 || p >= 6.0) throw DegenerateInput("nonlinearity: p must be in (2,6)");
  if (a < 0.0) throw DegenerateInput("nonlinearity: amplitude must be >= 0");
  return {NonlinearityFamily::odd_power, p, a};
}

double Nonlinearity::f(double u) const {
  switch (family) {
    case NonlinearityFamily::zero:
      return 0.0;
    case NonlinearityFamily::one_sign_power:
      return u > 0.0 ? a * std::pow(u, p - 1.0) : 0.0;
    case NonlinearityFamily::odd_power:
      return a * std::pow(std::abs(u), p - 2.0) * u;
  }
  return 0.0;
}

double Nonlinearity::fprime(double u) const {
  switch (family) {
    case NonlinearityFamily::zero:
      return 0.0;
    case NonlinearityFamily::one_sign_power:
      return u > 0.0 ? a * (p - 1.0) * std::pow(u, p - 2.0) : 0.0;
    case NonlinearityFamily::odd_power:
      return a * (p - 1.0) * std::pow(std::abs(u), p - 2.0);
  }
  return 0.0;
}

double Nonlinearity::F(double u) const {
  switch (family) {
    case NonlinearityFamily::zero:
      return 0.0;
    case NonlinearityFamily::one_sign_power:
      return u > 0.0 ? a / p * std::pow(u, p) : 0.0;
    case NonlinearityFamily::odd_power:
      return a / p * std::pow(std::abs(u), p);
  }
  return 0.0;
}

double ExternalPotential::operator()(const Vec3& x) const {
  switch (kind) {
    case PotentialKind::constant:
      return V0;
    case PotentialKind::radial_coercive:
      return V0 + kappa * x.squaredNorm();
    case PotentialKind::multi_well: {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : centers) best = std::min(best, (x - y).squaredNorm());
      const double R2 = well_radius * well_radius;
      return V0 + kappa * best * R2 / (R2 + best);
    }
    case PotentialKind::user_field:
      return interpolate(user_values, x);
  }
  return V0;
}

Problem::Problem(const GridSpec& g, ExternalPotential V, double eps, Nonlinearity f, double c)
    : grid_(g), V_(std::move(V)), eps_(eps), f_(f), c_(c), Veps_(g) {
  if (eps_ <= 0.0) throw DegenerateInput("problem: eps must be positive");
  if (c_ <= 0.0) throw DegenerateInput("problem: constraint level must be positive");
  if (V_.V0 <= 0.0) throw DegenerateInput("problem: V0 must be positive");
  if (V_.kind == PotentialKind::multi_well && V_.centers.empty())
    throw DegenerateInput("problem: multi_well needs at least one center");
  Veps_ = sample_field(g, [&](double x, double y, double z) {
    return V_(Vec3(eps_ * x, eps_ * y, eps_ * z));
  });
  if (Veps_.values.minCoeff() <= 0.0)
    throw DegenerateInput("problem: sampled potential must stay positive");
  spectral_ = std::make_shared<SpectralWorkspace>(g);
  kernel_ = std::make_shared<KernelPlan>(g);
}

double w_norm_sq(const Problem& P, const ScalarField& u) {
  const double h = u.grid.h();
  const double mass = h * h * h * (P.V_samples().values * u.values.square()).sum();
  return P.spectral().gradient_sq_integral(u) + mass;
}

double energy(const Problem& P, const ScalarField& u) {
  const auto& f = P.nonlinearity();
  const double h = u.grid.h();
  double Fsum = 0.0;
  if (f.family != NonlinearityFamily::zero)
    for (long i = 0; i < u.values.size(); ++i) Fsum += f.F(u.values[i]);
  return 0.5 * w_norm_sq(P, u) + h * h * h * Fsum;
}

ScalarField euclidean_gradient(const Problem& P, const ScalarField& u) {
  ScalarField g = P.spectral().neg_laplacian(u);
  g.values += P.V_samples().values * u.values;
  const auto& f = P.nonlinearity();
  if (f.family != NonlinearityFamily::zero)
    for (long i = 0; i < u.values.size(); ++i) g.values[i] += f.f(u.values[i]);
  return g;
}

ScalarField constraint_gradient(const Problem& P, const ScalarField& u) {
  return constraint_gradient(solve_potential(P.kernel(), u), u);
}

ScalarField constraint_gradient(const ScalarField& phi, const ScalarField& u) {
  require_same_grid(phi, u);
  return ScalarField(u.grid, phi.values * u.values);
}

double constraint_value(const Problem& P, const ScalarField& u) {
  return constraint_value(P.kernel(), u);
}

Projection project_to_manifold(const Problem& P, const ScalarField& u) {
  const double G = constraint_value(P, u);
  if (G <= 0.0) throw DegenerateInput("project_to_manifold: G(u) = 0");
  const double t = std::pow(P.c() / G, 0.25);
  return {t, ScalarField(u.grid, t * u.values)};
}

double lagrange_multiplier(const Problem& P, const ScalarField& u) {
  const double G = constraint_value(P, u);
  if (G <= 0.0) throw DegenerateInput("lagrange_multiplier: G(u) = 0");
  const auto& f = P.nonlinearity();
  const double h = u.grid.h();
  double fu = 0.0;
  if (f.family != NonlinearityFamily::zero)
    for (long i = 0; i < u.values.size(); ++i) fu += f.f(u.values[i]) * u.values[i];
  return -(w_norm_sq(P, u) + h * h * h * fu) / G;
}

Residual residual(const Problem& P, const ScalarField& u) {
  const ScalarField phi = solve_potential(P.kernel(), u);
  const double h = u.grid.h();
  const double G = h * h * h * (phi.values * u.values.square()).sum();
  if (G <= 0.0) throw DegenerateInput("residual: G(u) = 0");
  const ScalarField g = euclidean_gradient(P, u);
  const auto& f = P.nonlinearity();
  double fu = 0.0;
  if (f.family != NonlinearityFamily::zero)
    for (long i = 0; i < u.values.size(); ++i) fu += f.f(u.values[i]) * u.values[i];
  const double lambda = -(w_norm_sq(P, u) + h * h * h * fu) / G;
  const Array res = g.values + lambda * phi.values * u.values;
  const double r = std::sqrt(h * h * h * res.square().sum());
  return {r, lambda, norm_l2(g)};
}

ScalarField hessian_apply(const Problem& P, const ScalarField& u, double lambda,
                          const ScalarField& v) {
  return hessian_apply(P, u, solve_potential(P.kernel(), u), lambda, v);
}

ScalarField hessian_apply(const Problem& P, const ScalarField& u, const ScalarField& phi,
                          double lambda, const ScalarField& v) {
  require_same_grid(u, v);
  ScalarField Hv = P.spectral().neg_laplacian(v);
  Hv.values += P.V_samples().values * v.values;
  const auto& f = P.nonlinearity();
  if (f.family != NonlinearityFamily::zero)
    for (long i = 0; i < u.values.size(); ++i) Hv.values[i] += f.fprime(u.values[i]) * v.values[i];
  const ScalarField Kuv = bilinear_potential(P.kernel(), u, v);
  Hv.values += lambda * (phi.values * v.values + 2.0 * Kuv.values * u.values);
  return Hv;
}

SignClass classify_sign(const ScalarField& u) {
  const double amp = u.values.abs().maxCoeff();
  if (amp == 0.0) return SignClass::zero;
  const double theta = 1e-6 * amp;
  const bool has_pos = u.values.maxCoeff() > theta;
  const bool has_neg = u.values.minCoeff() < -theta;
  if (has_pos && has_neg) return SignClass::sign_changing;
  return has_pos ? SignClass::positive : SignClass::negative;
}

const char* to_string(SignClass s) {
  switch (s) {
    case SignClass::negative: return "negative";
    case SignClass::positive: return "positive";
    case SignClass::sign_changing: return "sign_changing";
    case SignClass::zero: return "zero";
  }
  return "?";
}

}  // namespace sbp
