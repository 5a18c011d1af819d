#pragma once

#include "sbp/descent.hpp"
#include "sbp/energy.hpp"
#include "sbp/grid.hpp"

namespace sbp {

/// Radial discretization of the constant-potential problem
/// -Lap u + mu u + lambda phi_u u + f(u) = 0 on nodes r_j = j dr with a
/// Dirichlet decay boundary at r_max. The kinetic term is the interval
/// quadratic form sum k_j (u_{j+1}-u_j)^2 with k_j = 4 pi r_{j+1/2}^2 / dr,
/// so the discrete energy gradient is exact.
class RadialProblem {
 public:
  RadialProblem(const RadialGrid& g, double mu, Nonlinearity f, double c);

  const RadialGrid& grid() const { return grid_; }
  double mu() const { return mu_; }
  double c() const { return c_; }
  const Nonlinearity& nonlinearity() const { return f_; }
  const Array& weights() const { return w_; }

  /// Discrete analogue of int |grad u|^2.
  double gradient_sq(const Array& u) const;
  /// Tridiagonal kinetic operator T (gradient of 1/2 gradient_sq).
  Array kinetic_apply(const Array& u) const;
  /// (T + mu W)^{-1} rhs by the Thomas algorithm.
  Array helmholtz_solve(const Array& rhs) const;

  double energy(const Array& u) const;
  double w_norm_sq(const Array& u) const { return gradient_sq(u) + mu_ * (w_ * u.square()).sum(); }
  /// Representation of E'(u) in the weighted inner product.
  Array grad(const Array& u) const;
  double inner(const Array& a, const Array& b) const { return (w_ * a * b).sum(); }

 private:
  RadialGrid grid_;
  double mu_, c_;
  Nonlinearity f_;
  Array w_;   // volume weights
  Array k_;   // interval kinetic coefficients, size m (last couples to the ghost zero)
};

struct RadialSolution {
  RadialProfile u;
  double lambda = 0.0;
  double energy = 0.0;
  double constraint = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

RadialSolution minimize_radial(const RadialProblem& P, const RadialProfile& u0,
                               const SolveConfig& cfg);

}  // namespace sbp
