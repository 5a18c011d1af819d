#pragma once

#include "sbp/energy.hpp"
#include "sbp/optimizer.hpp"

#include <vector>

namespace sbp {

struct SpectrumReport {
  std::vector<double> eigenvalues;      // ascending, k smallest of P H P
  std::vector<double> eigen_residuals;  // ||PHP v - theta v|| per pair
  int morse_index = 0;
  double tol_eig = 0.0;
  double operator_norm = 0.0;
  bool index_may_exceed_k = false;  // k-th eigenvalue still below -tol_eig
  bool stagnated = false;           // Krylov space exhausted before residual target
};

/// Power-iteration estimate of ||P H P|| (5% target) for a certified record.
double operator_norm_estimate(const Problem& P, const SolutionRecord& rec);

/// k smallest eigenvalues of the Lagrangian Hessian projected onto the
/// tangent space of {G = c} at rec.u, by shifted Lanczos with full
/// reorthogonalization. morse_index counts eigenvalues < -tol_eig
/// (default 1e-6 * ||H||), which excuses the translational near-zero modes.
/// Throws DegenerateInput when the record is not a certified critical point.
SpectrumReport morse_index(const Problem& P, const SolutionRecord& rec, int k,
                           double tol_eig = -1.0);

}  // namespace sbp
