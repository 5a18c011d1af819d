#pragma once

#include "sbp/descent.hpp"
#include "sbp/energy.hpp"

#include <optional>
#include <vector>

namespace sbp {

struct SolutionRecord {
  ScalarField u;
  double lambda = 0.0;
  double energy = 0.0;
  double constraint = 0.0;
  double residual = 0.0;
  Vec3 barycenter = Vec3::Zero();
  SignClass sign_class = SignClass::zero;
  std::optional<int> morse_index;
  int iterations = 0;
  bool converged = false;
  /// Energy after each accepted descent step, initial value first.
  std::vector<double> energies;
};

/// Projected gradient descent from u0 on {G = c}; non-convergence is a
/// flagged record, not an error. Throws DegenerateInput when G(u0) = 0.
SolutionRecord minimize(const Problem& P, const ScalarField& u0, const SolveConfig& cfg);

/// minimize per start, then deduplicate: two records are the same solution
/// when both the relative L2 distance and the relative lambda gap fall
/// below cfg.distinct_tol. Output sorted by energy, then lambda.
std::vector<SolutionRecord> multi_start(const Problem& P, const std::vector<ScalarField>& starts,
                                        const SolveConfig& cfg);

}  // namespace sbp
