#pragma once

#include "sbp/fft.hpp"
#include "sbp/grid.hpp"

#include <memory>

namespace sbp {

/// Difference of Coulomb and Yukawa kernels, K(r) = (1 - exp(-r))/r,
/// continued with its limit K(0) = 1.
double bp_kernel(double r);

/// Precomputed zero-padded transform of the kernel for one grid.
/// Immutable after construction; apply calls are serialized internally.
class KernelPlan {
 public:
  explicit KernelPlan(const GridSpec& g);

  const GridSpec& grid() const { return conv_.grid(); }
  const FreeConvolution& convolution() const { return conv_; }

  /// Verification-suite fault hook.
  void corrupt(double amount) { conv_.corrupt_kernel(amount); }

 private:
  FreeConvolution conv_;
};

/// phi_u = K * u^2 by fast free-space convolution. Negative numerical dust
/// down to -1e-12 * max(phi) is clamped to zero; anything below aborts.
ScalarField solve_potential(const KernelPlan& plan, const ScalarField& u);

/// K * (v w); solve_potential(plan, u) == bilinear_potential(plan, u, u).
ScalarField bilinear_potential(const KernelPlan& plan, const ScalarField& v, const ScalarField& w);

/// O(n^6) direct quadrature, same convention as the fast path. Refuses n > 32.
ScalarField solve_potential_direct(const ScalarField& u);

/// G(u) = integral of phi_u u^2 (nonnegative, quartically homogeneous).
double constraint_value(const KernelPlan& plan, const ScalarField& u);

/// Radial potential by the shell decomposition K = 1/r - exp(-r)/r:
/// Coulomb shell term minus the l=0 Yukawa shell term, with analytic r -> 0
/// limits. Exactly symmetric as a bilinear form in the quadrature weights.
RadialProfile solve_potential_radial(const RadialProfile& u);

/// Radial constraint value, integral of phi u^2 against 4 pi r^2 dr.
double constraint_value_radial(const RadialProfile& u);

}  // namespace sbp
