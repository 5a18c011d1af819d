#pragma once

#include "sbp/fft.hpp"
#include "sbp/grid.hpp"
#include "sbp/potential.hpp"

#include <memory>
#include <vector>

namespace sbp {

enum class NonlinearityFamily { zero, one_sign_power, odd_power };

/// f(u) with f(u) u >= 0 in every family:
///   zero:            f = 0
///   one_sign_power:  f(u) = a max(u,0)^(p-1), vanishes on u <= 0
///   odd_power:       f(u) = a |u|^(p-2) u
struct Nonlinearity {
  NonlinearityFamily family = NonlinearityFamily::zero;
  double p = 3.0;
  double a = 0.0;

  static Nonlinearity zero() { return {}; }
  static Nonlinearity one_sign(double p, double a);
  static Nonlinearity odd(double p, double a);

  double f(double u) const;
  double fprime(double u) const;
  /// Primitive with F(0) = 0; F >= 0 everywhere.
  double F(double u) const;
  bool is_odd() const { return family == NonlinearityFamily::odd_power; }
};

enum class PotentialKind { constant, multi_well, radial_coercive, user_field };

/// External potential V with positive infimum V0. multi_well places V = V0
/// exactly at each center and grows as kappa times a saturating squared
/// distance (saturation scale = well_radius) away from the center set.
struct ExternalPotential {
  PotentialKind kind = PotentialKind::constant;
  double V0 = 1.0;
  double kappa = 1.0;
  double well_radius = 1.0;
  std::vector<Vec3> centers;
  ScalarField user_values;  // only for user_field, sampled in the x variable

  double operator()(const Vec3& x) const;
};

enum class SignClass { negative, positive, sign_changing, zero };

/// Full problem instance. Owns the spectral workspace and kernel plan for
/// its grid plus the cached V(eps x) samples; immutable after construction.
class Problem {
 public:
  Problem(const GridSpec& g, ExternalPotential V, double eps, Nonlinearity f, double c);

  const GridSpec& grid() const { return grid_; }
  const Nonlinearity& nonlinearity() const { return f_; }
  const ExternalPotential& potential() const { return V_; }
  double eps() const { return eps_; }
  double c() const { return c_; }
  double V0() const { return V_.V0; }
  const ScalarField& V_samples() const { return Veps_; }
  const SpectralWorkspace& spectral() const { return *spectral_; }
  const KernelPlan& kernel() const { return *kernel_; }
  KernelPlan& kernel_mutable() { return *kernel_; }  // verification fault hook

 private:
  GridSpec grid_;
  ExternalPotential V_;
  double eps_;
  Nonlinearity f_;
  double c_;
  ScalarField Veps_;
  std::shared_ptr<SpectralWorkspace> spectral_;
  std::shared_ptr<KernelPlan> kernel_;
};

/// I(u) = 1/2 int |grad u|^2 + 1/2 int V(eps x) u^2 + int F(u) >= 0.
double energy(const Problem& P, const ScalarField& u);

/// Squared W-norm, int |grad u|^2 + int V(eps x) u^2.
double w_norm_sq(const Problem& P, const ScalarField& u);

/// L2 representation g of I'(u): g = -Lap u + V(eps x) u + f(u).
ScalarField euclidean_gradient(const Problem& P, const ScalarField& u);

/// b = phi_u u, so that G'(u)[v] = 4 <b, v>.
ScalarField constraint_gradient(const Problem& P, const ScalarField& u);
/// Same, reusing an already computed phi_u.
ScalarField constraint_gradient(const ScalarField& phi, const ScalarField& u);

double constraint_value(const Problem& P, const ScalarField& u);

/// Scaling onto {G = c}: t = (c/G(u))^(1/4). Throws DegenerateInput on G = 0.
struct Projection {
  double t;
  ScalarField tu;
};
Projection project_to_manifold(const Problem& P, const ScalarField& u);

/// lambda(u) = -(int |grad u|^2 + int V u^2 + int f(u) u)/G(u) < 0.
double lagrange_multiplier(const Problem& P, const ScalarField& u);

struct Residual {
  double r;
  double lambda;
  double gradient_norm;
};
/// r = || g + lambda b ||_L2 with lambda from the multiplier formula.
Residual residual(const Problem& P, const ScalarField& u);

/// Second variation of u -> I(u) + lambda G(u)/4 applied to v:
/// Hv = -Lap v + V v + f'(u) v + lambda (phi_u v + 2 (K*(uv)) u).
ScalarField hessian_apply(const Problem& P, const ScalarField& u, double lambda,
                          const ScalarField& v);
/// Same with phi_u precomputed.
ScalarField hessian_apply(const Problem& P, const ScalarField& u, const ScalarField& phi,
                          double lambda, const ScalarField& v);

/// negative if the positive part is dust, positive symmetrically,
/// sign_changing if both parts exceed 1e-6 * max|u|.
SignClass classify_sign(const ScalarField& u);
const char* to_string(SignClass s);

}  // namespace sbp
