#pragma once

#include "sbp/energy.hpp"
#include "sbp/radial.hpp"

namespace sbp {

/// Smooth nonincreasing cutoff: 1 on [0, T/2], 0 on [T, inf), bridged by a
/// C^2 quintic smoothstep in the normalized s^2 variable.
struct CutoffSpec {
  double T = 1.0;

  explicit CutoffSpec(double T_) : T(T_) {
    if (T <= 0.0) throw DegenerateInput("cutoff: T must be positive");
  }
  double eta(double s) const;
};

/// Ground state of the constant-potential radial problem on {G = c},
/// stored nonpositive.
struct AutonomousGroundState {
  double mu = 0.0;
  double c = 0.0;
  RadialProfile profile;
  double energy = 0.0;
  double lambda = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;

  /// Smallest radius holding half of the L2 mass; sets the default cutoff.
  double half_mass_radius() const;
};

/// Projected descent in the radial discretization; output oriented
/// nonpositive (positive dust below 1e-10 of the amplitude is clamped).
AutonomousGroundState autonomous_ground_state(double mu, const Nonlinearity& f, double c,
                                              const RadialGrid& g, const SolveConfig& cfg,
                                              const RadialProfile* start = nullptr);

/// Decreasing volume-weighted rearrangement of |p| on its own grid.
RadialProfile decreasing_rearrangement(const RadialProfile& p);

struct SymmetrizationCheck {
  double energy_before = 0.0;
  double energy_after = 0.0;  // E(t_* u^*)
  double t_star = 0.0;
  bool holds = false;         // energy_after <= energy_before + 1e-10
};
/// Rearrangement inequality E(t_* u^*) <= E(u) for nonnegative radial data;
/// evaluated on |p|. Throws DegenerateInput when G(|p|) = 0.
SymmetrizationCheck symmetrization_test(const RadialProblem& P, const RadialProfile& p);

/// Bump Psi(x) = eta(|eps x - y|) * gs((eps x - y)/eps) sampled by cubic
/// radial interpolation. Throws GeometryError when the support ball
/// |eps x - y| <= T does not fit inside the grid box.
ScalarField make_bump(const AutonomousGroundState& gs, double eps, const Vec3& y,
                      const CutoffSpec& cut, const GridSpec& grid);

/// Bump re-projected onto {G = c}: nonpositive, constraint exact.
ScalarField make_phi(const Problem& P, const AutonomousGroundState& gs, const Vec3& y,
                     const CutoffSpec& cut);

/// u^2-weighted mean of chi(eps x), chi(x) = x clipped to the ball of
/// radius rho. Throws DegenerateInput on u = 0.
Vec3 barycenter(const ScalarField& u, double eps, double rho);

}  // namespace sbp
