#pragma once

#include "sbp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace sbp {

struct SolveConfig {
  double tol_residual = 1e-8;
  int max_iter = 20000;
  double armijo_c = 1e-4;
  double step_init = 1.0;
  double step_shrink = 0.5;
  bool precondition = true;
  double distinct_tol = 0.05;

  void validate() const {
    if (tol_residual <= 0 || max_iter <= 0 || step_init <= 0) throw DegenerateInput("solve config: positive fields required");
    if (!(armijo_c > 0 && armijo_c < 1)) throw DegenerateInput("solve config: armijo_c in (0,1)");
    if (!(step_shrink > 0 && step_shrink < 1)) throw DegenerateInput("solve config: step_shrink in (0,1)");
    if (distinct_tol <= 0) throw DegenerateInput("solve config: distinct_tol positive");
  }
};

template <class Vector>
struct DescentOutcome {
  Vector u;
  bool converged = false;
  int iterations = 0;
  double energy = 0.0;
  double constraint = 0.0;
  double lambda = 0.0;
  double residual = 0.0;
  double gradient_norm = 0.0;
  /// Energy after each accepted descent step (initial value first);
  /// nonincreasing by the Armijo rule.
  std::vector<double> energies;
};

/// Projected gradient descent on {G(u) = c} where G is quartically
/// homogeneous, so re-projection is the exact scaling t = (c/G)^(1/4).
///
/// The adapter supplies the discretization:
///   Vector phi(u)                      nonlocal potential of u (the costly op)
///   double constraint_from_phi(u,phi)  G(u)
///   Vector b_from_phi(u,phi)           b with G'(u)[v] = 4 <b,v>
///   double energy(u)
///   Vector grad(u)                     representation of I'(u) in <,>
///   Vector hess(u,phi,lambda,v)        second variation of I + lambda G/4
///   double inner(a,b)
///   Vector precondition(g)             SPD metric change, identity allowed
///   double c()
/// Vector must support a*x, x + a*y element expressions (Eigen arrays).
///
/// Two phases: Barzilai-Borwein projected descent with monotone Armijo
/// backtracking, then -- once the quadratic basin is reached -- a safeguarded
/// Newton-CG polish on the tangent space. The polish is what pushes through
/// the soft near-zero modes (translations on a constant potential) that make
/// plain first-order descent crawl.
template <class Adapter>
DescentOutcome<typename Adapter::Vector> minimize_on_manifold(const Adapter& a,
                                                              typename Adapter::Vector u0,
                                                              const SolveConfig& cfg) {
  using Vector = typename Adapter::Vector;
  cfg.validate();
  const double c = a.c();

  Vector phi = a.phi(u0);
  double G = a.constraint_from_phi(u0, phi);
  if (!(G > 0.0)) throw DegenerateInput("minimize: starting point has G(u0) = 0");
  double t = std::pow(c / G, 0.25);
  Vector u = (t * u0).eval();
  phi = (t * t * phi).eval();

  DescentOutcome<Vector> out;
  double E = a.energy(u);
  out.energies.push_back(E);
  double step = cfg.step_init;
  const int max_backtracks = 60;

  // previous accepted point and direction, for the Barzilai-Borwein trial step
  Vector u_prev;
  Vector d_prev;
  bool have_prev = false;

  // stall detector: hand over to the polish phase once the residual stops
  // halving, instead of burning the whole iteration budget on a plateau
  double best_seen = std::numeric_limits<double>::infinity();
  int stall = 0;

  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    const Vector g = a.grad(u);
    const Vector b = a.b_from_phi(u, phi);
    const double bb = a.inner(b, b);
    const double lambda = -a.inner(g, u) / c;  // <b,u> = G = c on the manifold
    const Vector res = (g + lambda * b).eval();
    const double rnorm = std::sqrt(a.inner(res, res));
    const double gnorm = std::sqrt(a.inner(g, g));

    out.lambda = lambda;
    out.residual = rnorm;
    out.gradient_norm = gnorm;
    if (rnorm <= cfg.tol_residual * std::max(1.0, gnorm)) {
      out.converged = true;
      break;
    }
    if (rnorm < 0.5 * best_seen) {
      best_seen = rnorm;
      stall = 0;
    } else {
      best_seen = std::min(best_seen, rnorm);
      if (++stall >= 150) break;
    }

    auto tangent = [&](const Vector& v) {
      return (v - (a.inner(v, b) / bb) * b).eval();
    };
    Vector d = tangent(g);
    double slope = a.inner(g, d);
    if (cfg.precondition) {
      const Vector dp = tangent(a.precondition(d));
      const double sp = a.inner(g, dp);
      if (sp > 0.0) {
        d = dp;
        slope = sp;
      }
    }
    if (!(slope > 0.0)) break;  // numerically stationary, leave flagged

    if (have_prev) {
      // BB1 trial step from the accepted (u, d) history; the monotone Armijo
      // backtracking below keeps the energy decrease guarantee
      const Vector du = (u - u_prev).eval();
      const Vector dd = (d - d_prev).eval();
      const double denom = a.inner(du, dd);
      if (denom > 0.0) {
        const double bb = a.inner(du, du) / denom;
        step = std::clamp(bb, 1e-6 * cfg.step_init, 1e4 * cfg.step_init);
      }
    }
    u_prev = u;
    d_prev = d;
    have_prev = true;

    bool accepted = false;
    for (int bt = 0; bt < max_backtracks; ++bt) {
      const Vector x = (u - step * d).eval();
      Vector phix = a.phi(x);
      const double Gx = a.constraint_from_phi(x, phix);
      if (Gx > 1e-300) {
        const double tx = std::pow(c / Gx, 0.25);
        const Vector xt = (tx * x).eval();
        const double Et = a.energy(xt);
        if (Et <= E - cfg.armijo_c * step * slope) {
          u = xt;
          phi = (tx * tx * phix).eval();
          E = Et;
          out.energies.push_back(E);
          accepted = true;
          break;
        }
      }
      step *= cfg.step_shrink;
    }
    if (!accepted) break;  // line search exhausted, leave flagged
    step = std::min(step / cfg.step_shrink, 1e4 * cfg.step_init);
  }

  // Levenberg-Marquardt damped Newton-CG polish. The damping sigma = |res|
  // regularizes the soft translation modes that a constant potential leaves
  // near-singular, so the step stays inside the quadratic basin; as the
  // residual falls the damping vanishes and the iteration turns Newton.
  // The residual is not monotone along the way, so the best iterate is kept.
  const int max_polish = 30;
  Vector best_u = u;
  Vector best_phi = phi;
  double best_E = E;
  double best_r = std::numeric_limits<double>::infinity();
  double best_g = 0.0, best_lambda = 0.0;
  int since_best = 0;
  for (int polish = 0; !out.converged && iter < cfg.max_iter && polish < max_polish; ++polish) {
    const Vector g = a.grad(u);
    const Vector b = a.b_from_phi(u, phi);
    const double bb = a.inner(b, b);
    const double lambda = -a.inner(g, u) / c;
    const Vector res = (g + lambda * b).eval();
    const double rnorm = std::sqrt(a.inner(res, res));
    const double gnorm = std::sqrt(a.inner(g, g));
    if (rnorm < best_r) {
      best_u = u;
      best_phi = phi;
      best_E = E;
      best_r = rnorm;
      best_g = gnorm;
      best_lambda = lambda;
      since_best = 0;
      if (rnorm <= cfg.tol_residual * std::max(1.0, gnorm)) {
        out.converged = true;
        break;
      }
    } else if (++since_best >= 6) {
      break;  // not improving any more, settle for the best point seen
    }

    auto tangent = [&](const Vector& v) { return (v - (a.inner(v, b) / bb) * b).eval(); };
    // CG on the damped projected Hessian; solved tightly so the soft modes
    // are resolved rather than left to dominate the error
    const double sigma = rnorm;
    const Vector rhs = tangent(res);
    Vector d = (0.0 * u).eval();
    Vector r = rhs;
    Vector p = rhs;
    double rr = a.inner(r, r);
    const double cg_target = 1e-6 * std::sqrt(rr);
    for (int it = 0; it < 400; ++it) {
      const Vector pt = tangent(p);
      const Vector Hp = (tangent(a.hess(u, phi, lambda, pt)) + sigma * pt).eval();
      const double pHp = a.inner(p, Hp);
      if (!(pHp > 0.0)) break;  // indefinite direction, stop with current d
      const double alpha = rr / pHp;
      d = (d + alpha * p).eval();
      r = (r - alpha * Hp).eval();
      const double rr2 = a.inner(r, r);
      if (std::sqrt(rr2) <= cg_target) break;
      p = (r + (rr2 / rr) * p).eval();
      rr = rr2;
    }
    if (!(a.inner(d, d) > 0.0)) break;

    const Vector x = (u - d).eval();
    Vector phix = a.phi(x);
    const double Gx = a.constraint_from_phi(x, phix);
    if (!(Gx > 1e-300)) break;
    const double tx = std::pow(c / Gx, 0.25);
    u = (tx * x).eval();
    phi = (tx * tx * phix).eval();
    E = a.energy(u);
    ++iter;
  }
  if (best_r < out.residual) {
    u = best_u;
    phi = best_phi;
    E = best_E;
    out.residual = best_r;
    out.gradient_norm = best_g;
    out.lambda = best_lambda;
  }

  out.u = u;
  out.iterations = iter;
  out.energy = E;
  out.constraint = c;
  if (!out.converged && out.residual == 0.0) {
    // loop never ran a residual evaluation (max_iter == 0 edge)
    out.residual = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace sbp
