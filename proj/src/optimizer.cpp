#include "sbp/optimizer.hpp"

#include "sbp/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sbp {

namespace {

struct GridAdapter {
  using Vector = Array;
  const Problem& P;
  double h3;

  explicit GridAdapter(const Problem& p) : P(p) {
    const double h = p.grid().h();
    h3 = h * h * h;
  }

  ScalarField wrap(const Vector& v) const { return ScalarField(P.grid(), v); }

  Vector phi(const Vector& u) const { return solve_potential(P.kernel(), wrap(u)).values; }
  double constraint_from_phi(const Vector& u, const Vector& ph) const {
    return h3 * (ph * u.square()).sum();
  }
  Vector b_from_phi(const Vector& u, const Vector& ph) const { return ph * u; }
  double energy(const Vector& u) const { return sbp::energy(P, wrap(u)); }
  Vector grad(const Vector& u) const { return euclidean_gradient(P, wrap(u)).values; }
  double inner(const Vector& a, const Vector& b) const { return h3 * (a * b).sum(); }
  Vector precondition(const Vector& g) const {
    return P.spectral().inverse_helmholtz(wrap(g), P.V0()).values;
  }
  Vector hess(const Vector& u, const Vector& ph, double lambda, const Vector& v) const {
    return hessian_apply(P, wrap(u), wrap(ph), lambda, wrap(v)).values;
  }
  double c() const { return P.c(); }
};

SolutionRecord to_record(const Problem& P, DescentOutcome<Array>&& o) {
  SolutionRecord rec;
  rec.u = ScalarField(P.grid(), std::move(o.u));
  rec.lambda = o.lambda;
  rec.energy = o.energy;
  rec.constraint = constraint_value(P, rec.u);
  rec.residual = o.residual;
  rec.iterations = o.iterations;
  rec.converged = o.converged;
  rec.sign_class = classify_sign(rec.u);
  rec.energies = std::move(o.energies);
  rec.barycenter = barycenter(rec.u, P.eps(), std::numeric_limits<double>::infinity());
  return rec;
}

}  // namespace

SolutionRecord minimize(const Problem& P, const ScalarField& u0, const SolveConfig& cfg) {
  require_same_grid(u0, ScalarField(P.grid()));
  GridAdapter a(P);
  return to_record(P, minimize_on_manifold(a, Array(u0.values), cfg));
}

std::vector<SolutionRecord> multi_start(const Problem& P, const std::vector<ScalarField>& starts,
                                        const SolveConfig& cfg) {
  std::vector<SolutionRecord> recs;
  recs.reserve(starts.size());
  for (const auto& s : starts) recs.push_back(minimize(P, s, cfg));

  std::vector<SolutionRecord> distinct;
  for (auto& r : recs) {
    bool dup = false;
    for (auto& d : distinct) {
      const double denom = std::max(norm_l2(d.u), norm_l2(r.u));
      const double dist = norm_l2(ScalarField(r.u.grid, r.u.values - d.u.values)) / denom;
      const double dlam = std::abs(r.lambda - d.lambda) / std::max(std::abs(d.lambda), 1e-300);
      if (dist < cfg.distinct_tol && dlam < cfg.distinct_tol) {
        if (r.energy < d.energy) d = r;  // keep the better representative
        dup = true;
        break;
      }
    }
    if (!dup) distinct.push_back(std::move(r));
  }
  std::sort(distinct.begin(), distinct.end(), [](const SolutionRecord& a, const SolutionRecord& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.lambda < b.lambda;
  });
  return distinct;
}

}  // namespace sbp
