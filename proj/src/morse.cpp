#include "sbp/morse.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace sbp {

namespace {

struct ProjectedHessian {
  const Problem& P;
  const ScalarField& u;
  ScalarField phi;
  ScalarField b;
  double bb;
  double h3;

  ProjectedHessian(const Problem& p, const SolutionRecord& rec)
      : P(p), u(rec.u), phi(solve_potential(p.kernel(), rec.u)) {
    b = constraint_gradient(phi, u);
    const double h = p.grid().h();
    h3 = h * h * h;
    bb = h3 * b.values.square().sum();
  }

  double inner(const Array& x, const Array& y) const { return h3 * (x * y).sum(); }

  Array project(const Array& v) const { return v - (inner(v, b.values) / bb) * b.values; }

  Array apply(const Array& v, double lambda) const {
    const Array pv = project(v);
    const ScalarField Hv = hessian_apply(P, u, phi, lambda, ScalarField(P.grid(), pv));
    return project(Hv.values);
  }
};

Array seeded_unit(long size, double h3, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  Array v(size);
  for (long i = 0; i < size; ++i) v[i] = dist(rng);
  v /= std::sqrt(h3 * v.square().sum());
  return v;
}

void require_certified(const SolutionRecord& rec) {
  if (!rec.converged)
    throw DegenerateInput("morse: record is not a certified critical point");
}

}  // namespace

double operator_norm_estimate(const Problem& P, const SolutionRecord& rec) {
  require_certified(rec);
  ProjectedHessian op(P, rec);
  Array v = op.project(seeded_unit(P.grid().total(), op.h3, 0x9e3779b97f4a7c15ull));
  v /= std::sqrt(op.inner(v, v));
  double est = 0.0;
  for (int it = 0; it < 120; ++it) {
    Array w = op.apply(v, rec.lambda);
    const double nw = std::sqrt(op.inner(w, w));
    if (nw == 0.0) return 0.0;
    const double prev = est;
    est = nw;
    v = w / nw;
    if (it > 4 && std::abs(est - prev) <= 0.01 * est) break;
  }
  return est;
}

SpectrumReport morse_index(const Problem& P, const SolutionRecord& rec, int k, double tol_eig) {
  require_certified(rec);
  if (k < 1) throw DegenerateInput("morse: k must be >= 1");

  ProjectedHessian op(P, rec);
  SpectrumReport rep;
  rep.operator_norm = operator_norm_estimate(P, rec);
  rep.tol_eig = tol_eig > 0.0 ? tol_eig : 1e-6 * rep.operator_norm;
  const double sigma = 1.05 * rep.operator_norm + 1.0;
  const double resid_target = 1e-6 * std::max(rep.operator_norm, 1.0);

  // Lanczos on sigma I - P H P: the smallest eigenvalues of the projected
  // Hessian become the dominant end of the transformed spectrum.
  const long size = P.grid().total();
  const int max_dim = static_cast<int>(std::min<long>(300, size - 1));
  std::vector<Array> basis;
  std::vector<double> alpha, beta;

  Array v = op.project(seeded_unit(size, op.h3, 1234567ull));
  v /= std::sqrt(op.inner(v, v));
  basis.push_back(v);

  Eigen::VectorXd ritz;
  Eigen::MatrixXd ritz_vecs;
  int converged_pairs = 0;

  auto solve_tridiag = [&](int j) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(j, j);
    for (int i = 0; i < j; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < j) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    ritz = es.eigenvalues();    // ascending
    ritz_vecs = es.eigenvectors();
  };

  int j = 0;
  for (; j < max_dim; ++j) {
    Array w = sigma * basis[j] - op.apply(basis[j], rec.lambda);
    const double a = op.inner(w, basis[j]);
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    // full reorthogonalization, twice for safety
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= op.inner(w, q) * q;
    w = op.project(w);
    const double nb = std::sqrt(op.inner(w, w));
    if (nb < 1e-13 * sigma) {
      solve_tridiag(j + 1);
      converged_pairs = k;  // invariant subspace found
      break;
    }
    beta.push_back(nb);
    basis.push_back((w / nb).eval());

    if ((j + 1) % 10 == 0 || j + 1 == max_dim) {
      solve_tridiag(j + 1);
      // residual bound |beta_j * last component| for the top (largest) pairs
      converged_pairs = 0;
      const int have = static_cast<int>(ritz.size());
      for (int i = 0; i < std::min(k, have); ++i) {
        const double bound = nb * std::abs(ritz_vecs(have - 1, have - 1 - i));
        if (bound <= resid_target) ++converged_pairs;
      }
      if (converged_pairs >= k) break;
    }
  }
  if (ritz.size() == 0) solve_tridiag(j);
  rep.stagnated = converged_pairs < std::min<int>(k, static_cast<int>(ritz.size()));

  // Assemble the k smallest eigenvalues of PHP (= sigma - largest ritz of A).
  const int have = static_cast<int>(ritz.size());
  const int kk = std::min(k, have);
  for (int i = 0; i < kk; ++i) {
    const int col = have - 1 - i;  // descending ritz of A
    const double theta = sigma - ritz[col];
    rep.eigenvalues.push_back(theta);
    // explicit eigen-residual via the Ritz vector
    Array y = Array::Zero(size);
    for (int m = 0; m < have; ++m) y += ritz_vecs(m, col) * basis[m];
    y /= std::sqrt(op.inner(y, y));
    const Array r = op.apply(y, rec.lambda) - theta * y;
    rep.eigen_residuals.push_back(std::sqrt(op.inner(r, r)));
  }
  // theta comes out ascending: largest ritz of A first
  for (double t : rep.eigenvalues)
    if (t < -rep.tol_eig) ++rep.morse_index;
  rep.index_may_exceed_k = !rep.eigenvalues.empty() && rep.eigenvalues.back() < -rep.tol_eig;
  return rep;
}

}  // namespace sbp
