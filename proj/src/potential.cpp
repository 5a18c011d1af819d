#include "sbp/potential.hpp"

#include <cmath>
#include <vector>

namespace sbp {

double bp_kernel(double r) {
  // (1 - exp(-r))/r with the removable singularity filled in; the series
  // keeps full precision where the quotient would cancel.
  if (r < 1e-4) return 1.0 - r / 2.0 + r * r / 6.0 - r * r * r / 24.0;
  return (1.0 - std::exp(-r)) / r;
}

KernelPlan::KernelPlan(const GridSpec& g) : conv_(g, &bp_kernel) {}

namespace {

ScalarField clamp_dust(ScalarField phi) {
  const double maxphi = phi.values.maxCoeff();
  const double floor = -1e-12 * std::max(maxphi, 0.0);
  const double worst = phi.values.minCoeff();
  if (worst < floor)
    throw std::runtime_error("solve_potential: negative values beyond numerical dust");
  phi.values = phi.values.max(0.0);
  return phi;
}

}  // namespace

ScalarField solve_potential(const KernelPlan& plan, const ScalarField& u) {
  if (u.grid != plan.grid()) throw DimensionError("solve_potential: grid mismatch");
  ScalarField sq(u.grid, u.values.square());
  return clamp_dust(plan.convolution().apply(sq));
}

ScalarField bilinear_potential(const KernelPlan& plan, const ScalarField& v, const ScalarField& w) {
  if (v.grid != plan.grid() || w.grid != plan.grid())
    throw DimensionError("bilinear_potential: grid mismatch");
  ScalarField prod(v.grid, v.values * w.values);
  return plan.convolution().apply(prod);
}

ScalarField solve_potential_direct(const ScalarField& u) {
  const int n = u.grid.n;
  if (n > 32) throw SizeError("solve_potential_direct: n > 32 refused (O(n^6) cost)");
  const double h = u.grid.h();
  const double h3 = h * h * h;
  const long total = u.grid.total();
  std::vector<double> cx(total), cy(total), cz(total);
  {
    long idx = 0;
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy)
        for (int iz = 0; iz < n; ++iz, ++idx) {
          cx[idx] = u.grid.coord(ix);
          cy[idx] = u.grid.coord(iy);
          cz[idx] = u.grid.coord(iz);
        }
  }
  ScalarField phi(u.grid);
  for (long i = 0; i < total; ++i) {
    double acc = 0.0;
    for (long j = 0; j < total; ++j) {
      const double dx = cx[i] - cx[j], dy = cy[i] - cy[j], dz = cz[i] - cz[j];
      const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
      acc += bp_kernel(r) * u.values[j] * u.values[j];
    }
    phi.values[i] = h3 * acc;
  }
  return phi;
}

double constraint_value(const KernelPlan& plan, const ScalarField& u) {
  const ScalarField phi = solve_potential(plan, u);
  const double h = u.grid.h();
  return h * h * h * (phi.values * u.values.square()).sum();
}

RadialProfile solve_potential_radial(const RadialProfile& u) {
  const RadialGrid& g = u.grid;
  const int m = g.m;
  const Array w = radial_weights(g);
  const Array q = u.values.square();

  // Shell kernel k(r,s) = 1/max(r,s) - sinh(min(r,s)) e^{-max(r,s)} / (r s),
  // with k(r,0) = K(r). Prefix sums keep the bilinear form symmetric.
  Array A(m), C(m);  // inner sums over 1 <= j <= i
  Array B(m), D(m);  // outer sums over j > i
  A[0] = C[0] = 0.0;
  for (int j = 1; j < m; ++j) {
    const double r = g.r(j);
    A[j] = A[j - 1] + w[j] * q[j];
    C[j] = C[j - 1] + w[j] * q[j] * std::sinh(r) / r;
  }
  B[m - 1] = D[m - 1] = 0.0;
  for (int j = m - 2; j >= 0; --j) {
    const double r = g.r(j + 1);
    B[j] = B[j + 1] + w[j + 1] * q[j + 1] / r;
    D[j] = D[j + 1] + w[j + 1] * q[j + 1] * std::exp(-r) / r;
  }

  const double origin_mass = w[0] * q[0];
  RadialProfile phi(g);
  phi.values[0] = origin_mass + (B[0] - D[0]);
  for (int i = 1; i < m; ++i) {
    const double r = g.r(i);
    phi.values[i] = origin_mass * bp_kernel(r) + A[i] / r + B[i] -
                    std::exp(-r) / r * C[i] - std::sinh(r) / r * D[i];
  }
  return phi;
}

double constraint_value_radial(const RadialProfile& u) {
  const RadialProfile phi = solve_potential_radial(u);
  return (radial_weights(u.grid) * phi.values * u.values.square()).sum();
}

}  // namespace sbp
