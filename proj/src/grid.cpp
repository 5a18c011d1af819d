#include "sbp/grid.hpp"

#include <cmath>

namespace sbp {

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.grid != b.grid) throw DimensionError("fields live on different grids");
}

double integrate(const ScalarField& u) {
  const double h = u.grid.h();
  return h * h * h * u.values.sum();
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  const double h = a.grid.h();
  return h * h * h * (a.values * b.values).sum();
}

double norm_l2(const ScalarField& u) { return std::sqrt(inner(u, u)); }

double norm_lp(const ScalarField& u, double p) {
  const double h = u.grid.h();
  return std::pow(h * h * h * u.values.abs().pow(p).sum(), 1.0 / p);
}

bool all_finite(const ScalarField& u) { return u.values.allFinite(); }

ScalarField shift(const ScalarField& u, int sx, int sy, int sz) {
  const int n = u.grid.n;
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  ScalarField out(u.grid);
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz)
        out.at(wrap(ix + sx), wrap(iy + sy), wrap(iz + sz)) = u.at(ix, iy, iz);
  return out;
}

ScalarField gaussian_field(const GridSpec& g, double a, const Vec3& x0, double amplitude) {
  return sample_field(g, [&](double x, double y, double z) {
    const double dx = x - x0[0], dy = y - x0[1], dz = z - x0[2];
    return amplitude * std::exp(-a * (dx * dx + dy * dy + dz * dz));
  });
}

double interpolate(const ScalarField& u, const Vec3& x) {
  const int n = u.grid.n;
  const double h = u.grid.h();
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  double fi[3];
  int i0[3];
  for (int d = 0; d < 3; ++d) {
    const double t = (x[d] + u.grid.L) / h;
    const double fl = std::floor(t);
    i0[d] = static_cast<int>(fl);
    fi[d] = t - fl;
  }
  double acc = 0.0;
  for (int dx = 0; dx < 2; ++dx)
    for (int dy = 0; dy < 2; ++dy)
      for (int dz = 0; dz < 2; ++dz) {
        const double w = (dx ? fi[0] : 1 - fi[0]) * (dy ? fi[1] : 1 - fi[1]) * (dz ? fi[2] : 1 - fi[2]);
        acc += w * u.at(wrap(i0[0] + dx), wrap(i0[1] + dy), wrap(i0[2] + dz));
      }
  return acc;
}

Array radial_weights(const RadialGrid& g) {
  const double dr = g.dr();
  Array w(g.m);
  // half-cell sphere around the origin node
  w[0] = M_PI * dr * dr * dr / 6.0;
  for (int j = 1; j < g.m; ++j) {
    const double r = g.r(j);
    w[j] = 4.0 * M_PI * r * r * dr;
  }
  // trailing node only covers half a cell (profile is zero past r_max)
  w[g.m - 1] *= 0.5;
  return w;
}

double radial_integrate(const RadialProfile& p) {
  return (radial_weights(p.grid) * p.values).sum();
}

double radial_inner(const RadialProfile& a, const RadialProfile& b) {
  if (!(a.grid == b.grid)) throw DimensionError("radial profiles on different grids");
  return (radial_weights(a.grid) * a.values * b.values).sum();
}

double radial_norm_l2(const RadialProfile& p) { return std::sqrt(radial_inner(p, p)); }

double radial_interpolate(const RadialProfile& p, double r) {
  const int m = p.grid.m;
  const double dr = p.grid.dr();
  const double t = std::abs(r) / dr;
  const int j = static_cast<int>(std::floor(t));
  if (j >= m - 1) return 0.0;
  const double s = t - j;
  // even extension below the origin, zero decay boundary above r_max
  auto val = [&](int k) {
    if (k < 0) k = -k;
    return k < m ? p.values[k] : 0.0;
  };
  const double y0 = val(j - 1), y1 = val(j), y2 = val(j + 1), y3 = val(j + 2);
  const double a0 = -0.5 * y0 + 1.5 * y1 - 1.5 * y2 + 0.5 * y3;
  const double a1 = y0 - 2.5 * y1 + 2.0 * y2 - 0.5 * y3;
  const double a2 = -0.5 * y0 + 0.5 * y2;
  return ((a0 * s + a1) * s + a2) * s + y1;
}

}  // namespace sbp
