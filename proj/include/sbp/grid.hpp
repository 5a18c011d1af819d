#pragma once

#include <Eigen/Core>
#include <array>
#include <stdexcept>
#include <string>

namespace sbp {

using Array = Eigen::ArrayXd;
using Vec3 = Eigen::Vector3d;

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform periodic box [-L, L)^3 with n points per axis, spacing h = 2L/n.
struct GridSpec {
  int n = 0;
  double L = 0.0;

  GridSpec() = default;
  GridSpec(int n_, double L_) : n(n_), L(L_) {
    if (n < 8 || n % 2 != 0) throw DimensionError("grid: n must be even and >= 8");
    if (L <= 0.0) throw DimensionError("grid: L must be positive");
  }

  double h() const { return 2.0 * L / n; }
  long total() const { return static_cast<long>(n) * n * n; }
  /// Coordinate of index i along one axis, in [-L, L).
  double coord(int i) const { return -L + h() * i; }
  long index(int ix, int iy, int iz) const {
    return (static_cast<long>(ix) * n + iy) * n + iz;
  }
  bool operator==(const GridSpec& o) const { return n == o.n && L == o.L; }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

/// Real scalar field sampled on a GridSpec, row-major over (x,y,z), x slowest.
struct ScalarField {
  GridSpec grid;
  Array values;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g) : grid(g), values(Array::Zero(g.total())) {}
  ScalarField(const GridSpec& g, Array v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.total()) throw DimensionError("field: value count does not match grid");
  }

  double& at(int ix, int iy, int iz) { return values[grid.index(ix, iy, iz)]; }
  double at(int ix, int iy, int iz) const { return values[grid.index(ix, iy, iz)]; }
};

void require_same_grid(const ScalarField& a, const ScalarField& b);

/// Midpoint-rule integral h^3 * sum(values).
double integrate(const ScalarField& u);
/// h^3-weighted L2 inner product.
double inner(const ScalarField& a, const ScalarField& b);
double norm_l2(const ScalarField& u);
/// (h^3 sum |u|^p)^(1/p).
double norm_lp(const ScalarField& u, double p);

bool all_finite(const ScalarField& u);

/// Circular shift by whole grid cells (sx,sy,sz).
ScalarField shift(const ScalarField& u, int sx, int sy, int sz);

/// exp(-a |x - x0|^2) sampled on the grid.
ScalarField gaussian_field(const GridSpec& g, double a = 1.0, const Vec3& x0 = Vec3::Zero(),
                           double amplitude = 1.0);

/// Evaluate an arbitrary function of position on the grid.
template <class F>
ScalarField sample_field(const GridSpec& g, F&& f) {
  ScalarField u(g);
  for (int ix = 0; ix < g.n; ++ix)
    for (int iy = 0; iy < g.n; ++iy)
      for (int iz = 0; iz < g.n; ++iz)
        u.at(ix, iy, iz) = f(g.coord(ix), g.coord(iy), g.coord(iz));
  return u;
}

/// Trilinear interpolation with periodic wrap.
double interpolate(const ScalarField& u, const Vec3& x);

/// 1D radial grid: m nodes at r_j = j * r_max / m, j = 0..m-1.
struct RadialGrid {
  int m = 0;
  double r_max = 0.0;

  RadialGrid() = default;
  RadialGrid(int m_, double r_max_) : m(m_), r_max(r_max_) {
    if (m < 16) throw DimensionError("radial grid: m too small");
    if (r_max <= 0.0) throw DimensionError("radial grid: r_max must be positive");
  }
  double dr() const { return r_max / m; }
  double r(int j) const { return dr() * j; }
  bool operator==(const RadialGrid& o) const { return m == o.m && r_max == o.r_max; }
};

struct RadialProfile {
  RadialGrid grid;
  Array values;

  RadialProfile() = default;
  explicit RadialProfile(const RadialGrid& g) : grid(g), values(Array::Zero(g.m)) {}
  RadialProfile(const RadialGrid& g, Array v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.m) throw DimensionError("radial profile: value count mismatch");
  }
};

/// Trapezoid volume weights 4*pi*r^2*dr; the origin node carries the exact
/// volume of its half cell so the induced metric is nondegenerate.
Array radial_weights(const RadialGrid& g);

/// Integral of p against the 4*pi*r^2 volume element.
double radial_integrate(const RadialProfile& p);
double radial_inner(const RadialProfile& a, const RadialProfile& b);
double radial_norm_l2(const RadialProfile& p);

/// Cubic (Catmull-Rom) interpolation of the profile at radius r;
/// zero beyond r_max, even extension at the origin.
double radial_interpolate(const RadialProfile& p, double r);

}  // namespace sbp
