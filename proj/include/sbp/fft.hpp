#pragma once

#include "sbp/grid.hpp"

#include <complex>
#include <memory>

namespace sbp {

/// FFTW-backed spectral operators on a periodic GridSpec: Laplacian,
/// Dirichlet-energy integral, and inverse Helmholtz (-Lap + sigma)^{-1}.
/// Plans are created with FFTW_ESTIMATE so repeated runs are bit-identical.
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(const GridSpec& g);
  ~SpectralWorkspace();
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  const GridSpec& grid() const { return grid_; }

  /// -Lap u via the spectral multiplier |k|^2.
  ScalarField neg_laplacian(const ScalarField& u) const;
  /// Integral of |grad u|^2 = <u, -Lap u>, evaluated in Fourier space.
  double gradient_sq_integral(const ScalarField& u) const;
  /// (-Lap + sigma)^{-1} u, sigma > 0.
  ScalarField inverse_helmholtz(const ScalarField& u, double sigma) const;

 private:
  struct Impl;
  GridSpec grid_;
  std::unique_ptr<Impl> impl_;
};

/// Free-space convolution on a 2x zero-padded grid (Hockney method).
/// The kernel is sampled in real space at signed cell distances, so the
/// circular convolution on the padded grid equals the linear convolution
/// for every target point of the original box.
class FreeConvolution {
 public:
  /// kernel(r) must be finite at r = 0.
  FreeConvolution(const GridSpec& g, double (*kernel)(double));
  ~FreeConvolution();
  FreeConvolution(const FreeConvolution&) = delete;
  FreeConvolution& operator=(const FreeConvolution&) = delete;

  const GridSpec& grid() const { return grid_; }

  /// h^3 * sum_y kernel(|x-y|) src(y).
  ScalarField apply(const ScalarField& src) const;

  /// Test hook: multiplies the transformed kernel by (1 + amount) on a
  /// band of modes, used for fault injection in the verification suite.
  void corrupt_kernel(double amount);

 private:
  struct Impl;
  GridSpec grid_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sbp
