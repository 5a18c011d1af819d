#include "sbp/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <vector>

namespace sbp {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct SpectralWorkspace::Impl {
  int n = 0;
  long nreal = 0, ncplx = 0;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;
  std::vector<double> ksq_axis;  // squared wavenumber per axis index
  mutable std::mutex run;

  ~Impl() {
    std::lock_guard<std::mutex> lk(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (real) fftw_free(real);
    if (cplx) fftw_free(cplx);
  }
};

SpectralWorkspace::SpectralWorkspace(const GridSpec& g) : grid_(g), impl_(new Impl) {
  const int n = g.n;
  impl_->n = n;
  impl_->nreal = static_cast<long>(n) * n * n;
  impl_->ncplx = static_cast<long>(n) * n * (n / 2 + 1);
  impl_->real = fftw_alloc_real(impl_->nreal);
  impl_->cplx = fftw_alloc_complex(impl_->ncplx);
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    impl_->fwd = fftw_plan_dft_r2c_3d(n, n, n, impl_->real, impl_->cplx, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_c2r_3d(n, n, n, impl_->cplx, impl_->real, FFTW_ESTIMATE);
  }
  impl_->ksq_axis.resize(n);
  for (int i = 0; i < n; ++i) {
    const int m = (i <= n / 2) ? i : i - n;
    const double k = M_PI * m / g.L;
    impl_->ksq_axis[i] = k * k;
  }
}

SpectralWorkspace::~SpectralWorkspace() = default;

ScalarField SpectralWorkspace::neg_laplacian(const ScalarField& u) const {
  if (u.grid != grid_) throw DimensionError("workspace grid mismatch");
  auto& im = *impl_;
  std::lock_guard<std::mutex> lk(im.run);
  const int n = im.n, nzh = n / 2 + 1;
  for (long i = 0; i < im.nreal; ++i) im.real[i] = u.values[i];
  fftw_execute(im.fwd);
  const double scale = 1.0 / im.nreal;
  long idx = 0;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) {
      const double kxy = im.ksq_axis[ix] + im.ksq_axis[iy];
      for (int iz = 0; iz < nzh; ++iz, ++idx) {
        const double mult = (kxy + im.ksq_axis[iz]) * scale;
        im.cplx[idx][0] *= mult;
        im.cplx[idx][1] *= mult;
      }
    }
  fftw_execute(im.bwd);
  ScalarField out(grid_);
  for (long i = 0; i < im.nreal; ++i) out.values[i] = im.real[i];
  return out;
}

double SpectralWorkspace::gradient_sq_integral(const ScalarField& u) const {
  if (u.grid != grid_) throw DimensionError("workspace grid mismatch");
  auto& im = *impl_;
  std::lock_guard<std::mutex> lk(im.run);
  const int n = im.n, nzh = n / 2 + 1;
  for (long i = 0; i < im.nreal; ++i) im.real[i] = u.values[i];
  fftw_execute(im.fwd);
  // Parseval: h^3 sum u (-Lap u) = h^3/N sum_k |k|^2 |u_k|^2.
  double acc = 0.0;
  long idx = 0;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) {
      const double kxy = im.ksq_axis[ix] + im.ksq_axis[iy];
      for (int iz = 0; iz < nzh; ++iz, ++idx) {
        const double mag2 = im.cplx[idx][0] * im.cplx[idx][0] + im.cplx[idx][1] * im.cplx[idx][1];
        const double w = (iz == 0 || iz == n / 2) ? 1.0 : 2.0;  // r2c stores half the z modes
        acc += w * (kxy + im.ksq_axis[iz]) * mag2;
      }
    }
  const double h = grid_.h();
  return acc * h * h * h / im.nreal;
}

ScalarField SpectralWorkspace::inverse_helmholtz(const ScalarField& u, double sigma) const {
  if (u.grid != grid_) throw DimensionError("workspace grid mismatch");
  if (sigma <= 0.0) throw DegenerateInput("inverse_helmholtz: sigma must be positive");
  auto& im = *impl_;
  std::lock_guard<std::mutex> lk(im.run);
  const int n = im.n, nzh = n / 2 + 1;
  for (long i = 0; i < im.nreal; ++i) im.real[i] = u.values[i];
  fftw_execute(im.fwd);
  const double scale = 1.0 / im.nreal;
  long idx = 0;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) {
      const double kxy = im.ksq_axis[ix] + im.ksq_axis[iy];
      for (int iz = 0; iz < nzh; ++iz, ++idx) {
        const double mult = scale / (kxy + im.ksq_axis[iz] + sigma);
        im.cplx[idx][0] *= mult;
        im.cplx[idx][1] *= mult;
      }
    }
  fftw_execute(im.bwd);
  ScalarField out(grid_);
  for (long i = 0; i < im.nreal; ++i) out.values[i] = im.real[i];
  return out;
}

struct FreeConvolution::Impl {
  int n = 0, np = 0;  // original and padded (2n) sizes
  long nreal = 0, ncplx = 0;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  std::vector<double> khat_re, khat_im;
  fftw_plan fwd = nullptr, bwd = nullptr;
  mutable std::mutex run;

  ~Impl() {
    std::lock_guard<std::mutex> lk(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (real) fftw_free(real);
    if (cplx) fftw_free(cplx);
  }
};

FreeConvolution::FreeConvolution(const GridSpec& g, double (*kernel)(double))
    : grid_(g), impl_(new Impl) {
  const int n = g.n, np = 2 * n;
  const double h = g.h();
  auto& im = *impl_;
  im.n = n;
  im.np = np;
  im.nreal = static_cast<long>(np) * np * np;
  im.ncplx = static_cast<long>(np) * np * (np / 2 + 1);
  im.real = fftw_alloc_real(im.nreal);
  im.cplx = fftw_alloc_complex(im.ncplx);
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    im.fwd = fftw_plan_dft_r2c_3d(np, np, np, im.real, im.cplx, FFTW_ESTIMATE);
    im.bwd = fftw_plan_dft_c2r_3d(np, np, np, im.cplx, im.real, FFTW_ESTIMATE);
  }
  // Kernel sampled at signed cell distances; index np/2 is never reached by a
  // difference of in-box indices, its value is immaterial.
  std::vector<double> saxis(np);
  for (int i = 0; i < np; ++i) saxis[i] = h * ((i < n) ? i : i - np);
  long idx = 0;
  for (int ix = 0; ix < np; ++ix)
    for (int iy = 0; iy < np; ++iy)
      for (int iz = 0; iz < np; ++iz, ++idx) {
        const double r = std::sqrt(saxis[ix] * saxis[ix] + saxis[iy] * saxis[iy] + saxis[iz] * saxis[iz]);
        im.real[idx] = kernel(r);
      }
  fftw_execute(im.fwd);
  im.khat_re.resize(im.ncplx);
  im.khat_im.resize(im.ncplx);
  for (long i = 0; i < im.ncplx; ++i) {
    im.khat_re[i] = im.cplx[i][0];
    im.khat_im[i] = im.cplx[i][1];
  }
}

FreeConvolution::~FreeConvolution() = default;

ScalarField FreeConvolution::apply(const ScalarField& src) const {
  if (src.grid != grid_) throw DimensionError("convolution grid mismatch");
  auto& im = *impl_;
  std::lock_guard<std::mutex> lk(im.run);
  const int n = im.n, np = im.np;
  std::fill(im.real, im.real + im.nreal, 0.0);
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) {
      const long dst = (static_cast<long>(ix) * np + iy) * np;
      const long sidx = src.grid.index(ix, iy, 0);
      for (int iz = 0; iz < n; ++iz) im.real[dst + iz] = src.values[sidx + iz];
    }
  fftw_execute(im.fwd);
  const double h = grid_.h();
  const double scale = h * h * h / im.nreal;
  for (long i = 0; i < im.ncplx; ++i) {
    const double re = im.cplx[i][0], imv = im.cplx[i][1];
    im.cplx[i][0] = (re * im.khat_re[i] - imv * im.khat_im[i]) * scale;
    im.cplx[i][1] = (re * im.khat_im[i] + imv * im.khat_re[i]) * scale;
  }
  fftw_execute(im.bwd);
  ScalarField out(grid_);
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) {
      const long srcp = (static_cast<long>(ix) * np + iy) * np;
      const long didx = out.grid.index(ix, iy, 0);
      for (int iz = 0; iz < n; ++iz) out.values[didx + iz] = im.real[srcp + iz];
    }
  return out;
}

void FreeConvolution::corrupt_kernel(double amount) {
  auto& im = *impl_;
  for (long i = 0; i < im.ncplx; i += 7) {
    im.khat_re[i] *= (1.0 + amount);
    im.khat_im[i] *= (1.0 + amount);
  }
}

}  // namespace sbp
