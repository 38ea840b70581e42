#include "interplab/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>

namespace interplab {

namespace {

// FFTW plan creation/destruction is not thread-safe (execution is)
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

// out_l = w * e^{i sign phase0_l} * sum_k a_k e^{i sign 2 pi k l / m} via FFTW,
// where the caller has already folded constant per-k phases into a_k
void fft_columns(const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out, int sign) {
  const int m = static_cast<int>(in.rows());
  fftw_complex* buf;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    buf = fftw_alloc_complex(static_cast<size_t>(m));
    plan = fftw_plan_dft_1d(m, buf, buf, sign, FFTW_ESTIMATE);
  }
  for (int j = 0; j < in.cols(); ++j) {
    for (int k = 0; k < m; ++k) {
      buf[k][0] = in(k, j).real();
      buf[k][1] = in(k, j).imag();
    }
    fftw_execute(plan);
    for (int l = 0; l < m; ++l) out(l, j) = {buf[l][0], buf[l][1]};
  }
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
    fftw_free(buf);
  }
}

GridFunction transform(const GridFunction& gf, int sign, FourierPath path) {
  gf.validate();
  const int m = gf.m();
  const int n = gf.n();
  GridFunction out = fourier_dual_grid(gf);

  if (path == FourierPath::direct) {
    for (int l = 0; l < m; ++l) {
      const double xi = out.t(l);
      for (int k = 0; k < m; ++k) {
        const std::complex<double> ph = std::polar(1.0, sign * gf.t(k) * xi);
        for (int j = 0; j < n; ++j) out.values(l, j) += gf.values(k, j) * ph;
      }
    }
    out.values *= gf.h;
    return out;
  }

  // t_k xi_l = t0 xi_l - sign-independent split:  with xi_l = xi0 + l dxi,
  // t_k = t0 + k h, and h dxi = 2 pi / m,
  //   e^{i s t_k xi_l} = e^{i s t0 xi_l} * (-1)^k * e^{i s 2 pi k l / m}
  // since h xi0 = -pi.  Fold (-1)^k into the input, FFT, then apply the
  // l-dependent phase.
  Eigen::MatrixXcd a = gf.values;
  for (int k = 1; k < m; k += 2) a.row(k) = -a.row(k);
  fft_columns(a, out.values, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  for (int l = 0; l < m; ++l)
    out.values.row(l) *= gf.h * std::polar(1.0, sign * gf.t0 * out.t(l));
  return out;
}

}  // namespace

GridFunction fourier_dual_grid(const GridFunction& gf) {
  gf.validate();
  GridFunction out;
  out.t0 = -M_PI / gf.h;
  out.h = 2.0 * M_PI / (gf.m() * gf.h);
  out.values = Eigen::MatrixXcd::Zero(gf.m(), gf.n());
  return out;
}

GridFunction fourier_forward(const GridFunction& gf, FourierPath path) {
  return transform(gf, -1, path);
}

GridFunction fourier_inverse(const GridFunction& gf, FourierPath path) {
  return transform(gf, +1, path);
}

}  // namespace interplab
