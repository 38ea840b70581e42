#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "interplab/banach.hpp"
#include "interplab/rng.hpp"
#include "interplab/strip.hpp"

using namespace interplab;
using std::complex;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

GridFunction gaussian_grid(double T, int m, int n) {
  GridFunction g = GridFunction::symmetric(T, m, n);
  for (int k = 0; k < g.m(); ++k)
    for (int c = 0; c < n; ++c) g.values(k, c) = std::exp(-0.5 * g.t(k) * g.t(k));
  return g;
}

double grid_l2(const GridFunction& g) {
  return std::sqrt(g.h * g.values.cwiseAbs2().sum());
}

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("dual grid geometry and involution") {
  GridFunction g = GridFunction::symmetric(20.0, 2048, 1);
  GridFunction d = fourier_dual_grid(g);
  CHECK(d.m() == 2048);
  CHECK(d.t0 == doctest::Approx(-M_PI / g.h).epsilon(1e-15));
  CHECK(d.h == doctest::Approx(kTwoPi / (2048 * g.h)).epsilon(1e-15));
  // half-open symmetric window: the dual of the dual is the original grid
  GridFunction dd = fourier_dual_grid(d);
  CHECK(dd.t0 == doctest::Approx(g.t0).epsilon(1e-12));
  CHECK(dd.h == doctest::Approx(g.h).epsilon(1e-12));

  CHECK_THROWS_AS(fourier_forward(GridFunction{}), std::invalid_argument);
}

TEST_CASE("forward transform of the Gaussian matches the closed form") {
  GridFunction g = gaussian_grid(20.0, 2048, 1);
  GridFunction f = fourier_forward(g);
  double worst = 0.0;
  for (int l = 0; l < f.m(); ++l) {
    const double want = std::sqrt(kTwoPi) * std::exp(-0.5 * f.t(l) * f.t(l));
    worst = std::max(worst, std::abs(f.values(l, 0) - complex<double>(want)));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("forward transform of the indicator matches 2 sin(xi)/xi up to O(h)") {
  GridFunction g = GridFunction::symmetric(8.0, 1024, 1);
  for (int k = 0; k < g.m(); ++k)
    if (g.t(k) >= -1.0 && g.t(k) < 1.0) g.values(k, 0) = 1.0;
  GridFunction f = fourier_forward(g);
  double worst = 0.0;
  for (int l = 0; l < f.m(); ++l) {
    const double xi = f.t(l);
    if (std::abs(xi) > 20.0) continue;
    const double want = std::abs(xi) < 1e-12 ? 2.0 : 2.0 * std::sin(xi) / xi;
    worst = std::max(worst, std::abs(f.values(l, 0) - complex<double>(want)));
  }
  CHECK(worst <= 3.0 * g.h);
}

TEST_CASE("inversion carries the 2 pi factor") {
  GridFunction g = gaussian_grid(20.0, 2048, 2);
  g.values.col(1) *= complex<double>(0.3, -1.1);
  GridFunction back = fourier_inverse(fourier_forward(g));
  const double scale = kTwoPi * g.values.cwiseAbs().maxCoeff();
  CHECK(max_abs_diff(back.values, kTwoPi * g.values) <= 1e-8 * scale);
}

TEST_CASE("Plancherel with the 2 pi convention") {
  GridFunction g = gaussian_grid(20.0, 2048, 1);
  CHECK(grid_l2(fourier_forward(g)) ==
        doctest::Approx(std::sqrt(kTwoPi) * grid_l2(g)).epsilon(1e-8));

  // band-concentrated two-humped complex profile
  GridFunction b = GridFunction::symmetric(25.0, 1500, 1);
  for (int k = 0; k < b.m(); ++k) {
    const double t = b.t(k);
    b.values(k, 0) = std::exp(-0.5 * (t - 2.0) * (t - 2.0)) +
                     complex<double>(0.0, 0.7) * std::exp(-0.8 * (t + 3.0) * (t + 3.0));
  }
  CHECK(grid_l2(fourier_forward(b)) ==
        doctest::Approx(std::sqrt(kTwoPi) * grid_l2(b)).epsilon(1e-8));
}

TEST_CASE("fast path and direct path agree to 1e-12") {
  Rng rng(71);
  GridFunction g;
  g.t0 = 0.37;
  g.h = 0.11;
  g.values = Eigen::MatrixXcd(257, 3);  // odd length exercises the generic FFT
  for (int k = 0; k < g.m(); ++k)
    for (int c = 0; c < 3; ++c) g.values(k, c) = rng.cnormal();

  for (int sign = 0; sign < 2; ++sign) {
    GridFunction fast = sign ? fourier_inverse(g, FourierPath::fast)
                             : fourier_forward(g, FourierPath::fast);
    GridFunction direct = sign ? fourier_inverse(g, FourierPath::direct)
                               : fourier_forward(g, FourierPath::direct);
    const double scale = fast.values.cwiseAbs().maxCoeff();
    CHECK(max_abs_diff(fast.values, direct.values) <= 1e-12 * scale);
  }

  GridFunction gauss = gaussian_grid(20.0, 1024, 1);
  GridFunction fast = fourier_forward(gauss, FourierPath::fast);
  GridFunction direct = fourier_forward(gauss, FourierPath::direct);
  CHECK(max_abs_diff(fast.values, direct.values) <=
        1e-12 * fast.values.cwiseAbs().maxCoeff());
}

TEST_CASE("strip_eval: Gaussian generator closed forms and domain guard") {
  StripFunction sf;
  sf.theta = 0.4;
  sf.generator = gaussian_grid(20.0, 2048, 2);
  const VectorXcd x = (VectorXcd(2) << complex<double>(1.0, 0.0),
                       complex<double>(2.0, -1.0)).finished();
  for (int c = 0; c < 2; ++c) sf.generator.values.col(c) *= x[c];

  // f(theta) = integral of the generator = sqrt(2 pi) x
  const VectorXcd at_theta = strip_eval(sf, complex<double>(sf.theta, 0.0));
  CHECK((at_theta - std::sqrt(kTwoPi) * x).cwiseAbs().maxCoeff() <= 1e-8);

  // on the center line the trace is the inverse transform of the generator
  GridFunction inv = fourier_inverse(sf.generator);
  const int node = 600;
  const VectorXcd via_eval = strip_eval(sf, complex<double>(sf.theta, inv.t(node)));
  CHECK((via_eval - inv.values.row(node).transpose()).cwiseAbs().maxCoeff() <=
        1e-10 * inv.values.cwiseAbs().maxCoeff());

  // f(theta) = (1/2pi) integral of the centerline boundary transform,
  // with the transform taken through sampled traces
  GridFunction fhat = boundary_fourier(sf, sf.theta, BoundaryMode::direct);
  const VectorXcd mean_of_hat = fhat.integral() / kTwoPi;
  CHECK((mean_of_hat - at_theta).cwiseAbs().maxCoeff() <= 1e-8);

  CHECK_THROWS_AS(strip_eval(sf, complex<double>(-0.1, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(strip_eval(sf, complex<double>(1.1, 2.0)), std::invalid_argument);
}

TEST_CASE("strip_eval is analytic: Cauchy-Riemann finite differences") {
  StripFunction sf;
  sf.theta = 0.55;
  sf.generator = gaussian_grid(15.0, 1024, 1);
  const double d = 1e-5;
  for (complex<double> z : {complex<double>(0.3, 0.7), complex<double>(0.62, -0.35)}) {
    const complex<double> dx =
        (strip_eval(sf, z + d)[0] - strip_eval(sf, z - d)[0]) / (2.0 * d);
    const complex<double> dy = (strip_eval(sf, z + complex<double>(0.0, d))[0] -
                                strip_eval(sf, z - complex<double>(0.0, d))[0]) /
                               complex<double>(0.0, 2.0 * d);
    CHECK(std::abs(dx - dy) <= 1e-6 * (1.0 + std::abs(dx)));
  }
}

TEST_CASE("boundary_fourier: algebraic weights and two-path agreement") {
  StripFunction sf;
  sf.theta = 0.5;
  sf.generator = gaussian_grid(20.0, 2048, 1);

  // s = theta: the weight vanishes identically
  GridFunction at_theta = boundary_fourier(sf, sf.theta, BoundaryMode::algebraic);
  CHECK(max_abs_diff(at_theta.values, kTwoPi * sf.generator.values) == 0.0);

  // boundary lines carry the exact exponential weight
  for (int j = 0; j < 2; ++j) {
    GridFunction fj = boundary_fourier(sf, double(j), BoundaryMode::algebraic);
    for (int k : {0, 512, 1024, 1500, 2047}) {
      const complex<double> want =
          kTwoPi * std::exp(sf.generator.t(k) * (j - sf.theta)) * sf.generator.values(k, 0);
      CHECK(std::abs(fj.values(k, 0) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
  }

  // sampled-trace route agrees with the algebraic route on the energetic
  // support, relative to the transform scale there
  const double gmax = sf.generator.values.cwiseAbs().maxCoeff();
  for (double s : {0.3, 0.0, 1.0}) {
    GridFunction alg = boundary_fourier(sf, s, BoundaryMode::algebraic);
    GridFunction dir = boundary_fourier(sf, s, BoundaryMode::direct);
    CHECK(dir.t0 == alg.t0);
    CHECK(dir.h == alg.h);
    double worst = 0.0, scale = 0.0;
    for (int k = 0; k < alg.m(); ++k) {
      if (std::abs(sf.generator.values(k, 0)) < 1e-9 * gmax) continue;
      worst = std::max(worst, std::abs(dir.values(k, 0) - alg.values(k, 0)));
      scale = std::max(scale, std::abs(alg.values(k, 0)));
    }
    CHECK(worst <= 1e-6 * scale);
  }

  CHECK_THROWS_AS(boundary_fourier(sf, -0.2), std::invalid_argument);
  CHECK_THROWS_AS(boundary_fourier(sf, 1.7), std::invalid_argument);
}

TEST_CASE("boundary_fourier direct mode flags a window too narrow for the decay") {
  // a jump generator on a coarse grid: the trace decays like 1/t and carries
  // visible mass at the window edge pi/h
  StripFunction sf;
  sf.theta = 0.5;
  sf.generator = GridFunction::symmetric(8.0, 64, 1);
  for (int k = 0; k < 64; ++k)
    if (std::abs(sf.generator.t(k)) < 1.0) sf.generator.values(k, 0) = 1.0;
  CHECK_THROWS_AS(boundary_fourier(sf, 0.5, BoundaryMode::direct), AccuracyError);
}

TEST_CASE("vertical invariance of the reweighted boundary transforms") {
  StripFunction sf;
  sf.theta = 0.35;
  sf.generator = gaussian_grid(18.0, 1024, 2);
  sf.generator.values.col(1) *= complex<double>(-0.4, 0.9);
  const double scale = kTwoPi * sf.generator.values.cwiseAbs().maxCoeff();

  CHECK(vertical_invariance_check(sf, 0.4, 0.4) == 0.0);
  const double dev = vertical_invariance_check(sf, 0.2, 0.8);
  CHECK(dev <= 1e-6 * scale);

  // exact homogeneity under a power-of-two scaling of the generator
  StripFunction sf4 = sf;
  sf4.generator.values *= 4.0;
  CHECK(vertical_invariance_check(sf4, 0.2, 0.8) == doctest::Approx(4.0 * dev).epsilon(1e-12));

  CHECK_THROWS_AS(vertical_invariance_check(sf, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("three lines bound on sampled lines") {
  // constant function: equality up to float powers
  GridFunction c0 = GridFunction::symmetric(5.0, 100, 1);
  c0.values.setConstant(complex<double>(1.2, -0.5));
  ThreeLinesReport eq = three_lines_check(c0, c0, c0, 0.37);
  CHECK(!eq.violation);
  CHECK(eq.sup_theta == doctest::Approx(eq.bound).epsilon(1e-12));

  // f(z) = e^{z^2}: |f(s+it)| = e^{s^2 - t^2}, sup over each line e^{s^2}
  const double theta = 0.6;
  GridFunction l0 = GridFunction::symmetric(5.0, 100, 1);
  GridFunction lt = GridFunction::symmetric(5.0, 100, 1);
  GridFunction l1 = GridFunction::symmetric(5.0, 100, 1);
  for (int k = 0; k < 100; ++k) {
    const double t = l0.t(k);
    l0.values(k, 0) = std::exp(complex<double>(0.0, t) * complex<double>(0.0, t));
    const complex<double> zt(theta, t), z1(1.0, t);
    lt.values(k, 0) = std::exp(zt * zt);
    l1.values(k, 0) = std::exp(z1 * z1);
  }
  ThreeLinesReport rep = three_lines_check(l0, lt, l1, theta);
  CHECK(!rep.violation);
  CHECK(rep.sup0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.sup1 == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(rep.sup_theta == doctest::Approx(std::exp(theta * theta)).epsilon(1e-12));
  CHECK(rep.sup_theta <= rep.bound);

  // inflating the middle line must trip the flag
  GridFunction bad = lt;
  bad.values *= 2.0;
  CHECK(three_lines_check(l0, bad, l1, theta).violation);

  // lines sampled from a generator-represented strip function pass
  StripFunction sf;
  sf.theta = theta;
  sf.generator = gaussian_grid(12.0, 512, 1);
  GridFunction s0 = GridFunction::symmetric(30.0, 240, 1);
  GridFunction st = GridFunction::symmetric(30.0, 240, 1);
  GridFunction s1 = GridFunction::symmetric(30.0, 240, 1);
  for (int k = 0; k < 240; ++k) {
    const double t = s0.t(k);
    s0.values(k, 0) = strip_eval(sf, complex<double>(0.0, t))[0];
    st.values(k, 0) = strip_eval(sf, complex<double>(theta, t))[0];
    s1.values(k, 0) = strip_eval(sf, complex<double>(1.0, t))[0];
  }
  CHECK(!three_lines_check(s0, st, s1, theta).violation);

  CHECK_THROWS_AS(three_lines_check(l0, lt, l1, 0.0), std::invalid_argument);
}

TEST_CASE("complex_norm_upper: bathtub value and scaled-mean identity") {
  BanachCouple couple{WeightedLrSpace::lr(1, 2.0), WeightedLrSpace::lr(1, 2.0)};
  InterpParams params;
  params.theta = 0.5;
  params.p0 = params.p1 = kInf;
  const VectorXcd one = VectorXcd::Ones(1);
  GridFunction grid = GridFunction::symmetric(60.0, 2400, 1);

  const double val = complex_norm_upper(couple, params, one, grid);
  CHECK(val >= kTwoPi * 0.25 * 0.98);
  CHECK(val <= kTwoPi * 0.25 * 1.02);

  // the bound is exactly 2 pi times the minimized mean value
  const double mean_val = minimize_mean_norm(couple, params, one, grid).value;
  CHECK(val == kTwoPi * mean_val);
}

TEST_CASE("complex_norm_upper: random couple, scaling, and interpolation-norm ratio") {
  Rng rng(29);
  VectorXd w0(2), w1(2);
  w0 << 1.3, 0.4;
  w1 << 0.7, 2.2;
  BanachCouple couple{WeightedLrSpace::weighted_lr(2.0, w0),
                      WeightedLrSpace::weighted_lr(kInf, w1)};
  InterpParams params;
  params.theta = 0.25;
  params.p0 = params.p1 = 2.0;
  VectorXcd x(2);
  x << complex<double>(0.9, -0.3), complex<double>(-1.4, 0.2);
  GridFunction grid = GridFunction::symmetric(120.0, 1200, 2);

  MeanMinimizeOptions opts;
  opts.max_iters = 3000;
  const double val = complex_norm_upper(couple, params, x, grid, opts);
  CHECK(val > 0.0);
  CHECK(std::isfinite(val));

  // exact degree-1 homogeneity for a power-of-two scaling
  const double val4 = complex_norm_upper(couple, params, VectorXcd(4.0 * x), grid, opts);
  CHECK(val4 == doctest::Approx(4.0 * val).epsilon(1e-9));

  // two-sided comparability with the K-functional route
  const double real_norm = real_interp_norm(couple, params, x);
  const double ratio = val / real_norm;
  CHECK(ratio > 0.01);
  CHECK(ratio < 100.0);
  MESSAGE("complex/real interpolation norm ratio: ", ratio);
}
