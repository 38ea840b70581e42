#include "interplab/stein.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <limits>
#include <vector>

#include "interplab/fourier.hpp"
#include "interplab/mean.hpp"
#include "interplab/parallel.hpp"
#include "interplab/rng.hpp"
#include "interplab/strip.hpp"

namespace interplab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

// plain L^p norm on the grid, fiber norm taken in X
double grid_lp_norm(const GridFunction& g, const WeightedLrSpace& X, double p) {
  if (p == kInf) {
    double best = 0.0;
    for (int k = 0; k < g.m(); ++k)
      best = std::max(best, space_norm(X, g.values.row(k).transpose()));
    return best;
  }
  double acc = 0.0;
  for (int k = 0; k < g.m(); ++k)
    acc += std::pow(space_norm(X, g.values.row(k).transpose()), p);
  return std::pow(g.h * acc, 1.0 / p);
}

// interpolation parameters of the target side: the q-exponents move into
// the p-slots (real_interp_norm reads params.p())
InterpParams target_params(const InterpParams& params) {
  InterpParams py = params;
  py.p0 = (params.q0 == 0.0) ? params.p0 : params.q0;
  py.p1 = (params.q1 == 0.0) ? params.p1 : params.q1;
  py.q0 = py.q1 = 0.0;
  return py;
}

Eigen::MatrixXcd unflatten(const Eigen::RowVectorXcd& row, int rows, int cols) {
  Eigen::MatrixXcd M(rows, cols);
  for (int a = 0; a < rows; ++a)
    for (int b = 0; b < cols; ++b) M(a, b) = row[a * cols + b];
  return M;
}

// local coordinate ascent on a homogeneous ratio; keeps iterates on the
// max-magnitude unit sphere.  budget (if given) limits ratio evaluations.
template <typename F>
void coordinate_ascent(const F& ratio, Eigen::VectorXcd& x, double& best, int max_rounds,
                       int* budget) {
  const std::complex<double> dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  double mx = x.cwiseAbs().maxCoeff();
  if (mx > 0.0) x /= mx;
  double delta = 0.25;
  for (int round = 0; round < max_rounds && delta >= 1e-3; ++round) {
    bool improved = false;
    for (int i = 0; i < x.size(); ++i) {
      for (const auto& d : dirs) {
        if (budget && *budget <= 0) return;
        Eigen::VectorXcd y = x;
        y[i] += delta * d;
        const double my = y.cwiseAbs().maxCoeff();
        if (my == 0.0) continue;
        y /= my;
        if (budget) --*budget;
        const double r = ratio(y);
        if (r > best) {
          best = r;
          x = y;
          improved = true;
        }
      }
    }
    if (!improved) delta *= 0.5;
  }
}

// Boundary transform consistency of h(z) = (M0/M1)^{z-theta} T(z) f(z) for
// weighted families: h has an explicit generator (each column of the
// minimizing generator scaled by w_theta and shifted by (a_i + c) / h
// cells), so its algebraic boundary transform must match the discrete
// transform of the directly sampled trace.  Returns NaN when the shifts do
// not land on grid nodes (the identity needs the exact generator form).
double boundary_identity_dev(const OperatorFamily& fam, const BanachCouple& coupleX,
                             const InterpParams& params, const Eigen::VectorXcd& x,
                             double M0, double M1, const SteinOptions& opts) {
  if (fam.kind != FamilyKind::weighted_multiplier) return kNaN;
  const int n = coupleX.dim();
  const GridFunction grid =
      opts.grid.m() > 0 ? opts.grid : default_mean_grid(params, n);
  if (grid.n() != n) return kNaN;
  if (std::abs(grid.t0 + 0.5 * grid.m() * grid.h) > 1e-9 * grid.h) return kNaN;

  const double theta = params.theta;
  const double c = std::log(M0 / M1);
  std::vector<int> shift(n);
  int margin = 1;
  for (int i = 0; i < n; ++i) {
    const double s = (std::log(fam.w1[i] / fam.w0[i]) + c) / grid.h;
    const long k = std::lround(s);
    if (std::abs(s - static_cast<double>(k)) > 1e-9 * (1.0 + std::abs(s))) return kNaN;
    shift[i] = static_cast<int>(k);
    margin = std::max(margin, static_cast<int>(std::abs(k)));
  }

  MeanMinimizeOptions mo;
  mo.max_iters = opts.minimize_iters;
  const MeanMinimizeResult res = minimize_mean_norm(coupleX, params, x, grid, mo);
  const GridFunction& g = res.rep.gf;

  // zero-symmetric extension holding both f and the shifted h generator
  GridFunction ge;
  ge.h = g.h;
  ge.t0 = g.t0 - margin * g.h;
  const int me = g.m() + 2 * margin;
  ge.values = Eigen::MatrixXcd::Zero(me, n);
  ge.values.block(margin, 0, g.m(), n) = g.values;

  GridFunction gh = GridFunction::like(ge);
  for (int i = 0; i < n; ++i) {
    const double wtheta =
        std::pow(fam.w0[i], 1.0 - theta) * std::pow(fam.w1[i], theta);
    for (int k = 0; k < g.m(); ++k)
      gh.values(k + margin + shift[i], i) = wtheta * g.values(k, i);
  }

  const StripFunction sf_f{theta, ge};
  const StripFunction sf_h{theta, gh};

  double worst = 0.0;
  for (int j = 0; j <= 1; ++j) {
    const GridFunction rhs = boundary_fourier(sf_h, j, BoundaryMode::algebraic);

    GridFunction tr;
    tr.h = kTwoPi / (me * ge.h);
    tr.t0 = -0.5 * me * tr.h;
    tr.values.resize(me, n);
    for (int k = 0; k < me; ++k) {
      const std::complex<double> z(j, tr.t(k));
      const Eigen::VectorXcd fz = strip_eval(sf_f, z);
      const Eigen::MatrixXcd T = family_eval(fam, z);
      tr.values.row(k) = (std::exp(c * (z - theta)) * (T * fz)).transpose();
    }
    const GridFunction lhs = fourier_forward(tr);

    double dev = 0.0, scale = 0.0;
    for (int k = 0; k < me; ++k) {
      dev = std::max(dev, (lhs.values.row(k) - rhs.values.row(k)).cwiseAbs().maxCoeff());
      scale = std::max(scale, rhs.values.row(k).cwiseAbs().maxCoeff());
    }
    worst = std::max(worst, dev / std::max(scale, 1e-300));
  }
  return worst;
}

}  // namespace

GridFunction multiplier_apply(const OperatorFamily& fam, int j, const GridFunction& gf) {
  fam.validate();
  gf.validate();
  if (j != 0 && j != 1)
    throw std::invalid_argument("multiplier_apply: boundary index must be 0 or 1");
  if (gf.n() != fam.cols())
    throw std::invalid_argument("multiplier_apply: grid columns do not match the family");

  const GridFunction ghat = fourier_forward(gf);
  GridFunction ohat;
  ohat.t0 = ghat.t0;
  ohat.h = ghat.h;
  ohat.values.resize(ghat.m(), fam.rows());
  for (int l = 0; l < ghat.m(); ++l) {
    const Eigen::MatrixXcd T = family_eval(fam, std::complex<double>(j, ghat.t(l)));
    ohat.values.row(l) = (T * ghat.values.row(l).transpose()).transpose();
  }
  GridFunction out = fourier_inverse(ohat);
  out.values /= kTwoPi;
  return out;
}

MultiplierBounds multiplier_norm_bounds(const OperatorFamily& fam, int j,
                                        const WeightedLrSpace& Xj,
                                        const WeightedLrSpace& Yj, double pj, double qj,
                                        const MultiplierBoundsOptions& opts) {
  fam.validate();
  Xj.validate();
  Yj.validate();
  if (j != 0 && j != 1)
    throw std::invalid_argument("multiplier_norm_bounds: boundary index must be 0 or 1");
  if (Xj.dim() != fam.cols() || Yj.dim() != fam.rows())
    throw std::invalid_argument("multiplier_norm_bounds: space dims do not match the family");
  if (!(pj >= 1.0) || !(qj >= 1.0))
    throw std::invalid_argument("multiplier_norm_bounds: exponents must be in [1, inf]");
  if (pj != qj)
    throw UnsupportedError(
        "multiplier_norm_bounds: the Young route needs matching boundary exponents; "
        "supply the bound directly for p != q");
  if (!(opts.window > 0.0) || opts.symbol_samples < 64 || opts.probes < 4 ||
      opts.probe_samples < 64 || !(opts.probe_window > 0.0))
    throw std::invalid_argument("multiplier_norm_bounds: invalid options");

  const int ms = opts.symbol_samples;
  const double W = opts.window;
  const double hxi = 2.0 * W / ms;

  std::vector<Eigen::MatrixXcd> symv(ms);
  std::vector<double> symn(ms);
  for (int k = 0; k < ms; ++k) {
    symv[k] = family_eval(fam, std::complex<double>(j, -W + k * hxi));
    symn[k] = matrix_operator_norm_upper(Xj, Yj, symv[k]);
  }

  MultiplierBounds out;
  out.kernel_l1 = kNaN;
  out.chain_bound = kNaN;

  bool have_upper = false;

  // exact route: weighted family between matching l^p fibers is a
  // componentwise weighted translation, an isometry per component
  if (fam.kind == FamilyKind::weighted_multiplier && Xj.r == pj && Yj.r == pj) {
    double best = 0.0;
    for (int i = 0; i < Xj.dim(); ++i) {
      const double wj = std::pow(fam.w0[i], 1.0 - j) * std::pow(fam.w1[i], j);
      best = std::max(best, Yj.weights[i] * wj / Xj.weights[i]);
    }
    out.upper = best;
    have_upper = true;
  }

  // constant symbols act pointwise in t; the matrix norm bound transfers
  if (!have_upper) {
    double dev = 0.0, scale = 0.0;
    for (int k = 0; k < ms; ++k) {
      dev = std::max(dev, (symv[k] - symv[0]).cwiseAbs().maxCoeff());
      scale = std::max(scale, symv[k].cwiseAbs().maxCoeff());
    }
    if (dev <= 1e-12 * scale) {
      out.upper = matrix_operator_norm_upper(Xj, Yj, symv[0]);
      have_upper = true;
    }
  }

  if (!have_upper) {
    // Young route: upper = L^1 norm of the kernel.  The scan window must
    // carry essentially all of the symbol mass.
    const int band = std::max(1, ms / 10);
    double tail = 0.0, total = 0.0;
    for (int k = 0; k < ms; ++k) {
      total += symn[k];
      if (k < band || k >= ms - band) tail += symn[k];
    }
    if (!(total > 0.0) || tail > opts.tail_tol * total)
      throw AccuracyError(
          "multiplier_norm_bounds: symbol is not integrable on the scan window; "
          "resolvent-type families need the Gaussian damping e^{(z-theta)^2} for "
          "an L^1 kernel");

    const int rY = fam.rows(), cX = fam.cols();
    GridFunction F;
    F.t0 = -W;
    F.h = hxi;
    F.values.resize(ms, rY * cX);
    for (int k = 0; k < ms; ++k)
      for (int a = 0; a < rY; ++a)
        for (int b = 0; b < cX; ++b) F.values(k, a * cX + b) = symv[k](a, b);
    GridFunction K = fourier_inverse(F);
    K.values /= kTwoPi;
    double l1 = 0.0;
    for (int l = 0; l < K.m(); ++l)
      l1 += matrix_operator_norm_upper(Xj, Yj, unflatten(K.values.row(l), rY, cX));
    out.kernel_l1 = K.h * l1;

    // analytic certificate (1/2)(||T||_1 + ||T''||_1) with Richardson
    // second differences at step 1e-4
    const double fd = 1e-4;
    double t_int = 0.0, tdd_int = 0.0;
    for (int k = 0; k < ms; ++k) {
      const double xi = -W + k * hxi;
      // materialized return type: the expression would dangle on the
      // family_eval temporaries
      auto second = [&](double hh) -> Eigen::MatrixXcd {
        return (family_eval(fam, std::complex<double>(j, xi + hh)) - 2.0 * symv[k] +
                family_eval(fam, std::complex<double>(j, xi - hh))) /
               (hh * hh);
      };
      const Eigen::MatrixXcd tdd = (4.0 * second(0.5 * fd) - second(fd)) / 3.0;
      t_int += symn[k];
      tdd_int += matrix_operator_norm_upper(Xj, Yj, tdd);
    }
    out.chain_bound = 0.5 * (hxi * t_int + hxi * tdd_int);
    if (out.kernel_l1 > out.chain_bound * (1.0 + 1e-3))
      throw AccuracyError(
          "multiplier_norm_bounds: kernel integral exceeds its analytic certificate");
    out.upper = out.kernel_l1;
  }

  // lower bound: grid ratios over modulated Gaussian probes
  int argmax = 0;
  for (int k = 1; k < ms; ++k)
    if (symn[k] > symn[argmax]) argmax = k;
  const double xistar = -W + argmax * hxi;

  const int nX = Xj.dim();
  GridFunction probe = GridFunction::symmetric(opts.probe_window, opts.probe_samples, nX);
  Rng rng(opts.seed);
  std::vector<Eigen::VectorXcd> dirs;
  for (int i = 0; i < nX && static_cast<int>(dirs.size()) < opts.probes; ++i)
    dirs.push_back(Eigen::VectorXcd::Unit(nX, i));
  while (static_cast<int>(dirs.size()) < opts.probes) {
    Eigen::VectorXcd v(nX);
    for (int i = 0; i < nX; ++i) v[i] = rng.cnormal();
    dirs.push_back(v);
  }

  double lower = 0.0;
  for (const auto& v : dirs) {
    for (double s : {1.0, 4.0}) {
      for (int k = 0; k < probe.m(); ++k) {
        const double t = probe.t(k);
        const std::complex<double> prof =
            std::exp(std::complex<double>(-t * t / (2.0 * s * s), xistar * t));
        probe.values.row(k) = (prof * v).transpose();
      }
      const GridFunction img = multiplier_apply(fam, j, probe);
      const double den = grid_lp_norm(probe, Xj, pj);
      if (den == 0.0) continue;
      lower = std::max(lower, grid_lp_norm(img, Yj, qj) / den);
    }
  }
  out.lower = lower;
  return out;
}

double interp_operator_norm_lower(const BanachCouple& coupleX, const BanachCouple& coupleY,
                                  const InterpParams& params, const Eigen::MatrixXcd& M,
                                  const NormLowerOptions& opts) {
  coupleX.validate();
  coupleY.validate();
  params.validate();
  if (M.cols() != coupleX.dim() || M.rows() != coupleY.dim())
    throw std::invalid_argument("interp_operator_norm_lower: matrix dims do not match");

  const InterpParams py = target_params(params);
  auto ratio = [&](const Eigen::VectorXcd& x) -> double {
    const double den = real_interp_norm(coupleX, params, x, opts.quad);
    if (den == 0.0) return 0.0;
    return real_interp_norm(coupleY, py, M * x, opts.quad) / den;
  };

  const int n = coupleX.dim();
  std::vector<Eigen::VectorXcd> starts;
  for (int i = 0; i < n; ++i) starts.push_back(Eigen::VectorXcd::Unit(n, i));
  Rng rng(opts.seed);
  for (int k = 0; k < opts.random_starts; ++k) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.cnormal();
    starts.push_back(v);
  }

  std::vector<double> vals(starts.size());
  std::vector<std::exception_ptr> errs(starts.size());
  parallel_for(starts.size(), [&](std::size_t k) {
    try {
      vals[k] = ratio(starts[k]);
    } catch (...) {
      errs[k] = std::current_exception();
    }
  });
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);

  std::size_t best_k = 0;
  for (std::size_t k = 1; k < vals.size(); ++k)
    if (vals[k] > vals[best_k]) best_k = k;
  double best = vals[best_k];
  Eigen::VectorXcd x = starts[best_k];
  coordinate_ascent(ratio, x, best, opts.ascent_iters, nullptr);
  return best;
}

std::string to_json(const SteinReport& rep) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "{\"c_empirical\": %.12e, \"m0_lower\": %.12e, \"m0_upper\": %.12e, "
                "\"m1_lower\": %.12e, \"m1_upper\": %.12e, \"samples\": %d, "
                "\"violations\": %d}",
                rep.c_empirical, rep.m0_lower, rep.m0_upper, rep.m1_lower, rep.m1_upper,
                rep.samples, rep.violations);
  return std::string(buf);
}

SteinReport stein_check(const OperatorFamily& fam, const BanachCouple& coupleX,
                        const BanachCouple& coupleY, const InterpParams& params,
                        const SteinOptions& opts) {
  fam.validate();
  coupleX.validate();
  coupleY.validate();
  params.validate();
  if (fam.cols() != coupleX.dim() || fam.rows() != coupleY.dim())
    throw std::invalid_argument("stein_check: family dims do not match the couples");
  if (opts.samples < 1 || !(opts.suite_constant > 0.0))
    throw std::invalid_argument("stein_check: need samples >= 1 and a positive constant");

  const double theta = params.theta;
  const double q0 = params.q0 == 0.0 ? params.p0 : params.q0;
  const double q1 = params.q1 == 0.0 ? params.p1 : params.q1;

  SteinReport rep;
  MultiplierBounds b0, b1;
  if (opts.m0 > 0.0) {
    b0.lower = b0.upper = opts.m0;
  } else {
    b0 = multiplier_norm_bounds(fam, 0, coupleX.X0, coupleY.X0, params.p0, q0, opts.mult);
  }
  if (opts.m1 > 0.0) {
    b1.lower = b1.upper = opts.m1;
  } else {
    b1 = multiplier_norm_bounds(fam, 1, coupleX.X1, coupleY.X1, params.p1, q1, opts.mult);
  }
  rep.m0_lower = b0.lower;
  rep.m0_upper = b0.upper;
  rep.m1_lower = b1.lower;
  rep.m1_upper = b1.upper;

  const double mtheta = std::pow(b0.upper, 1.0 - theta) * std::pow(b1.upper, theta);
  const double threshold = opts.suite_constant * mtheta;

  const Eigen::MatrixXcd Ttheta = family_eval(fam, theta);
  const InterpParams py = target_params(params);
  auto ratio = [&](const Eigen::VectorXcd& x) -> double {
    const double den = real_interp_norm(coupleX, params, x, opts.norms.quad);
    if (den == 0.0) return 0.0;
    return real_interp_norm(coupleY, py, Ttheta * x, opts.norms.quad) / den;
  };

  const int n = coupleX.dim();
  int ascent_budget = std::min(40, opts.samples / 5);
  int lead = opts.samples - ascent_budget;
  if (lead < std::min(n, opts.samples)) {
    lead = std::min(n, opts.samples);
    ascent_budget = opts.samples - lead;
  }

  std::vector<Eigen::VectorXcd> xs;
  xs.reserve(lead);
  for (int i = 0; i < n && static_cast<int>(xs.size()) < lead; ++i)
    xs.push_back(Eigen::VectorXcd::Unit(n, i));
  Rng rng(opts.seed);
  while (static_cast<int>(xs.size()) < lead) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.cnormal();
    xs.push_back(v);
  }

  std::vector<double> ratios(xs.size());
  std::vector<std::exception_ptr> errs(xs.size());
  parallel_for(xs.size(), [&](std::size_t k) {
    try {
      ratios[k] = ratio(xs[k]);
    } catch (...) {
      errs[k] = std::current_exception();
    }
  });
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);

  int count = static_cast<int>(xs.size());
  int violations = 0;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    if (ratios[k] > threshold) ++violations;
    if (ratios[k] > ratios[best_k]) best_k = k;
  }
  double best = ratios[best_k];
  Eigen::VectorXcd xbest = xs[best_k];

  auto counted = [&](const Eigen::VectorXcd& y) -> double {
    const double r = ratio(y);
    ++count;
    if (r > threshold) ++violations;
    return r;
  };
  coordinate_ascent(counted, xbest, best, 1 << 20, &ascent_budget);

  rep.c_empirical = best / mtheta;
  rep.samples = count;
  rep.violations = violations;
  rep.boundary_identity_dev =
      boundary_identity_dev(fam, coupleX, params, xbest, b0.upper, b1.upper, opts);
  return rep;
}

}  // namespace interplab
