#include "interplab/applications.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "interplab/errors.hpp"
#include "interplab/expm.hpp"
#include "interplab/numutil.hpp"
#include "interplab/operator_family.hpp"
#include "interplab/rng.hpp"

namespace interplab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// discrete L^p norm over the grid with the given fiber norm per node
double grid_lp_norm(const GridFunction& g, const WeightedLrSpace& fiber, double p) {
  const int m = g.m();
  if (p == kInf) {
    double mx = 0.0;
    for (int k = 0; k < m; ++k)
      mx = std::max(mx, space_norm(fiber, g.values.row(k).transpose()));
    return mx;
  }
  double acc = 0.0;
  for (int k = 0; k < m; ++k)
    acc += std::pow(space_norm(fiber, g.values.row(k).transpose()), p);
  return std::pow(g.h * acc, 1.0 / p);
}

}  // namespace

WeightedEquivalenceReport weighted_equivalence_check(int n, double p0, double p1,
                                                     const Eigen::VectorXd& w0,
                                                     const Eigen::VectorXd& w1, double theta,
                                                     int samples,
                                                     const WeightedEquivalenceOptions& opts) {
  if (n < 1) throw std::invalid_argument("weighted_equivalence_check: n must be >= 1");
  if (w0.size() != n || w1.size() != n)
    throw std::invalid_argument("weighted_equivalence_check: weight dims must equal n");
  if (p0 == kInf && p1 == kInf)
    throw std::invalid_argument("weighted_equivalence_check: (p0, p1) = (inf, inf) is excluded");
  if (samples < 1)
    throw std::invalid_argument("weighted_equivalence_check: samples must be >= 1");
  InterpParams params;
  params.theta = theta;
  params.p0 = p0;
  params.p1 = p1;
  params.validate();

  // the ratio is invariant under scaling both weights together; dividing by
  // a power of two up front makes the reported ratios bitwise stable under
  // simultaneous pow2 rescaling of (w0, w1)
  double wmax = 0.0;
  for (int i = 0; i < n; ++i) wmax = std::max({wmax, w0[i], w1[i]});
  const double scale = pow2_ceil(wmax);
  const Eigen::VectorXd w0n = w0 / scale;
  const Eigen::VectorXd w1n = w1 / scale;
  const BanachCouple couple{WeightedLrSpace::weighted_lr(p0, w0n),
                            WeightedLrSpace::weighted_lr(p1, w1n)};
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i)
    w[i] = std::pow(w0n[i], 1.0 - theta) * std::pow(w1n[i], theta);
  const WeightedLrSpace target = WeightedLrSpace::weighted_lr(params.p(), w);

  WeightedEquivalenceReport rep;
  rep.min_ratio = kInf;
  rep.samples = samples;
  Rng rng(opts.seed);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    if (s < n)
      x[s] = 1.0;
    else
      for (int c = 0; c < n; ++c) x[c] = rng.cnormal();
    const double num = real_interp_norm(couple, params, x, opts.quad);
    const double den = space_norm(target, x);
    const double ratio = num / den;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  rep.pass = rep.max_ratio <= opts.constant * rep.min_ratio;
  return rep;
}

double translation_identity_check(int n, double p, const Eigen::VectorXd& w0,
                                  const Eigen::VectorXd& w1, const GridFunction& f) {
  if (n < 1) throw std::invalid_argument("translation_identity_check: n must be >= 1");
  if (w0.size() != n || w1.size() != n)
    throw std::invalid_argument("translation_identity_check: weight dims must equal n");
  if (!(p >= 1.0))
    throw std::invalid_argument("translation_identity_check: p must be in [1, inf]");
  f.validate();
  if (f.n() != n)
    throw std::invalid_argument("translation_identity_check: grid columns must equal n");

  const OperatorFamily fam = OperatorFamily::weighted(w0, w1);
  for (int i = 0; i < n; ++i) {
    const double a = std::log(w1[i] / w0[i]);
    const double cells = a / f.h;
    if (std::abs(cells - std::lround(cells)) * f.h > 1e-9 * (1.0 + std::abs(a)))
      throw std::invalid_argument(
          "translation_identity_check: log(w1[" + std::to_string(i) + "]/w0[" +
          std::to_string(i) + "]) = " + std::to_string(a) +
          " is not an integer multiple of the grid step h = " + std::to_string(f.h) +
          "; realign the grid so every log-weight ratio lands on a node");
  }

  const WeightedLrSpace plain = WeightedLrSpace::lr(n, p);
  double worst = 0.0;
  for (int j = 0; j < 2; ++j) {
    const GridFunction out = multiplier_apply(fam, j, f);
    const WeightedLrSpace fiber =
        WeightedLrSpace::weighted_lr(p, j == 0 ? w0 : w1);
    const double lhs = grid_lp_norm(out, plain, p);
    const double rhs = grid_lp_norm(f, fiber, p);
    if (!(rhs > 0.0))
      throw std::invalid_argument("translation_identity_check: f must be nonzero");
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
  }
  return worst;
}

SemigroupScanReport semigroup_scan(const MatrixOperator& A, const BanachCouple& couple,
                                   const std::vector<double>& thetas, double p0, double p1,
                                   const SemigroupScanOptions& opts) {
  A.validate();
  couple.validate();
  if (couple.X0.dim() != A.dim())
    throw std::invalid_argument("semigroup_scan: couple dim does not match operator");
  if (thetas.empty()) throw std::invalid_argument("semigroup_scan: thetas must be nonempty");
  if (!(opts.cap > 0.0) || !(opts.margin > 0.0 && opts.margin < 1.0))
    throw std::invalid_argument("semigroup_scan: need cap > 0 and margin in (0, 1)");
  if (opts.phi_points < 1 || opts.per_decade < 1 || !(opts.r_min > 0.0) ||
      !(opts.r_max > opts.r_min))
    throw std::invalid_argument("semigroup_scan: bad scan geometry");
  if (!A.invertible())
    throw std::invalid_argument("semigroup_scan: operator must be invertible");

  SemigroupScanReport rep;
  const double omega = A.max_arg();
  if (!(omega < 0.5 * kPi))
    throw std::invalid_argument(
        "semigroup_scan: max |arg lambda| must be below pi/2 for a bounded analytic semigroup");
  rep.sigma = 0.5 * kPi - omega;

  // X1 boundedness of the semigroup on t in (0, 1], probed on a log grid
  const int nt = 16;
  for (int i = 0; i < nt; ++i) {
    const double t = 1e-3 * std::pow(1e3, static_cast<double>(i) / (nt - 1));
    const Eigen::MatrixXcd E = expm(-t * A.A);
    rep.boundedness_x1 =
        std::max(rep.boundedness_x1, matrix_operator_norm_upper(couple.X1, couple.X1, E));
  }
  if (!(rep.boundedness_x1 <= opts.cap))
    throw std::invalid_argument(
        "semigroup_scan: e^{-tA} exceeds the cap in the X1 norm on (0, 1); the endpoint "
        "boundedness precondition fails");

  const double lr0 = std::log(opts.r_min);
  const double lr1 = std::log(opts.r_max);
  const int nr = std::max(
      2, 1 + static_cast<int>(std::lround(std::log10(opts.r_max / opts.r_min) * opts.per_decade)));

  rep.rows.reserve(thetas.size());
  for (double theta : thetas) {
    InterpParams params;
    params.theta = theta;
    params.p0 = p0;
    params.p1 = p1;
    params.validate();
    SemigroupThetaScan row;
    row.theta = theta;
    row.phi_max = (1.0 - theta) * rep.sigma * (1.0 - opts.margin);
    for (int iphi = 0; iphi <= opts.phi_points; ++iphi) {
      const double phi = row.phi_max * iphi / opts.phi_points;
      for (double sign : {1.0, -1.0}) {
        if (iphi == 0 && sign < 0.0) continue;  // the real ray has one sign
        for (int ir = 0; ir < nr; ++ir) {
          const double r = std::exp(lr0 + (lr1 - lr0) * ir / (nr - 1));
          const std::complex<double> z = std::polar(r, sign * phi);
          const Eigen::MatrixXcd E = expm(-z * A.A);
          const double lower = interp_operator_norm_lower(couple, couple, params, E, opts.norms);
          row.abs_z.push_back(r);
          row.arg_z.push_back(sign * phi);
          row.lower.push_back(lower);
          row.max_norm = std::max(row.max_norm, lower);
        }
      }
    }
    row.hit_cap = row.max_norm > opts.cap;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace interplab
