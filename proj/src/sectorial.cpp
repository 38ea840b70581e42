#include "interplab/sectorial.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "interplab/errors.hpp"
#include "interplab/operator_family.hpp"

namespace interplab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// || z (z - A)^{-1} ||_{X -> X} at z = e^{lr} e^{i phi}; kInf when the
// solve degenerates (the membership guard normally prevents that).
double ray_norm(const Eigen::MatrixXcd& A, const WeightedLrSpace& X, double lr,
                double phi) {
  const int n = static_cast<int>(A.rows());
  const std::complex<double> z = std::polar(std::exp(lr), phi);
  Eigen::MatrixXcd B = -A;
  B.diagonal().array() += z;
  const Eigen::MatrixXcd R = B.partialPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
  if (!R.allFinite()) return kInf;
  return matrix_operator_norm_upper(X, X, z * R);
}

template <typename F>
double golden_max(F f, double a, double b, double fa_mid) {
  const double gr = 0.6180339887498949;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  double best = fa_mid;
  for (int it = 0; it < 64; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  return std::max({best, f1, f2});
}

}  // namespace

void SectorSpec::validate() const {
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max))
    throw std::invalid_argument("SectorSpec: need 0 < r_min < r_max < inf");
  if (per_decade < 2)
    throw std::invalid_argument("SectorSpec: per_decade must be >= 2");
}

MatrixOperator MatrixOperator::make(const Eigen::MatrixXcd& A) {
  if (A.rows() != A.cols() || A.rows() < 1)
    throw std::invalid_argument("MatrixOperator: square matrix required");
  if (!A.allFinite())
    throw std::invalid_argument("MatrixOperator: entries must be finite");
  MatrixOperator op;
  op.A = A;
  op.eigenvalues = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(A, false).eigenvalues();
  return op;
}

void MatrixOperator::validate() const {
  if (A.rows() != A.cols() || A.rows() < 1)
    throw std::invalid_argument("MatrixOperator: square matrix required");
  if (!A.allFinite())
    throw std::invalid_argument("MatrixOperator: entries must be finite");
  if (eigenvalues.size() != A.rows())
    throw std::invalid_argument("MatrixOperator: eigenvalue data missing (use MatrixOperator::make)");
}

bool MatrixOperator::invertible(double rtol) const {
  double lmax = 0.0;
  for (int i = 0; i < eigenvalues.size(); ++i)
    lmax = std::max(lmax, std::abs(eigenvalues[i]));
  for (int i = 0; i < eigenvalues.size(); ++i)
    if (std::abs(eigenvalues[i]) <= rtol * std::max(1.0, lmax)) return false;
  return true;
}

double MatrixOperator::max_arg() const {
  validate();
  if (!invertible())
    throw std::invalid_argument("MatrixOperator::max_arg: operator must be invertible");
  double m = 0.0;
  for (int i = 0; i < eigenvalues.size(); ++i)
    m = std::max(m, std::abs(std::arg(eigenvalues[i])));
  return m;
}

double resolvent_sup(const MatrixOperator& A, const WeightedLrSpace& X, double sigma,
                     const SectorSpec& spec) {
  A.validate();
  X.validate();
  spec.validate();
  if (!(sigma > 0.0 && sigma < kPi))
    throw std::invalid_argument("resolvent_sup: sigma must lie in (0, pi)");
  if (X.dim() != A.dim())
    throw std::invalid_argument("resolvent_sup: space dim does not match operator dim");

  // spectrum must sit strictly inside the open sector; eigenvalues on (or
  // outside) a scanned ray make the boundary sup infinite
  double lmax = 0.0;
  for (int i = 0; i < A.eigenvalues.size(); ++i)
    lmax = std::max(lmax, std::abs(A.eigenvalues[i]));
  for (int i = 0; i < A.eigenvalues.size(); ++i) {
    const std::complex<double> l = A.eigenvalues[i];
    if (std::abs(l) <= 1e-14 * std::max(1.0, lmax)) continue;  // origin is harmless
    if (std::abs(std::arg(l)) >= sigma) return kInf;
  }

  const double l0 = std::log(spec.r_min);
  const double l1 = std::log(spec.r_max);
  const int count = std::max(
      2, 1 + static_cast<int>(std::lround(std::log10(spec.r_max / spec.r_min) * spec.per_decade)));
  double best = 1.0;  // z -> infinity limit of || z (z - A)^{-1} ||
  for (double sign : {1.0, -1.0}) {
    auto f = [&](double lr) { return ray_norm(A.A, X, lr, sign * sigma); };
    int ibest = 0;
    double vbest = -1.0;
    for (int i = 0; i < count; ++i) {
      const double v = f(l0 + (l1 - l0) * i / (count - 1));
      if (!std::isfinite(v)) return kInf;
      if (v > vbest) {
        vbest = v;
        ibest = i;
      }
    }
    const double a = l0 + (l1 - l0) * std::max(0, ibest - 1) / (count - 1);
    const double b = l0 + (l1 - l0) * std::min(count - 1, ibest + 1) / (count - 1);
    best = std::max(best, golden_max(f, a, b, vbest));
  }
  return best;
}

SectorialityResult sectoriality_angle(const MatrixOperator& A, const WeightedLrSpace& X,
                                      const SectorSpec& spec, int table_points) {
  A.validate();
  X.validate();
  spec.validate();
  if (table_points < 2)
    throw std::invalid_argument("sectoriality_angle: table_points must be >= 2");
  if (!A.invertible())
    throw std::invalid_argument("sectoriality_angle: operator must be invertible");

  SectorialityResult res;
  if (A.max_arg() >= kPi * (1.0 - 1e-12)) {
    // an eigenvalue on the negative real axis rules out every sector
    res.not_sectorial = true;
    res.omega = kPi;
    return res;
  }

  double lo = 0.0;
  double hi = kPi;
  for (int it = 0; it < 14; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::isfinite(resolvent_sup(A, X, mid, spec)))
      hi = mid;
    else
      lo = mid;
  }
  res.omega = hi;

  res.sigmas.resize(table_points);
  res.sups.resize(table_points);
  for (int i = 0; i < table_points; ++i) {
    const double sig = res.omega + (kPi - res.omega) * (i + 1) / (table_points + 1);
    res.sigmas[i] = sig;
    res.sups[i] = resolvent_sup(A, X, sig, spec);
  }
  return res;
}

InterpSectorialityReport interp_sectoriality_check(const MatrixOperator& A,
                                                   const BanachCouple& couple,
                                                   const InterpParams& params, double sigma0,
                                                   double sigma1,
                                                   const std::vector<double>& s_grid,
                                                   const InterpSectorialityOptions& opts) {
  A.validate();
  couple.validate();
  params.validate();
  if (couple.X0.dim() != A.dim())
    throw std::invalid_argument("interp_sectoriality_check: couple dim does not match operator");
  if (s_grid.empty())
    throw std::invalid_argument("interp_sectoriality_check: s_grid must be nonempty");
  for (double s : s_grid)
    if (!(s > 0.0) || !std::isfinite(s))
      throw std::invalid_argument("interp_sectoriality_check: s_grid entries must be positive and finite");
  if (!(sigma0 > 0.0 && sigma0 < kPi))
    throw std::invalid_argument("interp_sectoriality_check: sigma0 must lie in (0, pi)");
  if (!(sigma1 > 0.0 && sigma1 < kPi))
    throw std::invalid_argument("interp_sectoriality_check: sigma1 must lie in (0, pi)");

  InterpSectorialityReport rep;
  rep.m0 = resolvent_sup(A, couple.X0, sigma0, opts.spec);
  if (!std::isfinite(rep.m0))
    throw std::invalid_argument(
        "interp_sectoriality_check: resolvent sup at sigma0 is infinite; the spectrum must lie "
        "strictly inside the sigma0 sector");
  rep.m1 = resolvent_sup(A, couple.X1, sigma1, opts.spec);
  if (!std::isfinite(rep.m1))
    throw std::invalid_argument(
        "interp_sectoriality_check: resolvent sup at sigma1 is infinite; the spectrum must lie "
        "strictly inside the sigma1 sector");

  // derivative-chain constants: with G(t) = f(t) R(f(t), A) on the ray and
  // f' = -(sigma1 - sigma0) f one gets G' = -ds (G + G^2) and
  // G'' = ds^2 (G + 3 G^2 + 2 G^3), so sup norms of G, G', G'' cost
  // M, |ds| M (1 + M), ds^2 M (1 + 3 M + 2 M^2).  Multiplying by the
  // Gaussian damping e^{(j + it - theta)^2} and integrating in t gives the
  // kernel bound 0.5 (||T||_1 + ||T''||_1) via the explicit moments
  // of e^{-t^2}.
  const double theta = params.theta;
  const double ds = std::abs(sigma1 - sigma0);
  const double sq = std::sqrt(kPi);
  auto chain = [&](double m, int j) {
    const double d1 = ds * m * (1.0 + m);
    const double d2 = ds * ds * m * (1.0 + 3.0 * m + 2.0 * m * m);
    const double damp = std::exp((j - theta) * (j - theta));
    const double l1 = sq * m;
    const double l1pp = (8.0 * sq + 8.0) * m + 4.0 * (sq + 1.0) * d1 + sq * d2;
    return 0.5 * damp * (l1 + l1pp);
  };
  rep.c0 = chain(rep.m0, 0);
  rep.c1 = chain(rep.m1, 1);
  rep.threshold =
      opts.suite_constant * std::pow(rep.c0, 1.0 - theta) * std::pow(rep.c1, theta);

  const double sigth = (1.0 - theta) * sigma0 + theta * sigma1;
  const int n = A.dim();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  rep.s_values.reserve(s_grid.size());
  rep.ratios.reserve(s_grid.size());
  for (double s : s_grid) {
    double worst = 0.0;
    for (double sign : {1.0, -1.0}) {
      const std::complex<double> z = std::polar(s, sign * sigth);
      Eigen::MatrixXcd B = -A.A;
      B.diagonal().array() += z;
      const Eigen::MatrixXcd Mz = z * B.partialPivLu().solve(I);
      const double lower = interp_operator_norm_lower(couple, couple, params, Mz, opts.norms);
      worst = std::max(worst, lower / rep.threshold);
    }
    rep.s_values.push_back(s);
    rep.ratios.push_back(worst);
    rep.max_ratio = std::max(rep.max_ratio, worst);
    if (worst > 1.0) ++rep.violations;
  }
  return rep;
}

}  // namespace interplab
