#include "interplab/operator_family.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "interplab/errors.hpp"

namespace interplab {

namespace {

double conjugate_exponent(double r) {
  if (r == 1.0) return kInf;
  if (r == kInf) return 1.0;
  return r / (r - 1.0);
}

double vector_lr(const Eigen::VectorXd& a, double r) {
  if (r == kInf) return a.maxCoeff();
  if (r == 1.0) return a.sum();
  return std::pow(a.array().pow(r).sum(), 1.0 / r);
}

void check_dims(const WeightedLrSpace& X, const WeightedLrSpace& Y,
                const Eigen::MatrixXcd& M) {
  X.validate();
  Y.validate();
  if (M.cols() != X.dim() || M.rows() != Y.dim())
    throw std::invalid_argument("matrix dimensions do not match the spaces");
}

}  // namespace

double matrix_operator_norm(const WeightedLrSpace& X, const WeightedLrSpace& Y,
                            const Eigen::MatrixXcd& M) {
  check_dims(X, Y, M);
  if (X.r == 1.0) {
    // extreme points of the weighted l^1 ball are +/- e_k / v_k
    double best = 0.0;
    for (int k = 0; k < X.dim(); ++k)
      best = std::max(best, space_norm(Y, M.col(k)) / X.weights[k]);
    return best;
  }
  if (Y.r == kInf) {
    // row i contributes u_i times the X-dual norm of the row
    double best = 0.0;
    const double rc = conjugate_exponent(X.r);
    for (int i = 0; i < Y.dim(); ++i) {
      const Eigen::VectorXd row =
          M.row(i).cwiseAbs().transpose().cwiseQuotient(X.weights);
      best = std::max(best, Y.weights[i] * vector_lr(row, rc));
    }
    return best;
  }
  if (X.r == 2.0 && Y.r == 2.0) {
    const Eigen::MatrixXcd W =
        Y.weights.asDiagonal() * M * X.weights.cwiseInverse().asDiagonal();
    return W.jacobiSvd().singularValues()[0];
  }
  throw UnsupportedError(
      "exact operator norm only available from l^1, into l^inf, or l^2 -> l^2");
}

double matrix_operator_norm_upper(const WeightedLrSpace& X, const WeightedLrSpace& Y,
                                  const Eigen::MatrixXcd& M) {
  try {
    return matrix_operator_norm(X, Y, M);
  } catch (const UnsupportedError&) {
  }
  if (X.r != Y.r)
    throw UnsupportedError(
        "no certified norm bound for mismatched exponents outside the exact cases");
  const Eigen::MatrixXd W = (Y.weights.asDiagonal() * M.cwiseAbs() *
                             X.weights.cwiseInverse().asDiagonal());
  const double c1 = W.colwise().sum().maxCoeff();
  const double cinf = W.rowwise().sum().maxCoeff();
  return std::pow(c1, 1.0 / X.r) * std::pow(cinf, 1.0 - 1.0 / X.r);
}

int OperatorFamily::rows() const {
  switch (kind) {
    case FamilyKind::weighted_multiplier: return static_cast<int>(w0.size());
    case FamilyKind::resolvent: return static_cast<int>(A.rows());
    case FamilyKind::tabulated: return table.empty() ? 0 : static_cast<int>(table[0].rows());
  }
  return 0;
}

int OperatorFamily::cols() const {
  switch (kind) {
    case FamilyKind::weighted_multiplier: return static_cast<int>(w0.size());
    case FamilyKind::resolvent: return static_cast<int>(A.cols());
    case FamilyKind::tabulated: return table.empty() ? 0 : static_cast<int>(table[0].cols());
  }
  return 0;
}

void OperatorFamily::validate() const {
  switch (kind) {
    case FamilyKind::weighted_multiplier:
      if (w0.size() == 0 || w0.size() != w1.size())
        throw std::invalid_argument("weighted family needs matching nonempty weights");
      if (w0.minCoeff() <= 0.0 || w1.minCoeff() <= 0.0)
        throw std::invalid_argument("weighted family weights must be positive");
      return;
    case FamilyKind::resolvent:
      if (A.rows() == 0 || A.rows() != A.cols())
        throw std::invalid_argument("resolvent family needs a square matrix");
      if (!(scale > 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("resolvent family scale must be positive");
      if (!(anchor > 0.0 && anchor < 1.0))
        throw std::invalid_argument("resolvent family anchor must lie in (0,1)");
      if (!std::isfinite(sigma0) || !std::isfinite(sigma1))
        throw std::invalid_argument("resolvent family angles must be finite");
      if (spectrum.size() != A.rows())
        throw std::invalid_argument("resolvent family spectrum cache missing");
      return;
    case FamilyKind::tabulated: {
      if (nre < 2 || nim < 2 || static_cast<int>(table.size()) != nre * nim)
        throw std::invalid_argument("tabulated family needs an nre x nim sample table");
      if (!(re0 >= 0.0 && re1 <= 1.0 && re0 < re1) || !(im0 < im1))
        throw std::invalid_argument("tabulated rectangle must sit inside the strip");
      const double rad = 0.4 * std::min(re1 - re0, im1 - im0) / 2.0;
      const std::complex<double> c(0.5 * (re0 + re1), 0.5 * (im0 + im1));
      const double res = cauchy_residual(*this, c, rad);
      double scale_ref = 0.0;
      for (const auto& t : table) scale_ref = std::max(scale_ref, t.cwiseAbs().maxCoeff());
      if (res > 1e-6 * std::max(scale_ref, 1e-300)) {
        std::ostringstream msg;
        msg << "tabulated family fails the analyticity check: Cauchy residual "
            << res << " exceeds 1e-6 of the table scale " << scale_ref;
        throw std::invalid_argument(msg.str());
      }
      return;
    }
  }
}

OperatorFamily OperatorFamily::weighted(Eigen::VectorXd w0, Eigen::VectorXd w1) {
  OperatorFamily fam;
  fam.kind = FamilyKind::weighted_multiplier;
  fam.w0 = std::move(w0);
  fam.w1 = std::move(w1);
  fam.validate();
  return fam;
}

OperatorFamily OperatorFamily::resolvent_family(Eigen::MatrixXcd A, double scale,
                                                double sigma0, double sigma1,
                                                double anchor) {
  OperatorFamily fam;
  fam.kind = FamilyKind::resolvent;
  fam.A = std::move(A);
  fam.scale = scale;
  fam.sigma0 = sigma0;
  fam.sigma1 = sigma1;
  fam.anchor = anchor;
  if (fam.A.rows() > 0 && fam.A.rows() == fam.A.cols())
    fam.spectrum = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(fam.A, false).eigenvalues();
  fam.validate();
  return fam;
}

OperatorFamily OperatorFamily::tabulated_family(double re0, double re1, int nre,
                                                double im0, double im1, int nim,
                                                std::vector<Eigen::MatrixXcd> table) {
  OperatorFamily fam;
  fam.kind = FamilyKind::tabulated;
  fam.re0 = re0;
  fam.re1 = re1;
  fam.nre = nre;
  fam.im0 = im0;
  fam.im1 = im1;
  fam.nim = nim;
  fam.table = std::move(table);
  fam.validate();
  return fam;
}

Eigen::MatrixXcd family_eval(const OperatorFamily& fam, std::complex<double> z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z.real() < 0.0 ||
      z.real() > 1.0)
    throw std::invalid_argument("family_eval: z must lie in the closed strip");
  switch (fam.kind) {
    case FamilyKind::weighted_multiplier: {
      const int n = static_cast<int>(fam.w0.size());
      Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(n, n);
      for (int i = 0; i < n; ++i)
        T(i, i) = std::pow(fam.w0[i], 1.0 - z) * std::pow(fam.w1[i], z);
      return T;
    }
    case FamilyKind::resolvent: {
      const std::complex<double> ang =
          std::complex<double>(0.0, 1.0) *
          (fam.sigma0 + (fam.sigma1 - fam.sigma0) * z);
      const std::complex<double> zeta = fam.scale * std::exp(ang);
      for (int i = 0; i < fam.spectrum.size(); ++i)
        if (std::abs(zeta - fam.spectrum[i]) <= 1e-12 * (1.0 + std::abs(zeta)))
          throw SingularityError("resolvent family evaluated at a spectral point");
      const std::complex<double> shift = z - fam.anchor;
      const std::complex<double> damp = std::exp(shift * shift);
      const int n = static_cast<int>(fam.A.rows());
      Eigen::MatrixXcd B = zeta * Eigen::MatrixXcd::Identity(n, n) - fam.A;
      return damp * zeta * B.partialPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
    }
    case FamilyKind::tabulated: {
      if (z.real() < fam.re0 || z.real() > fam.re1 || z.imag() < fam.im0 ||
          z.imag() > fam.im1)
        throw std::invalid_argument("family_eval: z outside the tabulated rectangle");
      const double dre = (fam.re1 - fam.re0) / (fam.nre - 1);
      const double dim = (fam.im1 - fam.im0) / (fam.nim - 1);
      double fre = (z.real() - fam.re0) / dre;
      double fim = (z.imag() - fam.im0) / dim;
      int ire = std::min(fam.nre - 2, static_cast<int>(fre));
      int iim = std::min(fam.nim - 2, static_cast<int>(fim));
      fre -= ire;
      fim -= iim;
      auto at = [&](int a, int b) -> const Eigen::MatrixXcd& {
        return fam.table[a * fam.nim + b];
      };
      return (1 - fre) * (1 - fim) * at(ire, iim) + fre * (1 - fim) * at(ire + 1, iim) +
             (1 - fre) * fim * at(ire, iim + 1) + fre * fim * at(ire + 1, iim + 1);
    }
  }
  throw std::logic_error("unreachable family kind");
}

double cauchy_residual(const OperatorFamily& fam, std::complex<double> center,
                       double radius, int nodes) {
  if (!(radius > 0.0) || nodes < 8)
    throw std::invalid_argument("cauchy_residual needs a positive radius and >= 8 nodes");
  const std::complex<double> probes[2] = {center, center + 0.5 * radius};
  double worst = 0.0;
  for (const auto& z0 : probes) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(fam.rows(), fam.cols());
    for (int k = 0; k < nodes; ++k) {
      const double phi = 2.0 * M_PI * k / nodes;
      const std::complex<double> offset = std::polar(radius, phi);
      const std::complex<double> zeta = center + offset;
      // d zeta / (zeta - z0) with d zeta = i * offset * dphi
      acc += family_eval(fam, zeta) * (offset / (zeta - z0)) / double(nodes);
    }
    worst = std::max(worst, (acc - family_eval(fam, z0)).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace interplab
