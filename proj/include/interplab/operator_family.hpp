#pragma once

#include <complex>
#include <vector>

#include "interplab/spaces.hpp"

namespace interplab {

// Exact operator norm of M between weighted l^r spaces for the closed-form
// cases: domain l^1 (weighted column maximum), target l^inf (weighted dual
// row norms), or l^2 -> l^2 (largest singular value of the reweighted
// matrix).  Other exponent pairs throw UnsupportedError.
double matrix_operator_norm(const WeightedLrSpace& X, const WeightedLrSpace& Y,
                            const Eigen::MatrixXcd& M);

// Certified upper bound: the exact value where available, otherwise the
// interpolation (Schur) bound C_1^{1/r} C_inf^{1-1/r} of the reweighted
// matrix, valid when both spaces share the exponent r.
double matrix_operator_norm_upper(const WeightedLrSpace& X, const WeightedLrSpace& Y,
                                  const Eigen::MatrixXcd& M);

enum class FamilyKind { weighted_multiplier, resolvent, tabulated };

// Analytic operator family z -> T(z) on the closed unit strip.
//   weighted_multiplier: diag(w0^{1-z} w1^z), w0, w1 > 0.
//   resolvent: e^{(z-theta)^2} zeta(z) R(zeta(z), A) with
//              zeta(z) = scale * e^{i(sigma0 + (sigma1-sigma0) z)} and
//              R(l, A) = (l - A)^{-1}; the Gaussian damping keeps the
//              boundary symbols integrable.
//   tabulated: bilinear interpolation of samples on a rectangle inside the
//              strip; analyticity is certified by a Cauchy-integral
//              residual on a test circle (must be below 1e-6).
struct OperatorFamily {
  FamilyKind kind = FamilyKind::weighted_multiplier;

  // weighted_multiplier
  Eigen::VectorXd w0, w1;

  // resolvent
  Eigen::MatrixXcd A;
  double scale = 1.0;
  double sigma0 = 0.0, sigma1 = 0.0;
  double anchor = 0.5;           // the theta of the damping factor
  Eigen::VectorXcd spectrum;     // eigenvalues of A, cached at construction

  // tabulated: table[ire * nim + iim] sampled at re0 + ire*dre, im0 + iim*dim
  double re0 = 0.0, re1 = 1.0, im0 = -1.0, im1 = 1.0;
  int nre = 0, nim = 0;
  std::vector<Eigen::MatrixXcd> table;

  int rows() const;
  int cols() const;
  void validate() const;

  static OperatorFamily weighted(Eigen::VectorXd w0, Eigen::VectorXd w1);
  static OperatorFamily resolvent_family(Eigen::MatrixXcd A, double scale, double sigma0,
                                         double sigma1, double anchor);
  static OperatorFamily tabulated_family(double re0, double re1, int nre, double im0,
                                         double im1, int nim,
                                         std::vector<Eigen::MatrixXcd> table);
};

// T(z); z must lie in the closed strip (and inside the table rectangle for
// tabulated families).  Evaluating a resolvent family at a spectral point
// throws SingularityError.
Eigen::MatrixXcd family_eval(const OperatorFamily& fam, std::complex<double> z);

// Max entrywise deviation between family_eval and its discrete Cauchy
// integral over the circle |zeta - center| = radius, probed at the center
// and at an off-center point (the off-center probe catches anti-analytic
// components that the mean-value property alone misses).
double cauchy_residual(const OperatorFamily& fam, std::complex<double> center,
                       double radius, int nodes = 64);

}  // namespace interplab
