#pragma once

#include <vector>

#include <Eigen/Dense>

#include "interplab/spaces.hpp"
#include "interplab/stein.hpp"

namespace interplab {

// Scan geometry for resolvent suprema: radii are sampled on a log grid
// with `per_decade` points per decade, then the running maximum is
// sharpened by golden-section refinement so the reported value is the
// true ray supremum (to ~1e-10 relative) rather than a grid artifact.
// That makes the scan insensitive to simultaneous rescaling of the
// operator, which several invariance checks depend on.
struct SectorSpec {
  double r_min = 1e-4;
  double r_max = 1e4;
  int per_decade = 16;
  void validate() const;
};

// Square matrix together with its eigenvalue data (used for sector
// membership tests and for the exact reference angle max_i |arg l_i|).
struct MatrixOperator {
  Eigen::MatrixXcd A;
  Eigen::VectorXcd eigenvalues;

  static MatrixOperator make(const Eigen::MatrixXcd& A);
  void validate() const;
  int dim() const { return static_cast<int>(A.rows()); }
  // max_i |arg lambda_i|; requires an invertible matrix.
  double max_arg() const;
  bool invertible(double rtol = 1e-12) const;
};

// sup || z (z - A)^{-1} ||_{X -> X} over the two boundary rays
// arg z = +/- sigma, r in [spec.r_min, spec.r_max], plus the analytic
// limit 1 at infinity.  Returns kInf when the spectrum is not strictly
// inside the open sector |arg z| < sigma (in particular when an
// eigenvalue sits on a scanned ray).
double resolvent_sup(const MatrixOperator& A, const WeightedLrSpace& X,
                     double sigma, const SectorSpec& spec = {});

struct SectorialityResult {
  std::vector<double> sigmas;  // scanned angles, increasing
  std::vector<double> sups;    // M(sigma) per angle (kInf where unbounded)
  double omega = 0.0;          // smallest angle with finite sup, to 1e-3
  bool not_sectorial = false;  // true when no sigma < pi works
};

// Bisects the angle of sectoriality over (0, pi) using resolvent_sup
// finiteness, and tabulates M(sigma) on `table_points` angles between
// omega and pi for the report.  Requires an invertible matrix.
SectorialityResult sectoriality_angle(const MatrixOperator& A,
                                      const WeightedLrSpace& X,
                                      const SectorSpec& spec = {},
                                      int table_points = 9);

struct InterpSectorialityOptions {
  double suite_constant = 1.0;  // slack multiplier on the certified bound
  SectorSpec spec;
  NormLowerOptions norms;  // probe effort per scanned point
  InterpSectorialityOptions() {
    norms.random_starts = 1;
    norms.ascent_iters = 2;
    norms.quad.du = 0.15;
    norms.quad.quad_tol = 3e-5;
  }
};

struct InterpSectorialityReport {
  double m0 = 0.0, m1 = 0.0;  // ray resolvent suprema per endpoint norm
  double c0 = 0.0, c1 = 0.0;  // derivative-chain constants per endpoint
  double threshold = 0.0;     // suite_constant * c0^(1-theta) * c1^theta
  double max_ratio = 0.0;     // worst (probe lower bound) / threshold
  int violations = 0;         // scan points with ratio > 1
  std::vector<double> s_values;  // scanned radii (each tested at +/- angle)
  std::vector<double> ratios;    // worst-of-both-signs ratio per radius
};

// Certifies sectoriality in the interpolation norm: for every s in
// s_grid and both signs, the probe lower bound for the interpolation
// norm of s e^{i sigma_theta} (s e^{i sigma_theta} - A)^{-1} must stay
// below the threshold assembled from the endpoint resolvent suprema.
// sigma_theta = (1-theta) sigma0 + theta sigma1.  Preconditions
// (checked): the resolvent sup at angle sigma_j in the X_j norm is
// finite; violations raise std::invalid_argument naming the angle.
InterpSectorialityReport interp_sectoriality_check(
    const MatrixOperator& A, const BanachCouple& couple,
    const InterpParams& params, double sigma0, double sigma1,
    const std::vector<double>& s_grid,
    const InterpSectorialityOptions& opts = {});

}  // namespace interplab
