#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "interplab/banach.hpp"
#include "interplab/grid.hpp"
#include "interplab/sectorial.hpp"
#include "interplab/spaces.hpp"
#include "interplab/stein.hpp"

namespace interplab {

struct WeightedEquivalenceOptions {
  double constant = 10.0;  // declared two-sided equivalence constant
  std::uint64_t seed = 23;
  QuadOptions quad;  // moderate effort: ratios only need ~1e-4 accuracy
  WeightedEquivalenceOptions() {
    quad.du = 0.1;
    quad.quad_tol = 1e-5;
    quad.solver.tol = 1e-7;
  }
};

struct WeightedEquivalenceReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  int samples = 0;
  bool pass = false;  // max_ratio <= constant * min_ratio
};

// Samples the ratio between the interpolation norm of the weighted
// sequence-space couple (l^p0(w0), l^p1(w1)) at theta and the closed-form
// candidate norm l^p(w), w = w0^(1-theta) w1^theta, 1/p =
// (1-theta)/p0 + theta/p1.  Coordinates are probed first, then random
// complex Gaussian vectors.  Requires (p0, p1) != (inf, inf).
WeightedEquivalenceReport weighted_equivalence_check(
    int n, double p0, double p1, const Eigen::VectorXd& w0,
    const Eigen::VectorXd& w1, double theta, int samples,
    const WeightedEquivalenceOptions& opts = {});

// Checks the exact translation identity behind the weighted-shift
// multiplier: applying the boundary symbol of the weighted family
// (w0, w1) at j in {0, 1} to f is an isometry from the w_j-weighted
// fiber norm onto the unweighted one,
//   || multiplier_apply(fam, j, f) ||_{L^p(l^p)}
//     = || f ||_{L^p(l^p(w_j))}.
// Requires every log(w1_i / w0_i) to be an integer multiple of the grid
// step (the shifts must land on nodes); otherwise throws
// std::invalid_argument telling the caller to realign the grid.
// Returns the worst relative deviation over j = 0, 1.
double translation_identity_check(int n, double p, const Eigen::VectorXd& w0,
                                  const Eigen::VectorXd& w1,
                                  const GridFunction& f);

struct SemigroupScanOptions {
  double cap = 100.0;    // probe lower bounds above this trip hit_cap
  double margin = 0.1;   // keep-out fraction below the analytic cutoff
  int phi_points = 4;    // angles scanned per theta (plus the real ray)
  double r_min = 1e-2;   // |z| scan range, log-spaced
  double r_max = 1e2;
  int per_decade = 4;
  NormLowerOptions norms;  // probe effort per scanned point
  SemigroupScanOptions() {
    norms.random_starts = 1;
    norms.ascent_iters = 0;
    norms.quad.du = 0.15;
    norms.quad.quad_tol = 3e-5;
  }
};

struct SemigroupThetaScan {
  double theta = 0.0;
  double phi_max = 0.0;   // widest scanned angle, (1-theta)*sigma*(1-margin)
  double max_norm = 0.0;  // worst probe lower bound over the scanned sector
  bool hit_cap = false;
  // per-point scan samples, in scan order (for the CSV table)
  std::vector<double> abs_z, arg_z, lower;
};

struct SemigroupScanReport {
  double sigma = 0.0;            // analyticity half-angle pi/2 - max|arg l|
  double boundedness_x1 = 0.0;   // max X1 operator norm of e^{-tA}, t in (0,1)
  std::vector<SemigroupThetaScan> rows;
};

// Scans interpolation-norm probe lower bounds of e^{-zA} over sectors
// whose half-angle shrinks linearly in theta: for each theta the scan
// covers arg z up to (1-theta) * sigma * (1-margin), |z| on a log grid.
// Preconditions (checked): A invertible with max |arg lambda| < pi/2,
// and the X1 operator norms of e^{-tA} for t in (0, 1) stay below
// opts.cap.  Exponentials use expm().
SemigroupScanReport semigroup_scan(const MatrixOperator& A,
                                   const BanachCouple& couple,
                                   const std::vector<double>& thetas,
                                   double p0, double p1,
                                   const SemigroupScanOptions& opts = {});

}  // namespace interplab
