#pragma once

#include <Eigen/Dense>
#include <limits>

#include "interplab/errors.hpp"

namespace interplab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Weighted finite-dimensional l^r space: ||x|| = || (w_i x_i)_i ||_{l^r},
// exponent r in [1, inf], weights strictly positive.
struct WeightedLrSpace {
  double r = 2.0;
  Eigen::VectorXd weights;

  int dim() const { return static_cast<int>(weights.size()); }
  void validate() const;

  static WeightedLrSpace lr(int dim, double r);
  static WeightedLrSpace weighted_lr(double r, Eigen::VectorXd w);
};

double space_norm(const WeightedLrSpace& X, const Eigen::VectorXcd& x);

// Compatible pair (X0, X1) on a common coordinate space.
struct BanachCouple {
  WeightedLrSpace X0, X1;

  int dim() const { return X0.dim(); }
  void validate() const;
};

// Interpolation parameters.  Exponents use the convention 1/inf = 0; the
// derived p obeys 1/p = (1-theta)/p0 + theta/p1 (same for q).
struct InterpParams {
  double theta = 0.5;
  double p0 = 2.0, p1 = 2.0;
  double q0 = 0.0, q1 = 0.0;  // 0 means "same as p0/p1"

  void validate() const;
  double p() const;
  double q() const;
};

// mixes exponents a (at weight 1-theta) and b (at weight theta)
double derived_exponent(double a, double b, double theta);

}  // namespace interplab
