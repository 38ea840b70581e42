#include "interplab/spaces.hpp"

#include <cmath>
#include <string>

namespace interplab {

void WeightedLrSpace::validate() const {
  if (weights.size() < 1)
    throw std::invalid_argument("WeightedLrSpace: dim must be >= 1");
  if (!(r >= 1.0))  // also rejects NaN
    throw std::invalid_argument("WeightedLrSpace: exponent r must be in [1, inf]");
  for (int i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw std::invalid_argument("WeightedLrSpace: weights must be strictly positive, got w[" +
                                  std::to_string(i) + "] = " + std::to_string(weights[i]));
  }
}

WeightedLrSpace WeightedLrSpace::lr(int dim, double r) {
  WeightedLrSpace s;
  s.r = r;
  s.weights = Eigen::VectorXd::Ones(dim);
  s.validate();
  return s;
}

WeightedLrSpace WeightedLrSpace::weighted_lr(double r, Eigen::VectorXd w) {
  WeightedLrSpace s;
  s.r = r;
  s.weights = std::move(w);
  s.validate();
  return s;
}

double space_norm(const WeightedLrSpace& X, const Eigen::VectorXcd& x) {
  if (x.size() != X.weights.size())
    throw std::invalid_argument("space_norm: vector dim " + std::to_string(x.size()) +
                                " does not match space dim " + std::to_string(X.weights.size()));
  const int n = X.dim();
  const double* w = X.weights.data();
  if (X.r == kInf) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, w[i] * std::abs(x[i]));
    return m;
  }
  if (X.r == 1.0) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * std::abs(x[i]);
    return s;
  }
  if (X.r == 2.0) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = w[i] * std::abs(x[i]);
      s += a * a;
    }
    return std::sqrt(s);
  }
  // generic r: factor out the max to avoid overflow for large r
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, w[i] * std::abs(x[i]));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::pow(w[i] * std::abs(x[i]) / m, X.r);
  return m * std::pow(s, 1.0 / X.r);
}

void BanachCouple::validate() const {
  X0.validate();
  X1.validate();
  if (X0.dim() != X1.dim())
    throw std::invalid_argument("BanachCouple: X0.dim != X1.dim");
}

void InterpParams::validate() const {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("InterpParams: theta must lie in (0, 1)");
  for (double e : {p0, p1}) {
    if (!(e >= 1.0)) throw std::invalid_argument("InterpParams: exponents must be in [1, inf]");
  }
  for (double e : {q0, q1}) {
    if (e != 0.0 && !(e >= 1.0))
      throw std::invalid_argument("InterpParams: exponents must be in [1, inf]");
  }
}

double derived_exponent(double a, double b, double theta) {
  const double ia = (a == kInf) ? 0.0 : 1.0 / a;
  const double ib = (b == kInf) ? 0.0 : 1.0 / b;
  const double inv = (1.0 - theta) * ia + theta * ib;
  return inv == 0.0 ? kInf : 1.0 / inv;
}

double InterpParams::p() const { return derived_exponent(p0, p1, theta); }

double InterpParams::q() const {
  const double a = (q0 == 0.0) ? p0 : q0;
  const double b = (q1 == 0.0) ? p1 : q1;
  return derived_exponent(a, b, theta);
}

}  // namespace interplab
