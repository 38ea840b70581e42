#include "interplab/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "interplab/errors.hpp"
#include "interplab/rng.hpp"

namespace interplab {

double rademacher_average(const WeightedLrSpace& X,
                          const std::vector<Eigen::VectorXcd>& xs) {
  X.validate();
  const int k = static_cast<int>(xs.size());
  if (k < 1) throw std::invalid_argument("rademacher_average: need at least one vector");
  if (k > 20)
    throw UnsupportedError("rademacher_average: exact enumeration is limited to 20 vectors, got " +
                           std::to_string(k));
  const int n = X.dim();
  for (const auto& x : xs)
    if (x.size() != n)
      throw std::invalid_argument("rademacher_average: vector dim does not match space dim");

  const std::size_t count = std::size_t{1} << k;
  std::vector<double> sq(count);
  Eigen::VectorXcd s(n);
  for (std::size_t pattern = 0; pattern < count; ++pattern) {
    // fresh accumulation per pattern: the multiset of pattern norms is then
    // bitwise stable under sign flips of the inputs
    s.setZero();
    for (int i = 0; i < k; ++i) {
      if (pattern & (std::size_t{1} << i))
        s -= xs[i];
      else
        s += xs[i];
    }
    const double v = space_norm(X, s);
    sq[pattern] = v * v;
  }
  std::sort(sq.begin(), sq.end());
  double acc = 0.0;
  for (double v : sq) acc += v;
  return std::sqrt(acc / static_cast<double>(count));
}

namespace {

double tuple_ratio(const std::vector<Eigen::MatrixXcd>& Ts, const WeightedLrSpace& X,
                   const std::vector<Eigen::VectorXcd>& xs) {
  const double denom = rademacher_average(X, xs);
  if (!(denom > 0.0)) return 0.0;
  std::vector<Eigen::VectorXcd> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = Ts[i] * xs[i];
  return rademacher_average(X, ys) / denom;
}

}  // namespace

double r_bound_lower(const std::vector<Eigen::MatrixXcd>& Ts, const WeightedLrSpace& X,
                     int trials, std::uint64_t seed) {
  X.validate();
  const int k = static_cast<int>(Ts.size());
  if (k < 1) throw std::invalid_argument("r_bound_lower: need at least one operator");
  if (k > 12)
    throw UnsupportedError("r_bound_lower: exact enumeration is limited to 12 operators, got " +
                           std::to_string(k));
  if (trials < 0) throw std::invalid_argument("r_bound_lower: trials must be >= 0");
  const int n = X.dim();
  for (const auto& T : Ts)
    if (T.rows() != n || T.cols() != n)
      throw std::invalid_argument("r_bound_lower: operator shape does not match space dim");

  double best = 0.0;
  std::vector<Eigen::VectorXcd> xs(k, Eigen::VectorXcd::Zero(n));

  // one-hot tuples: a single coordinate vector in a single slot recovers the
  // per-operator column ratios ||T_i e_c|| / ||e_c||
  for (int i = 0; i < k; ++i) {
    for (int c = 0; c < n; ++c) {
      xs[i].setZero();
      xs[i][c] = 1.0;
      best = std::max(best, tuple_ratio(Ts, X, xs));
    }
    xs[i].setZero();
  }

  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    for (int i = 0; i < k; ++i) {
      xs[i].resize(n);
      for (int c = 0; c < n; ++c) xs[i][c] = rng.cnormal();
    }
    best = std::max(best, tuple_ratio(Ts, X, xs));
  }
  return best;
}

}  // namespace interplab
