#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "interplab/spaces.hpp"

namespace interplab {

// L^2 average of || sum_i eps_i x_i || over all 2^k sign patterns,
// computed by exact enumeration.  Each pattern's sum is accumulated
// fresh (no running updates), so the multiset of pattern norms -- and
// hence the result -- is bit-for-bit invariant under flipping the sign
// of any single x_i, and scales exactly under power-of-two dilations.
// Throws UnsupportedError for k > 20 (cost grows as k * 2^k).
double rademacher_average(const WeightedLrSpace& X,
                          const std::vector<Eigen::VectorXcd>& xs);

// Lower bound for the smallest constant C with
//   avg || sum eps_i T_i x_i ||  <=  C * avg || sum eps_i x_i ||
// over tuples (x_i), obtained as the best ratio over one-hot tuples
// (a single coordinate vector in a single slot) plus `trials` random
// complex Gaussian tuples.  For k == 1 this reduces to an operator-norm
// lower bound through the same sampler.  Throws UnsupportedError for
// k > 12.
double r_bound_lower(const std::vector<Eigen::MatrixXcd>& Ts,
                     const WeightedLrSpace& X, int trials,
                     std::uint64_t seed = 17);

}  // namespace interplab
