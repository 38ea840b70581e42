#pragma once

#include <Eigen/Dense>

namespace interplab {

// Matrix exponential via Pade(13) scaling and squaring.  Accurate to
// ~1e-13 relative for well-conditioned problems; the degree-13 form is
// used unconditionally (cheap at the matrix sizes we care about).
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& A);

}  // namespace interplab
