#include "interplab/expm.hpp"

#include <cmath>
#include <stdexcept>

namespace interplab {

// Higham's degree-13 Pade coefficients and the matching ||A||_1 threshold.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("expm: square matrix required");
  if (!A.allFinite()) throw std::invalid_argument("expm: entries must be finite");
  static const double b[14] = {64764752532480000.0,
                               32382376266240000.0,
                               7771770303897600.0,
                               1187353796428800.0,
                               129060195264000.0,
                               10559470521600.0,
                               670442572800.0,
                               33522128640.0,
                               1323241920.0,
                               40840800.0,
                               960960.0,
                               16380.0,
                               182.0,
                               1.0};
  const double theta13 = 5.371920351148152;
  const int n = static_cast<int>(A.rows());
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);

  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > theta13) s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const Eigen::MatrixXcd As = A / std::ldexp(1.0, s);

  const Eigen::MatrixXcd A2 = As * As;
  const Eigen::MatrixXcd A4 = A2 * A2;
  const Eigen::MatrixXcd A6 = A2 * A4;
  const Eigen::MatrixXcd U =
      As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
            b[3] * A2 + b[1] * I);
  const Eigen::MatrixXcd V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) +
                             b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;

  Eigen::MatrixXcd R = (V - U).partialPivLu().solve(V + U);
  for (int k = 0; k < s; ++k) R = R * R;
  return R;
}

}  // namespace interplab
