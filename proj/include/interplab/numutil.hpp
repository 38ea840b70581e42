#pragma once

#include <cmath>

namespace interplab {

// Smallest power of two >= s (s > 0).  Dividing by it is exact in binary
// floating point, so normalizing an input by this scale changes no mantissa
// bits: iterative solvers then follow bit-identical paths under x -> s x.
inline double pow2_ceil(double s) {
  int e;
  const double f = std::frexp(s, &e);  // s = f * 2^e, f in [0.5, 1)
  (void)f;
  return std::ldexp(1.0, e);
}

}  // namespace interplab
