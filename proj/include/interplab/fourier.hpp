#pragma once

#include "interplab/grid.hpp"

namespace interplab {

// Transforms use the convention
//   forward:  g^(xi) = h * sum_k g(t_k) e^{-i t_k xi}
//   inverse:  g~(t)  = dxi * sum_l G(xi_l) e^{+i t xi_l}     (no 1/(2pi))
// so inverse(forward(g)) recovers 2*pi*g on band-concentrated inputs.
// Both land on the canonical dual grid of the input: xi in [-pi/h, pi/h)
// with dxi = 2*pi/(m*h).
enum class FourierPath {
  fast,   // FFT with explicit shift phase factors
  direct  // O(m^2) reference summation, independent of the FFT library
};

// the canonical dual grid (zero values), xi_l = -pi/h + l * 2*pi/(m*h)
GridFunction fourier_dual_grid(const GridFunction& gf);

GridFunction fourier_forward(const GridFunction& gf, FourierPath path = FourierPath::fast);
GridFunction fourier_inverse(const GridFunction& gf, FourierPath path = FourierPath::fast);

}  // namespace interplab
