#pragma once

#include "interplab/banach.hpp"
#include "interplab/grid.hpp"

namespace interplab {

// Representation of x as a discrete integral h * sum_k f(t_k) = x.
struct MeanRepresentation {
  GridFunction gf;
  Eigen::VectorXcd target;
  double residual = 0.0;  // ||h*sum f - x||_{X0+X1}
};

// || t -> e^{t(j-theta)} f(t) ||_{L^{p_j}(X_j)} by the rectangle rule;
// p_j = inf takes the grid maximum.
double boundary_weighted_norm(const GridFunction& gf, const WeightedLrSpace& Xj,
                              double theta, int j, double pj);

// max_j boundary_weighted_norm(gf, X_j, theta, j, p_j)
double mean_objective(const GridFunction& gf, const BanachCouple& couple,
                      const InterpParams& params);

// default working grid [-L, L), L = 30/min(theta, 1-theta)
GridFunction default_mean_grid(const InterpParams& params, int n, double h = 0.1);

// Feasible representation by telescoping near-optimal splittings: with
// (x0^(k), x1^(k)) from the K-solver at t = e^k and the end assignments
// x0 = 0 / x0 = x, the differences u_k = x0^(k+1) - x0^(k) sum to x exactly;
// each u_k is spread uniformly over the unit bin [k, k+1) so that the bin's
// discrete integral equals u_k regardless of grid alignment.
MeanRepresentation construct_mean_representation(const BanachCouple& couple,
                                                 const InterpParams& params,
                                                 const Eigen::VectorXcd& x,
                                                 const GridFunction& grid);

struct BumpOptions {
  int samples_per_cell = 1;  // subcell averaging of the mollifier profile
};

// Replaces the content of every unit bin [k, k+1) by (bin mass) x phi(t - k),
// phi(u) = exp(-1/(u(1-u))) on (0,1), normalized discretely per bin so each
// bin mass -- hence the integral -- is preserved exactly.
GridFunction smooth_representation(const GridFunction& gf, const BumpOptions& opts = {});

// f restricted to [-n_cut, n_cut) with the two tail masses re-deposited as
// single-bin blocks on [n_cut-1, n_cut) and [-n_cut, -n_cut+1).
GridFunction truncate_representation(const GridFunction& gf, const BanachCouple& couple,
                                     double theta, int n_cut);

struct MeanMinimizeOptions {
  int max_iters = 5000;
  double cap_ratio = 1e4;   // drop cells whose boundary weight dwarfs the best cells
  double band = 0.05;       // relative band for the sup-norm subgradient average
  double stall_tol = 1e-6;  // relative improvement that counts as progress
  int stall_iters = 300;
};

struct MeanMinimizeResult {
  MeanRepresentation rep;
  double value = 0.0;
  bool hit_iteration_cap = false;
};

// Projected subgradient descent on the max-of-norms objective over the affine
// set {h * sum f = x}; monotone best tracking, so the returned value never
// exceeds the objective of the telescoped initialization.
MeanMinimizeResult minimize_mean_norm(const BanachCouple& couple, const InterpParams& params,
                                      const Eigen::VectorXcd& x, const GridFunction& grid,
                                      const MeanMinimizeOptions& opts = {});

}  // namespace interplab
