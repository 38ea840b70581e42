#pragma once

#include <Eigen/Dense>

#include "interplab/spaces.hpp"

namespace interplab {

// Splitting x = x0 + x1 together with the achieved objective
// ||x0||_{X0} + t ||x1||_{X1}.
struct Decomposition {
  double t = 1.0;
  Eigen::VectorXcd x0, x1;
  double value = 0.0;
};

struct KOptions {
  double tol = 1e-8;       // relative convergence target
  int max_iters = 400;     // gradient-descent budget per smoothing stage
  int coarse_points = 17;  // colinear 1-D search resolution
};

// K(t, x; X0, X1) = inf { ||x0||_{X0} + t ||x1||_{X1} : x0 + x1 = x }.
// Smoothed gradient descent over free splittings, with colinear
// initialization; the returned value is the exact objective of the returned
// (feasible) decomposition, hence always an upper bound for the infimum.
Decomposition k_functional(const BanachCouple& couple, const Eigen::VectorXcd& x,
                           double t, const KOptions& opts = {});

double sum_norm(const BanachCouple& couple, const Eigen::VectorXcd& x);
double intersection_norm(const BanachCouple& couple, const Eigen::VectorXcd& x);

struct OracleResult {
  double value = 0.0;          // best objective found on the search grid
  double certified_gap = 0.0;  // value - (certified lower bound)
};

// Brute-force reference for K: exhaustive uniform grid over splittings
// (components of x0 confined to the segments [0, x_i], which always contain
// a minimizer for absolute monotone norms), followed by a Lipschitz
// branch-and-bound refinement over the same box.  Supports dim <= 2 for
// real x and dim 1 for complex x (2-real-dimensional split).
OracleResult k_functional_oracle_full(const BanachCouple& couple,
                                      const Eigen::VectorXcd& x, double t,
                                      double grid_density = 1e-3);
double k_functional_oracle(const BanachCouple& couple, const Eigen::VectorXcd& x,
                           double t, double grid_density = 1e-3);

struct QuadOptions {
  double du = 0.05;      // base log-t step
  double U = 0.0;        // half-width of the log-t window; 0 = automatic
  double tail_tol = 1e-9;
  double quad_tol = 1e-8;  // relative target for the adaptive refinement
  int max_points = 60000;
  KOptions solver;
};

// || t^{-theta} K(t, x) ||_{L^p((0,inf), dt/t)} by trapezoid quadrature in
// u = log t with adaptive kink refinement, plus certified analytic tail
// majorants from K <= min(||x||_{X0}, t ||x||_{X1}).  For p = inf the grid
// supremum is returned after local peak refinement; tail majorants are
// checked against tail_tol in both cases.
double real_interp_norm(const BanachCouple& couple, const InterpParams& params,
                        const Eigen::VectorXcd& x, const QuadOptions& quad = {});

// closed form for the scalar couple (w0 = a, w1 = b):
// a^{1-theta} b^{theta} * (1/((1-theta)p) + 1/(theta p))^{1/p}, p < inf;
// a^{1-theta} b^{theta}, p = inf.  (Used by tests and the CLI assertions.)
double scalar_interp_norm_closed_form(double a, double b, double theta, double p);

}  // namespace interplab
