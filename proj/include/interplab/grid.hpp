#pragma once

#include <Eigen/Dense>
#include <string>

#include "interplab/errors.hpp"

namespace interplab {

// Vector-valued function sampled on a uniform grid t_k = t0 + k*h,
// k = 0..m-1 (right endpoint excluded for symmetric grids).  The discrete
// integral is the rectangle rule h * sum_k values.row(k).
struct GridFunction {
  double t0 = 0.0;
  double h = 1.0;
  Eigen::MatrixXcd values;  // m x n

  int m() const { return static_cast<int>(values.rows()); }
  int n() const { return static_cast<int>(values.cols()); }
  double t(int k) const { return t0 + k * h; }
  double t_end() const { return t0 + m() * h; }
  void validate() const;

  Eigen::VectorXcd integral() const;

  // grid over [-T, T) with m nodes, h = 2T/m
  static GridFunction symmetric(double T, int m, int n);
  static GridFunction like(const GridFunction& g);  // same grid, zero values
};

// CSV with header "t,re0,im0,..." one row per node, %.12e formatting
void write_csv(const GridFunction& g, const std::string& path);

}  // namespace interplab
