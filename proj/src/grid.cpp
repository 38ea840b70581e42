#include "interplab/grid.hpp"

#include <cstdio>
#include <stdexcept>

namespace interplab {

void GridFunction::validate() const {
  if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(t0))
    throw std::invalid_argument("GridFunction: h must be positive and finite");
  if (values.rows() < 1 || values.cols() < 1)
    throw std::invalid_argument("GridFunction: empty grid");
}

Eigen::VectorXcd GridFunction::integral() const {
  validate();
  return h * values.colwise().sum().transpose();
}

GridFunction GridFunction::symmetric(double T, int m, int n) {
  if (!(T > 0.0) || m < 1 || n < 1)
    throw std::invalid_argument("GridFunction::symmetric: need T > 0, m >= 1, n >= 1");
  GridFunction g;
  g.t0 = -T;
  g.h = 2.0 * T / m;
  g.values = Eigen::MatrixXcd::Zero(m, n);
  return g;
}

GridFunction GridFunction::like(const GridFunction& src) {
  GridFunction g;
  g.t0 = src.t0;
  g.h = src.h;
  g.values = Eigen::MatrixXcd::Zero(src.values.rows(), src.values.cols());
  return g;
}

void write_csv(const GridFunction& g, const std::string& path) {
  g.validate();
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("write_csv: cannot open " + path);
  std::fprintf(f, "t");
  for (int j = 0; j < g.n(); ++j) std::fprintf(f, ",re%d,im%d", j, j);
  std::fprintf(f, "\n");
  for (int k = 0; k < g.m(); ++k) {
    std::fprintf(f, "%.12e", g.t(k));
    for (int j = 0; j < g.n(); ++j)
      std::fprintf(f, ",%.12e,%.12e", g.values(k, j).real(), g.values(k, j).imag());
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

}  // namespace interplab
