// Python surface for the core operations: spaces and couples, the
// K-functional, interpolation norms, the strip upper bound, sign averages,
// and the sectoriality scans.
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "interplab/applications.hpp"
#include "interplab/banach.hpp"
#include "interplab/mean.hpp"
#include "interplab/rademacher.hpp"
#include "interplab/sectorial.hpp"
#include "interplab/spaces.hpp"
#include "interplab/strip.hpp"

namespace py = pybind11;
using namespace interplab;

PYBIND11_MODULE(_interplab, m) {
  m.doc() = "weighted sequence-space interpolation toolbox";
  m.attr("__version__") = "0.1.0";

  py::class_<WeightedLrSpace>(m, "Space", "weighted l^r norm on C^n")
      .def(py::init([](double r, const Eigen::VectorXd& weights) {
             auto s = WeightedLrSpace::weighted_lr(r, weights);
             s.validate();
             return s;
           }),
           py::arg("r"), py::arg("weights"))
      .def_property_readonly("r", [](const WeightedLrSpace& s) { return s.r; })
      .def_property_readonly("weights", [](const WeightedLrSpace& s) { return s.weights; })
      .def_property_readonly("dim", &WeightedLrSpace::dim)
      .def("norm", [](const WeightedLrSpace& s, const Eigen::VectorXcd& x) {
        return space_norm(s, x);
      });

  py::class_<BanachCouple>(m, "Couple", "pair of spaces on the same coordinates")
      .def(py::init([](const WeightedLrSpace& X0, const WeightedLrSpace& X1) {
             BanachCouple c{X0, X1};
             c.validate();
             return c;
           }),
           py::arg("X0"), py::arg("X1"))
      .def_readonly("X0", &BanachCouple::X0)
      .def_readonly("X1", &BanachCouple::X1);

  py::class_<InterpParams>(m, "Params", "interpolation parameters (theta, p0, p1)")
      .def(py::init([](double theta, double p0, double p1, double q0, double q1) {
             InterpParams prm;
             prm.theta = theta;
             prm.p0 = p0;
             prm.p1 = p1;
             prm.q0 = q0;
             prm.q1 = q1;
             prm.validate();
             return prm;
           }),
           py::arg("theta"), py::arg("p0"), py::arg("p1"), py::arg("q0") = 0.0,
           py::arg("q1") = 0.0)
      .def_readonly("theta", &InterpParams::theta)
      .def_readonly("p0", &InterpParams::p0)
      .def_readonly("p1", &InterpParams::p1)
      .def_property_readonly("p", &InterpParams::p);

  m.def(
      "k_functional",
      [](const BanachCouple& couple, const Eigen::VectorXcd& x, double t) {
        const Decomposition d = k_functional(couple, x, t);
        return py::make_tuple(d.value, d.x0, d.x1);
      },
      py::arg("couple"), py::arg("x"), py::arg("t"),
      "best found splitting cost (value, x0, x1) for ||x0||_X0 + t ||x1||_X1");

  m.def(
      "k_oracle",
      [](const BanachCouple& couple, const Eigen::VectorXcd& x, double t, double density) {
        return k_functional_oracle(couple, x, t, density);
      },
      py::arg("couple"), py::arg("x"), py::arg("t"), py::arg("density") = 1e-3,
      "exhaustive-search reference value (dim <= 2 real, dim 1 complex)");

  m.def(
      "interp_norm",
      [](const BanachCouple& couple, const InterpParams& params, const Eigen::VectorXcd& x) {
        return real_interp_norm(couple, params, x);
      },
      py::arg("couple"), py::arg("params"), py::arg("x"),
      "quadrature norm of t^-theta K(t, x) in L^p(dt/t)");

  m.def(
      "strip_norm_upper",
      [](const BanachCouple& couple, const InterpParams& params, const Eigen::VectorXcd& x,
         double L, double h, int max_iters) {
        const int mrows = static_cast<int>(std::lround(2.0 * L / h));
        MeanMinimizeOptions opts;
        opts.max_iters = max_iters;
        return complex_norm_upper(couple, params, x, GridFunction::symmetric(L, mrows, couple.X0.dim()),
                                  opts);
      },
      py::arg("couple"), py::arg("params"), py::arg("x"), py::arg("L") = 60.0,
      py::arg("h") = 0.1, py::arg("max_iters") = 3000,
      "upper bound from the analytic-family route on a [-L, L) grid");

  m.def(
      "rademacher_average",
      [](const WeightedLrSpace& space, const std::vector<Eigen::VectorXcd>& xs) {
        return rademacher_average(space, xs);
      },
      py::arg("space"), py::arg("xs"),
      "exact enumeration of the quadratic sign average");

  m.def(
      "r_bound_lower",
      [](const std::vector<Eigen::MatrixXcd>& Ts, const WeightedLrSpace& space, int trials,
         std::uint64_t seed) { return r_bound_lower(Ts, space, trials, seed); },
      py::arg("operators"), py::arg("space"), py::arg("trials") = 50, py::arg("seed") = 17,
      "sampled lower bound for the joint boundedness constant");

  m.def(
      "resolvent_sup",
      [](const Eigen::MatrixXcd& A, const WeightedLrSpace& space, double sigma) {
        return resolvent_sup(MatrixOperator::make(A), space, sigma);
      },
      py::arg("A"), py::arg("space"), py::arg("sigma"),
      "sup of ||z (z - A)^-1|| outside the closed sector of half-angle sigma "
      "(inf when the spectrum leaves the sector)");

  m.def(
      "sectoriality_angle",
      [](const Eigen::MatrixXcd& A, const WeightedLrSpace& space) {
        const SectorialityResult res = sectoriality_angle(MatrixOperator::make(A), space);
        return py::make_tuple(res.omega, res.not_sectorial);
      },
      py::arg("A"), py::arg("space"),
      "(omega, not_sectorial): smallest half-angle with finite resolvent sup");

  m.def(
      "weighted_equivalence_check",
      [](int n, double p0, double p1, const Eigen::VectorXd& w0, const Eigen::VectorXd& w1,
         double theta, int samples, std::uint64_t seed) {
        WeightedEquivalenceOptions opts;
        opts.seed = seed;
        const WeightedEquivalenceReport rep =
            weighted_equivalence_check(n, p0, p1, w0, w1, theta, samples, opts);
        py::dict out;
        out["min_ratio"] = rep.min_ratio;
        out["max_ratio"] = rep.max_ratio;
        out["samples"] = rep.samples;
        out["pass"] = rep.pass;
        return out;
      },
      py::arg("n"), py::arg("p0"), py::arg("p1"), py::arg("w0"), py::arg("w1"),
      py::arg("theta"), py::arg("samples") = 30, py::arg("seed") = 23,
      "ratio band between the interpolated norm and the interpolated-weight norm");
}
