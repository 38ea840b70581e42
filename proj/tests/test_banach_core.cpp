#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "interplab/banach.hpp"
#include "interplab/rng.hpp"

using namespace interplab;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

namespace {

VectorXcd cvec(std::initializer_list<complex<double>> v) {
  VectorXcd x(static_cast<int>(v.size()));
  int i = 0;
  for (auto& c : v) x[i++] = c;
  return x;
}

WeightedLrSpace random_space(Rng& rng, int dim) {
  const double rs[3] = {1.0, 2.0, kInf};
  VectorXd w(dim);
  for (int i = 0; i < dim; ++i) w[i] = rng.log_uniform(0.1, 10.0);
  return WeightedLrSpace::weighted_lr(rs[rng.uniform_int(3)], w);
}

BanachCouple random_couple(Rng& rng, int dim) {
  return BanachCouple{random_space(rng, dim), random_space(rng, dim)};
}

}  // namespace

TEST_CASE("space norms: examples and properties") {
  auto l2 = WeightedLrSpace::lr(2, 2.0);
  CHECK(space_norm(l2, cvec({3.0, 4.0})) == doctest::Approx(5.0).epsilon(1e-14));

  VectorXd w(2);
  w << 2.0, 0.5;
  auto l1w = WeightedLrSpace::weighted_lr(1.0, w);
  CHECK(space_norm(l1w, cvec({1.0, 4.0})) == doctest::Approx(4.0).epsilon(1e-14));

  auto linfw = WeightedLrSpace::weighted_lr(kInf, w);
  CHECK(space_norm(linfw, cvec({1.0, 4.0})) == doctest::Approx(2.0).epsilon(1e-14));

  // homogeneity and triangle inequality on sampled data
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(5));
    auto X = random_space(rng, n);
    VectorXcd x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.cnormal();
      y[i] = rng.cnormal();
    }
    const complex<double> lam = rng.cnormal();
    const double nx = space_norm(X, x);
    CHECK(std::abs(space_norm(X, lam * x) - std::abs(lam) * nx) <=
          1e-12 * std::max(1.0, std::abs(lam) * nx));
    CHECK(space_norm(X, x + y) <= space_norm(X, x) + space_norm(X, y) + 1e-12);
  }

  CHECK_THROWS_AS(space_norm(l2, cvec({1.0})), std::invalid_argument);
  VectorXd bad(1);
  bad << -1.0;
  CHECK_THROWS_AS(WeightedLrSpace::weighted_lr(2.0, bad).validate(), std::invalid_argument);
  CHECK_THROWS_AS(WeightedLrSpace::lr(2, 0.5), std::invalid_argument);
}

TEST_CASE("derived exponents") {
  CHECK(derived_exponent(1.0, 1.0, 0.3) == doctest::Approx(1.0));
  CHECK(derived_exponent(kInf, kInf, 0.3) == kInf);
  // 1/p = (1-th)/2 + th/inf
  CHECK(derived_exponent(2.0, kInf, 0.5) == doctest::Approx(4.0));
  CHECK(derived_exponent(1.0, 2.0, 0.5) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("k_functional: pinned examples") {
  // equal spaces: K(t, x) = min(1, t) ||x||
  Rng rng(11);
  auto X = random_space(rng, 3);
  BanachCouple eq{X, X};
  VectorXcd x(3);
  for (int i = 0; i < 3; ++i) x[i] = rng.cnormal();
  const double nx = space_norm(X, x);
  for (double t : {0.1, 0.7, 1.0, 3.0, 25.0}) {
    const double k = k_functional(eq, x, t).value;
    CHECK(std::abs(k - std::min(1.0, t) * nx) <= 1e-9 * nx);
  }

  // scalar couple: K(t, x) = min(w0, t w1) |x|
  VectorXd a(1), b(1);
  a << 2.0;
  b << 3.0;
  BanachCouple sc{WeightedLrSpace::weighted_lr(1.0, a), WeightedLrSpace::weighted_lr(1.0, b)};
  CHECK(k_functional(sc, cvec({1.0}), 0.5).value == doctest::Approx(1.5).epsilon(1e-10));

  // l1/l1: K = sum_i min(w0_i, t w1_i) |x_i|
  VectorXd w0(2), w1(2);
  w0 << 1.0, 4.0;
  w1 << 2.0, 1.0;
  BanachCouple c11{WeightedLrSpace::weighted_lr(1.0, w0), WeightedLrSpace::weighted_lr(1.0, w1)};
  const auto d = k_functional(c11, cvec({1.0, 1.0}), 1.0);
  CHECK(d.value == doctest::Approx(2.0).epsilon(1e-10));
  // feasibility is structural
  CHECK((d.x0 + d.x1 - cvec({1.0, 1.0})).norm() == 0.0);

  // (l1, linf) with unit weights, x = (1,1): K(t) = min(t, 2) for t <= 2
  BanachCouple c1i{WeightedLrSpace::lr(2, 1.0), WeightedLrSpace::lr(2, kInf)};
  CHECK(k_functional(c1i, cvec({1.0, 1.0}), 1.5).value == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(k_functional(c1i, cvec({1.0, 1.0}), 3.0).value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("k_functional: invariants on sampled instances") {
  Rng rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(4));
    auto c = random_couple(rng, n);
    VectorXcd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.cnormal();
    const double A = space_norm(c.X0, x), B = space_norm(c.X1, x);
    const double t1 = rng.log_uniform(0.05, 20.0);
    const double t3 = t1 * rng.log_uniform(1.5, 8.0);
    const double t2 = 0.5 * (t1 + t3);
    const double k1 = k_functional(c, x, t1).value;
    const double k2 = k_functional(c, x, t2).value;
    const double k3 = k_functional(c, x, t3).value;
    const double slack = 1e-7 * (A + B);
    CHECK(k1 <= k2 + slack);   // nondecreasing
    CHECK(k3 <= k1 + slack + std::min(A, t3 * B) - 0.0);  // sanity
    CHECK(k2 >= 0.5 * (k1 + k3) - slack);  // midpoint concavity in t
    CHECK(k1 <= std::min(A, t1 * B) + slack);
    CHECK(k_functional(c, x, 0.0).value <= slack);

    // homogeneity: the solve path is scale-equivariant, so agreement is far
    // tighter than solver tolerance, but kink endgames under complex phase
    // rotation keep it off exact-ulp scale
    const complex<double> lam = 3.7 * std::exp(complex<double>(0, 1.1));
    const double kl = k_functional(c, lam * x, t1).value;
    CHECK(std::abs(kl - std::abs(lam) * k1) <= 1e-9 * std::abs(lam) * std::max(k1, 1e-30));
  }
}

TEST_CASE("k_functional_oracle: pinned example and certification") {
  VectorXd w0(2), w1(2);
  w0 << 1.0, 4.0;
  w1 << 2.0, 1.0;
  BanachCouple c11{WeightedLrSpace::weighted_lr(1.0, w0), WeightedLrSpace::weighted_lr(1.0, w1)};
  const double o = k_functional_oracle(c11, cvec({1.0, 1.0}), 1.0, 1e-3);
  CHECK(std::abs(o - k_functional(c11, cvec({1.0, 1.0}), 1.0).value) <= 1e-3 * o);

  // t -> 0 drives the oracle to 0
  CHECK(k_functional_oracle(c11, cvec({1.0, 1.0}), 1e-9, 1e-2) <= 1e-8);

  // solver certification on random real instances, n <= 2
  Rng rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(2));
    auto c = random_couple(rng, n);
    VectorXcd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);
    for (double t : {0.3, 1.0, 4.2}) {
      const auto ora = k_functional_oracle_full(c, x, t, 1e-3);
      const double sol = k_functional(c, x, t).value;
      CHECK(std::abs(sol - ora.value) <= 1e-4 * std::max(ora.value, 1e-12));
    }
  }
}

TEST_CASE("field alignment: 2-D grid oracle vs colinear closed form, n = 1 complex") {
  Rng rng(41);
  for (int trial = 0; trial < 8; ++trial) {
    VectorXd w0(1), w1(1);
    w0 << rng.log_uniform(0.2, 5.0);
    w1 << rng.log_uniform(0.2, 5.0);
    BanachCouple c{WeightedLrSpace::weighted_lr(1.0, w0), WeightedLrSpace::weighted_lr(1.0, w1)};
    VectorXcd x(1);
    x[0] = rng.cnormal();
    const double t = rng.log_uniform(0.2, 5.0);
    const double colinear = std::min(w0[0], t * w1[0]) * std::abs(x[0]);
    const double o = k_functional_oracle(c, x, t, 1e-3);
    CHECK(std::abs(o - colinear) <= 1e-6 * std::max(colinear, 1e-12));
  }
}

TEST_CASE("real_interp_norm: scalar closed forms") {
  for (double theta : {0.25, 0.5, 0.75}) {
    for (double p : {1.0, 2.0, kInf}) {
      for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}}) {
        VectorXd wa(1), wb(1);
        wa << a;
        wb << b;
        BanachCouple c{WeightedLrSpace::weighted_lr(1.0, wa),
                       WeightedLrSpace::weighted_lr(1.0, wb)};
        InterpParams prm;
        prm.theta = theta;
        prm.p0 = prm.p1 = p;
        const double got = real_interp_norm(c, prm, cvec({1.0}));
        const double want = scalar_interp_norm_closed_form(a, b, theta, p);
        CHECK(std::abs(got - want) <= 1e-6 * want);
      }
    }
  }
  // the two spot values called out in the docs
  {
    VectorXd one(1);
    one << 1.0;
    BanachCouple c{WeightedLrSpace::weighted_lr(1.0, one), WeightedLrSpace::weighted_lr(1.0, one)};
    InterpParams prm;
    prm.theta = 0.5;
    prm.p0 = prm.p1 = kInf;
    CHECK(std::abs(real_interp_norm(c, prm, cvec({1.0})) - 1.0) <= 1e-6);
    prm.p0 = prm.p1 = 2.0;
    CHECK(std::abs(real_interp_norm(c, prm, cvec({1.0})) - std::sqrt(2.0)) <= 1e-6 * std::sqrt(2.0));
  }
}

TEST_CASE("real_interp_norm: equal-spaces reduction and homogeneity") {
  Rng rng(53);
  auto X = random_space(rng, 3);
  BanachCouple eq{X, X};
  VectorXcd x(3);
  for (int i = 0; i < 3; ++i) x[i] = rng.cnormal();
  const double nx = space_norm(X, x);
  for (double theta : {0.3, 0.5}) {
    for (double p : {1.0, 2.0, kInf}) {
      InterpParams prm;
      prm.theta = theta;
      prm.p0 = prm.p1 = p;
      const double got = real_interp_norm(eq, prm, x);
      const double want = scalar_interp_norm_closed_form(1.0, 1.0, theta, p) * nx;
      CHECK(std::abs(got - want) <= 2e-6 * want);
    }
  }

  auto c = random_couple(rng, 2);
  VectorXcd y(2);
  y << rng.cnormal(), rng.cnormal();
  InterpParams prm;
  prm.theta = 0.4;
  prm.p0 = 1.0;
  prm.p1 = 2.0;
  const double v = real_interp_norm(c, prm, y);
  const double vl = real_interp_norm(c, prm, VectorXcd(2.5 * y));
  CHECK(std::abs(vl - 2.5 * v) <= 5e-12 * 2.5 * v);

  CHECK(real_interp_norm(c, prm, VectorXcd::Zero(2)) == 0.0);
}
