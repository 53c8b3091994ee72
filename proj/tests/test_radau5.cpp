#include <doctest.h>

#include <cmath>

#include "kitesim/error.hpp"
#include "kitesim/radau5.hpp"

using namespace kitesim;

namespace {

Radau5Options options(int n, double atol) {
  Radau5Options o;
  o.atol = VecX::Constant(n, atol);
  o.rtol = 0.0;
  o.h_max = 0.5;
  o.max_steps = 100000;
  return o;
}

// y' = -lambda (y - cos t) - sin t, exact solution cos t from y(0) = 1.
OdeFunction stiff_scalar(double lambda) {
  return [lambda](double t, const VecX& y, VecX& yd) {
    yd.resize(1);
    yd(0) = -lambda * (y(0) - std::cos(t)) - std::sin(t);
  };
}

double stiff_error(double atol) {
  Radau5 solver(stiff_scalar(1e6), options(1, atol));
  VecX y = VecX::Ones(1);
  double t = 0.0;
  solver.integrate(t, y, 10.0);
  return std::abs(y(0) - std::cos(10.0));
}

}  // namespace

TEST_CASE("stiff linear problem stays on the slow manifold") {
  Radau5 solver(stiff_scalar(1e6), options(1, 1e-8));
  VecX y = VecX::Ones(1);
  double t = 0.0;
  for (int k = 1; k <= 200; ++k) {
    solver.integrate(t, y, 0.05 * k);
    CHECK(t == doctest::Approx(0.05 * k).epsilon(1e-14));
    CHECK(std::abs(y(0) - std::cos(t)) < 1e-6);
  }
  // An explicit method would need ~1e7 steps here.
  CHECK(solver.stats().accepted < 2000);
}

TEST_CASE("error shrinks with the tolerance") {
  const double coarse = stiff_error(1e-4);
  const double fine = stiff_error(1e-9);
  MESSAGE("errors " << coarse << " " << fine);
  CHECK(fine < coarse);
  CHECK(fine < 1e-7);
}

TEST_CASE("harmonic oscillator over ten periods") {
  const OdeFunction f = [](double, const VecX& y, VecX& yd) {
    yd.resize(2);
    yd << y(1), -y(0);
  };
  Radau5 solver(f, options(2, 1e-10));
  VecX y(2);
  y << 1.0, 0.0;
  double t = 0.0;
  solver.integrate(t, y, 20.0 * M_PI);
  CHECK(y(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(y(1)) < 1e-6);
}

TEST_CASE("Robertson kinetics conserve mass") {
  const OdeFunction f = [](double, const VecX& y, VecX& yd) {
    yd.resize(3);
    yd(0) = -0.04 * y(0) + 1e4 * y(1) * y(2);
    yd(2) = 3e7 * y(1) * y(1);
    yd(1) = -yd(0) - yd(2);
  };
  Radau5Options o = options(3, 1e-10);
  o.atol(1) = 1e-14;
  o.rtol = 1e-8;
  o.h_max = 100.0;
  Radau5 solver(f, o);
  VecX y(3);
  y << 1.0, 0.0, 0.0;
  double t = 0.0;
  solver.integrate(t, y, 40.0);
  CHECK(y.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(y(0) == doctest::Approx(0.7158).epsilon(1e-3));
}

TEST_CASE("exhausted step budget is a solver failure") {
  Radau5Options o = options(1, 1e-12);
  o.max_steps = 3;
  o.h_max = 1e-3;
  Radau5 solver(stiff_scalar(1.0), o);
  VecX y = VecX::Ones(1);
  double t = 0.0;
  try {
    solver.integrate(t, y, 1.0);
    FAIL("expected solver failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SolverFailure);
  }
}
