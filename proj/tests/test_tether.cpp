#include <doctest.h>

#include <cmath>
#include <random>

#include "kitesim/error.hpp"
#include "kitesim/radau5.hpp"
#include "kitesim/tether.hpp"

using namespace kitesim;

namespace {

Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3(u(rng), u(rng), u(rng));
}

// Chain of n segments hanging straight down from the anchor at rest lengths.
VecX hanging_state(const TetherChain& chain) {
  const int n = chain.params.n_segments;
  const double l_s = chain.rest_length(0.0);
  VecX y = VecX::Zero(chain.dimension());
  for (int i = 0; i < n; ++i) y.segment<3>(3 * i) = chain.anchor - Vec3(0, 0, (i + 1) * l_s);
  return y;
}

Radau5 make_solver(const TetherChain& chain, double pos_tol, double vel_tol) {
  Radau5Options opt;
  const int n = chain.params.n_segments;
  opt.atol = VecX::Constant(chain.dimension(), pos_tol);
  opt.atol.tail(3 * n).setConstant(vel_tol);
  opt.h_max = 0.05;
  opt.max_steps = 100000;
  return Radau5([&chain](double t, const VecX& y, VecX& yd) { yd = chain.derivative(t, y); }, opt);
}

}  // namespace

TEST_CASE("segment rest length") {
  CHECK(segment_rest_length({392.0, 0.0, 0.0}, 5.0, 7) == doctest::Approx(56.0));
  CHECK(segment_rest_length({392.0, 2.0, 0.0}, 1.0, 7) == doctest::Approx(56.2857).epsilon(1e-6));
  CHECK(segment_rest_length({392.0, -7.28, 0.0}, 10.0, 7) == doctest::Approx(45.6));
  try {
    segment_rest_length({10.0, -8.0, 0.0}, 2.0, 7);
    FAIL("expected reel-in exhausted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ReelInExhausted);
  }
  CHECK(segment_rest_length({7.0, 0.0, 0.0}, 0.0, 7, 1.5) == 1.5);
}

TEST_CASE("segment constants") {
  TetherParams p;
  const auto [k, c] = segment_constants(p, 50.0);
  CHECK(k == doctest::Approx(12292.0));
  CHECK(c == doctest::Approx(9.46));
  const auto [k2, c2] = segment_constants(p, 100.0);
  CHECK(k2 == doctest::Approx(k / 2));
  CHECK(c2 == doctest::Approx(c / 2));
}

TEST_CASE("spring force in extension and compression") {
  const double k = 12292.0;
  const Vec3 f = spring_force({Vec3(0, 0, 50.1), Vec3::Zero(), 50.0, k, 9.46}, 0.1);
  CHECK(f.z() == doctest::Approx(1229.2));
  CHECK(f.head<2>().norm() == 0.0);
  const Vec3 zero = spring_force({Vec3(0, 0, 50.0), Vec3::Zero(), 50.0, k, 9.46}, 0.1);
  CHECK(zero.norm() == doctest::Approx(0.0));
  const Vec3 comp = spring_force({Vec3(0, 0, 49.9), Vec3::Zero(), 50.0, k, 9.46}, 0.1);
  CHECK(comp.z() == doctest::Approx(-122.92));
  CHECK_THROWS_AS(spring_force({Vec3::Zero(), Vec3::Zero(), 50.0, k, 0.0}, 0.1), Error);
}

TEST_CASE("spring force is continuous at the rest length") {
  const double k = 12292.0;
  for (double eps : {1e-6, 1e-9}) {
    const double above = spring_force({Vec3(0, 0, 50.0 + eps), Vec3::Zero(), 50.0, k, 0.0}, 0.1).z();
    const double below = spring_force({Vec3(0, 0, 50.0 - eps), Vec3::Zero(), 50.0, k, 0.0}, 0.1).z();
    CHECK(std::abs(above - below) < 2 * k * eps);
  }
}

TEST_CASE("segment drag") {
  TetherParams p;
  const Vec3 s(0, 0, 50.0);
  CHECK(segment_drag(Vec3(0, 0, 10), Vec3::Zero(), Vec3::Zero(), s, 1.225, p).norm() == 0.0);
  CHECK(segment_drag(Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), s, 1.225, p).norm() == 0.0);
  const Vec3 d = segment_drag(Vec3(10, 0, 0), Vec3::Zero(), Vec3::Zero(), s, 1.225, p);
  CHECK(d.norm() == doctest::Approx(11.76));
  CHECK(d.x() > 0.0);
}

TEST_CASE("segment drag is perpendicular to the segment for random inputs") {
  TetherParams p;
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 s = random_vec(rng, 60.0);
    const Vec3 d = segment_drag(random_vec(rng, 15.0), random_vec(rng, 5.0), random_vec(rng, 5.0),
                                s, 1.2, p);
    CHECK(std::abs(d.dot(s)) <= 1e-10 * d.norm() * s.norm() + 1e-300);
  }
}

TEST_CASE("internal spring forces cancel over the chain") {
  TetherParams p;
  p.c_d_t = 0.0;
  p.sigma = 1e-300;  // isolate the springs
  std::mt19937_64 rng(3);
  std::vector<Vec3> pos(p.n_segments + 1), vel(p.n_segments + 1);
  for (int i = 0; i <= p.n_segments; ++i) {
    pos[i] = Vec3(0, 0, 56.0 * i) + random_vec(rng, 3.0);
    vel[i] = random_vec(rng, 2.0);
  }
  const auto f = particle_forces({pos, vel, 56.0, 0.0, nullptr}, p);
  Vec3 sum = Vec3::Zero();
  for (const Vec3& v : f) sum += v;
  CHECK(sum.norm() < 1e-9);
}

TEST_CASE("straight vertical tether at rest lengths feels gravity only") {
  TetherParams p;
  std::vector<Vec3> pos(p.n_segments + 1), vel(p.n_segments + 1, Vec3::Zero());
  for (int i = 0; i <= p.n_segments; ++i) pos[i] = Vec3(0, 0, 56.0 * i);
  const auto f = particle_forces({pos, vel, 56.0, 0.0, nullptr}, p);
  const auto m = particle_masses(p, 56.0);
  for (int i = 1; i < p.n_segments; ++i) {
    CHECK(f[i].head<2>().norm() == 0.0);
    CHECK(f[i].z() == doctest::Approx(-m[i] * kGravity));
  }
}

TEST_CASE("reeling mass bookkeeping is exact") {
  TetherParams p;
  const ReelState reel{392.0, 2.5, 10.0};
  for (double t : {10.0, 10.013, 12.7, 40.0}) {
    const double l_s = segment_rest_length(reel, t, p.n_segments);
    const auto m = particle_masses(p, l_s);
    double total = 0.0;
    for (double mi : m) total += mi;
    CHECK(total == doctest::Approx(p.sigma * (reel.l_t_i + reel.v_t_o * (t - reel.t_i))).epsilon(1e-14));
  }
}

TEST_CASE("residual is zero for consistent derivatives and local in the velocity rows") {
  TetherChain chain;
  chain.reel = {392.0, 0.0, 0.0};
  const VecX y = hanging_state(chain);
  const VecX g = chain.derivative(0.0, y);
  CHECK(chain.residual(0.0, y, g).lpNorm<Eigen::Infinity>() == 0.0);
  VecX yd = g;
  yd(3 * chain.params.n_segments + 4) += 0.5;
  const VecX r = chain.residual(0.0, y, yd);
  for (int i = 0; i < r.size(); ++i)
    CHECK(r(i) == (i == 3 * chain.params.n_segments + 4 ? doctest::Approx(-0.5) : doctest::Approx(0.0)));
}

TEST_CASE("hanging 392 m tether settles to its weight at the anchor") {
  TetherChain chain;
  chain.reel = {392.0, 0.0, 0.0};
  chain.anchor = Vec3(0, 0, 500.0);
  VecX y = hanging_state(chain);
  Radau5 solver = make_solver(chain, 0.018, 3e-4);
  double t = 0.0;
  solver.integrate(t, y, 60.0);
  CHECK(chain.anchor_force(t, y).norm() == doctest::Approx(50.0).epsilon(0.01));
  const VecX r = chain.residual(t, y, VecX::Zero(chain.dimension()));
  CHECK(r.lpNorm<Eigen::Infinity>() < 1e-3);
}

TEST_CASE("undamped free tether conserves mechanical energy") {
  TetherChain chain;
  chain.params.c0 = 0.0;
  chain.params.c_d_t = 0.0;
  chain.reel = {392.0, 0.0, 0.0};
  const int n = chain.params.n_segments;
  VecX y = VecX::Zero(chain.dimension());
  const double l_s = chain.rest_length(0.0);
  for (int i = 0; i < n; ++i) y.segment<3>(3 * i) = Vec3((i + 1) * l_s, 0, 0);
  Radau5 solver = make_solver(chain, 0.018, 3e-4);
  const double e0 = chain.mechanical_energy(0.0, y);
  double t = 0.0, max_kinetic = 0.0, max_drift = 0.0;
  for (int k = 1; k <= 1200; ++k) {
    solver.integrate(t, y, 0.05 * k);
    double kinetic = 0.0;
    const auto m = particle_masses(chain.params, l_s);
    for (int i = 0; i < n; ++i) kinetic += 0.5 * m[i + 1] * y.segment<3>(3 * n + 3 * i).squaredNorm();
    max_kinetic = std::max(max_kinetic, kinetic);
    max_drift = std::max(max_drift, std::abs(chain.mechanical_energy(t, y) - e0));
  }
  MESSAGE("energy drift " << max_drift << " J of peak kinetic " << max_kinetic << " J");
  CHECK(max_drift < 0.01 * max_kinetic);
}
