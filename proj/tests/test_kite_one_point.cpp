#include <doctest.h>

#include <cmath>
#include <random>

#include "kitesim/error.hpp"
#include "kitesim/kite_one_point.hpp"

using namespace kitesim;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Vec3(n(rng), n(rng), n(rng)).normalized();
}

double det(const KiteFrame& f) {
  Eigen::Matrix3d m;
  m << f.e_x, f.e_y, f.e_z;
  return m.determinant();
}

Vec3 mirror(const Vec3& v) { return Vec3(v.x(), -v.y(), v.z()); }

AeroTable flat_table(double cl, double cd) {
  return AeroTable({{-180.0, cl, cd}, {180.0, cl, cd}});
}

}  // namespace

TEST_CASE("axis-aligned kite frame") {
  const KiteFrame f = kite_frame(Vec3(0, 0, -1), Vec3(1, 0, 0));
  CHECK((f.e_z - Vec3(0, 0, 1)).norm() < 1e-15);
  CHECK(std::abs(f.e_y.y()) == doctest::Approx(1.0));
  CHECK(Vec3(1, 0, 0).dot(f.e_y) == doctest::Approx(0.0));
  CHECK(det(f) == doctest::Approx(1.0));
}

TEST_CASE("kite frame is orthonormal and contains the apparent wind") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 s = 30.0 * random_unit(rng);
    const Vec3 v = 20.0 * random_unit(rng);
    const KiteFrame f = kite_frame(s, v);
    Eigen::Matrix3d m;
    m << f.e_x, f.e_y, f.e_z;
    CHECK((m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(det(f) == doctest::Approx(1.0));
    CHECK(std::abs(v.dot(f.e_y)) < 1e-10 * v.norm());
  }
}

TEST_CASE("rotating the apparent wind about e_z rotates e_x and e_y") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  const Vec3 s(0.3, 0.1, 1.0);
  const Vec3 v(-12.0, 3.0, 1.0);
  const KiteFrame f0 = kite_frame(s, v);
  for (int trial = 0; trial < 50; ++trial) {
    const double theta = angle(rng);
    const Eigen::AngleAxisd rot(theta, f0.e_z);
    const KiteFrame f1 = kite_frame(s, rot * v);
    CHECK(((rot * f0.e_x) - f1.e_x).norm() < 1e-10);
    CHECK(((rot * f0.e_y) - f1.e_y).norm() < 1e-10);
  }
}

TEST_CASE("degenerate flow along the tether") {
  try {
    kite_frame(Vec3(0, 0, 1), Vec3(0, 0, 5));
    FAIL("expected degenerate flow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateFlow);
  }
}

TEST_CASE("depower angle") {
  KiteParams p;
  CHECK(depower_angle(p.u_d0, p) == 0.0);
  CHECK(rad2deg(depower_angle(0.26, p)) == doctest::Approx(6.88).epsilon(1e-3));
  CHECK(rad2deg(depower_angle(p.u_d_max, p)) == doctest::Approx(31.0));
}

TEST_CASE("angle of attack of the point-mass kite") {
  KiteParams p;
  // Kite moving along its heading through still air: v_a = -e_x.
  const double a = angle_of_attack_1p(Vec3(-20, 0, 0), Vec3(1, 0, 0), p.u_d0, p);
  CHECK(a == doctest::Approx(p.alpha0));
  CHECK_THROWS_AS(angle_of_attack_1p(Vec3::Zero(), Vec3(1, 0, 0), p.u_d0, p), Error);
}

TEST_CASE("aero table interpolation") {
  const AeroTable t({{0.0, 0.2, 0.05}, {10.0, 0.6, 0.1}, {20.0, 1.0, 0.2}});
  const auto [cl0, cd0] = t.coefficients(deg2rad(10.0));
  CHECK(cl0 == doctest::Approx(0.6));
  CHECK(cd0 == doctest::Approx(0.1));
  const auto [cl1, cd1] = t.coefficients(deg2rad(15.0));
  CHECK(cl1 == doctest::Approx(0.8));
  CHECK(cd1 == doctest::Approx(0.15));
  const auto [cl2, cd2] = t.coefficients(deg2rad(40.0));
  CHECK(cl2 == 1.0);
  CHECK(cd2 == 0.2);
  const auto [cl3, cd3] = t.coefficients(deg2rad(-5.0));
  CHECK(cl3 == 0.2);
  CHECK(cd3 == 0.05);
  CHECK_THROWS_AS(AeroTable({{0.0, 0.2, 0.05}, {0.0, 0.6, 0.1}}), Error);
  CHECK_THROWS_AS(AeroTable({{0.0, 0.2, 0.05}, {10.0, 0.6, 0.0}}), Error);
}

TEST_CASE("default aero table is valid with positive drag") {
  const AeroTable t = AeroTable::default_table();
  CHECK(t.points().size() >= 12);
  for (double a = -180.0; a <= 180.0; a += 0.5) CHECK(t.coefficients(deg2rad(a)).second > 0.0);
}

TEST_CASE("lift magnitude and direction") {
  KiteParams p;
  p.alpha0 = 0.0;
  const AeroTable t = flat_table(0.8, 0.1);
  const Vec3 v_a(-20, 0, 0);
  const KiteFrame f = kite_frame(Vec3(-0.5, 0, 1), v_a);
  const Forces1p F = forces_1p(f, v_a, {0, 0, 0}, p.u_d0, 1.225, p, t);
  CHECK(F.lift.norm() == doctest::Approx(1995.28).epsilon(1e-5));
  CHECK(F.side.norm() == 0.0);
  CHECK(F.gravity.z() == doctest::Approx(-(6.21 + 8.4) * 9.81));
}

TEST_CASE("lift is perpendicular and drag parallel to the apparent wind") {
  std::mt19937_64 rng(9);
  KiteParams p;
  const AeroTable t = AeroTable::default_table();
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 v_a = 25.0 * random_unit(rng);
    const Vec3 s = 50.0 * random_unit(rng);
    const KiteFrame f = kite_frame(s, v_a);
    const Forces1p F = forces_1p(f, v_a, {0.3, 0.2, 0.01}, 0.25, 1.2, p, t);
    CHECK(std::abs(F.lift.dot(v_a)) < 1e-9 * (F.lift.norm() + 1.0) * v_a.norm());
    CHECK(F.drag.cross(v_a).norm() < 1e-9 * (F.drag.norm() + 1.0) * v_a.norm());
    CHECK(F.drag.dot(v_a) >= 0.0);
  }
}

TEST_CASE("doubling the density doubles every aerodynamic force") {
  KiteParams p;
  const AeroTable t = AeroTable::default_table();
  const Vec3 v_a(-18, 3, 4);
  const KiteFrame f = kite_frame(Vec3(-0.4, 0.1, 1), v_a);
  const Forces1p a = forces_1p(f, v_a, {0.4, 0.3, 0.02}, 0.3, 1.1, p, t);
  const Forces1p b = forces_1p(f, v_a, {0.4, 0.3, 0.02}, 0.3, 2.2, p, t);
  CHECK((b.lift - 2 * a.lift).norm() < 1e-9 * a.lift.norm());
  CHECK((b.drag - 2 * a.drag).norm() < 1e-9 * a.drag.norm());
  CHECK((b.side - 2 * a.side).norm() < 1e-9 * a.side.norm());
}

TEST_CASE("mirrored state and steering give mirrored forces") {
  KiteParams p;
  const AeroTable t = AeroTable::default_table();
  const Vec3 s(-0.4, 0.3, 1.0), v_a(-18, 3, 4);
  const KiteFrame f = kite_frame(s, v_a);
  const KiteFrame fm = kite_frame(mirror(s), mirror(v_a));
  const Forces1p a = forces_1p(f, v_a, {0.4, 0.4, 0.0}, 0.3, 1.2, p, t);
  const Forces1p b = forces_1p(fm, mirror(v_a), {-0.4, -0.4, 0.0}, 0.3, 1.2, p, t);
  CHECK((mirror(a.total()) - b.total()).norm() < 1e-9 * a.total().norm());
}

TEST_CASE("steering drag penalty uses the actuated steering") {
  KiteParams p;
  const AeroTable t = flat_table(0.8, 0.1);
  const Vec3 v_a(-20, 0, 0);
  const KiteFrame f = kite_frame(Vec3(-0.5, 0, 1), v_a);
  const double d0 = forces_1p(f, v_a, {0.5, 0.0, 0.0}, p.u_d0, 1.225, p, t).drag.norm();
  const double d1 = forces_1p(f, v_a, {0.0, -0.5, 0.0}, p.u_d0, 1.225, p, t).drag.norm();
  CHECK(d1 == doctest::Approx(d0 * (1.0 + 0.6 * 0.5)));
}

TEST_CASE("gravity correction of the steering") {
  CHECK(steering_correction(20.0, 0.0, 0.3, 0.93) == 0.0);
  CHECK(steering_correction(20.0, kPi / 2, 0.0, 0.93) == doctest::Approx(0.0465));
  CHECK(std::abs(steering_correction(20.0, 1.0, kPi / 2, 0.93)) < 1e-16);
  CHECK(steering_correction(0.01, kPi / 2, 0.0, 0.93) == steering_correction(0.1, kPi / 2, 0.0, 0.93));
}
