#include <doctest.h>

#include <cmath>
#include <random>

#include "kitesim/error.hpp"
#include "kitesim/kite_four_point.hpp"

using namespace kitesim;

namespace {

KiteFrame level_frame() {
  // Heading +x, span +y, z pointing down towards the KCU.
  return KiteFrame{Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized().toRotationMatrix();
}

Vec3 mirror(const Vec3& v) { return Vec3(v.x(), -v.y(), v.z()); }

// Kite bridled to a KCU at the origin, flying into a headwind.
struct Fixture {
  KiteParams params;
  FourPointGeometry geo;
  KiteBody body = init_particles(Vec3::Zero(), level_frame(), geo).body;
  AeroTable table = AeroTable::default_table();
};

}  // namespace

TEST_CASE("mass distribution") {
  const MassDistribution d = distribute_mass(6.21, 8.4, 0.47, 392.0, 0.013, 7);
  CHECK(d.wing[kA] == doctest::Approx(2.9187));
  CHECK(d.wing[kB] == doctest::Approx(1.31652));
  CHECK(d.wing[kC] == doctest::Approx(0.98739));
  CHECK(d.wing[kD] == doctest::Approx(0.98739));
  CHECK(d.m_PKCU == doctest::Approx(8.764));
  CHECK(d.wing[0] + d.wing[1] + d.wing[2] + d.wing[3] == doctest::Approx(6.21).epsilon(1e-15));
  const MassDistribution nose = distribute_mass(6.21, 8.4, 1.0, 392.0, 0.013, 7);
  CHECK(nose.wing[kA] == 6.21);
  CHECK(nose.wing[kB] + nose.wing[kC] + nose.wing[kD] == 0.0);
  for (double g : {0.1, 0.33, 0.47, 0.9}) {
    const MassDistribution m = distribute_mass(7.3, 8.4, g, 100.0, 0.013, 7);
    CHECK(m.wing[0] + m.wing[1] + m.wing[2] + m.wing[3] == doctest::Approx(7.3).epsilon(1e-15));
  }
}

TEST_CASE("initial particle geometry") {
  FourPointGeometry g;
  const Vec3 kcu(10, 20, 300);
  const KiteFrame f0 = level_frame();
  const KiteInit init = init_particles(kcu, f0, g);
  const KiteBody& b = init.body;
  CHECK((b.pos[kC] - b.pos[kD]).norm() == doctest::Approx(5.2507));
  CHECK((b.centre() - b.pos[kB]).norm() == doctest::Approx(2.23));
  CHECK((b.centre() - (kcu - g.h_b * f0.e_z)).norm() < 1e-12);
  CHECK(init.springs.size() == 10);
  for (const KiteSpring& s : init.springs) CHECK(s.rest_length > 0.0);
  const KiteFrame f = frame_4p(b);
  CHECK((f.e_x - f0.e_x).norm() < 1e-10);
  CHECK((f.e_y - f0.e_y).norm() < 1e-10);
  CHECK((f.e_z - f0.e_z).norm() < 1e-10);
}

TEST_CASE("frame co-rotates with a rigid rotation and is translation invariant") {
  std::mt19937_64 rng(21);
  FourPointGeometry g;
  const KiteBody b = init_particles(Vec3(1, 2, 3), level_frame(), g).body;
  const KiteFrame f0 = frame_4p(b);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Matrix3d R = random_rotation(rng);
    const Vec3 shift(5.0 * trial, -3.0, 7.0);
    KiteBody r = b;
    for (auto& p : r.pos) p = R * p + shift;
    const KiteFrame f = frame_4p(r);
    CHECK((f.e_x - R * f0.e_x).norm() < 1e-10);
    CHECK((f.e_y - R * f0.e_y).norm() < 1e-10);
    CHECK((f.e_z - R * f0.e_z).norm() < 1e-10);
  }
}

TEST_CASE("heading stays a unit vector for a deformed kite") {
  FourPointGeometry g;
  KiteBody b = init_particles(Vec3::Zero(), level_frame(), g).body;
  b.pos[kC] += Vec3(0.3, 0.0, 0.4);
  b.pos[kB] += Vec3(0.2, -0.1, 0.0);
  CHECK(frame_4p(b).e_x.norm() == doctest::Approx(1.0).epsilon(1e-14));
  KiteBody collapsed = b;
  collapsed.pos[kC] = collapsed.pos[kD];
  CHECK_THROWS_AS(frame_4p(collapsed), Error);
}

TEST_CASE("steering angle") {
  KiteParams p;
  FourPointGeometry g;
  CHECK(steering_angle(g.u_s0, 0.0, p, g) == 0.0);
  CHECK(rad2deg(steering_angle(g.u_s0 + 1.0, 0.0, p, g)) == doctest::Approx(15.9));
  CHECK(rad2deg(steering_angle(g.u_s0 + 1.0, p.alpha_d_max, p, g)) == doctest::Approx(6.36));
}

TEST_CASE("symmetric flow gives equal side-surface angles and cancelling side lift") {
  Fixture fx;
  const Vec3 w(-20, 0, 0);
  const SurfaceFlow flow = surface_aoa(fx.body, level_frame(), {w, w, w}, fx.geo.u_s0,
                                       fx.params.u_d0, fx.params, fx.geo);
  CHECK(flow.alpha[1] == doctest::Approx(flow.alpha[2]).epsilon(1e-14));
  CHECK(flow.alpha[0] == doctest::Approx(fx.params.alpha0));
  const Forces4p F = aero_forces_4p(level_frame(), flow, 1.225, fx.table, fx.params, fx.geo);
  CHECK(F.lift[1].norm() == doctest::Approx(F.lift[2].norm()));
  CHECK(F.lift[1].y() + F.lift[2].y() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(F.lift[1].y() > 0.0);  // each side surface pulls outwards
}

TEST_CASE("drag factor") {
  CHECK(drag_factor_4p(KiteParams{}, FourPointGeometry{}) == doctest::Approx(0.6454).epsilon(1e-4));
}

TEST_CASE("lift directions are perpendicular to their apparent velocities") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 5.0);
  Fixture fx;
  for (int trial = 0; trial < 50; ++trial) {
    std::array<Vec3, 3> wind;
    for (auto& w : wind) w = Vec3(-20 + n(rng), n(rng), n(rng));
    const SurfaceFlow flow =
        surface_aoa(fx.body, level_frame(), wind, 0.3, 0.3, fx.params, fx.geo);
    const Forces4p F = aero_forces_4p(level_frame(), flow, 1.2, fx.table, fx.params, fx.geo);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(F.lift[i].dot(flow.v_a[i])) <= 1e-9 * F.lift[i].norm() * flow.v_a[i].norm());
      CHECK(F.drag[i].cross(flow.v_a[i]).norm() <= 1e-9 * F.drag[i].norm() * flow.v_a[i].norm() + 1e-12);
    }
  }
}

TEST_CASE("mirrored state and steering mirror the forces") {
  Fixture fx;
  const std::array<Vec3, 3> wind{Vec3(-19, 2, 1), Vec3(-20, 3, 0.5), Vec3(-18, 1, -1)};
  KiteBody b = fx.body;
  b.vel = {Vec3(0.1, 0.2, 0), Vec3(0.3, -0.5, 0.2), Vec3(0.0, 0.4, -0.3), Vec3(-0.2, 0.1, 0.1)};
  const double du = 0.4;
  const SurfaceFlow flow =
      surface_aoa(b, frame_4p(b), wind, fx.geo.u_s0 + du, 0.3, fx.params, fx.geo);
  const Forces4p F = aero_forces_4p(frame_4p(b), flow, 1.2, fx.table, fx.params, fx.geo);

  // Reflect about the x-z plane; C and D exchange their roles.
  KiteBody m;
  m.pos = {mirror(b.pos[kA]), mirror(b.pos[kB]), mirror(b.pos[kD]), mirror(b.pos[kC])};
  m.vel = {mirror(b.vel[kA]), mirror(b.vel[kB]), mirror(b.vel[kD]), mirror(b.vel[kC])};
  const std::array<Vec3, 3> wind_m{mirror(wind[0]), mirror(wind[2]), mirror(wind[1])};
  const SurfaceFlow flow_m =
      surface_aoa(m, frame_4p(m), wind_m, fx.geo.u_s0 - du, 0.3, fx.params, fx.geo);
  const Forces4p G = aero_forces_4p(frame_4p(m), flow_m, 1.2, fx.table, fx.params, fx.geo);

  const int swap[3] = {0, 2, 1};
  for (int i = 0; i < 3; ++i) {
    CHECK((mirror(F.lift[i]) - G.lift[swap[i]]).norm() < 1e-9 * (F.lift[i].norm() + 1.0));
    CHECK((mirror(F.drag[i]) - G.drag[swap[i]]).norm() < 1e-9 * (F.drag[i].norm() + 1.0));
  }
}

TEST_CASE("zero projected flow at a surface is a stagnation error") {
  Fixture fx;
  const std::array<Vec3, 3> wind{Vec3(-20, 0, 0), Vec3(0, 0, 5), Vec3(-20, 0, 0)};
  try {
    surface_aoa(fx.body, level_frame(), wind, 0.0, 0.3, fx.params, fx.geo);
    FAIL("expected stagnation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Stagnation);
  }
}
