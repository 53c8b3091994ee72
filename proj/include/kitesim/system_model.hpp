#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kitesim/atmosphere.hpp"
#include "kitesim/kite_four_point.hpp"
#include "kitesim/kite_one_point.hpp"
#include "kitesim/tether.hpp"
#include "kitesim/vec.hpp"
#include "kitesim/winch.hpp"

namespace kitesim {

enum class KiteModelKind { OnePoint, FourPoint, None };

const char* to_string(KiteModelKind kind);
KiteModelKind kite_model_from_string(const std::string& name);

struct ModelConfig {
  KiteModelKind kite_model = KiteModelKind::FourPoint;
  TetherParams tether;  // n_segments = 1 gives the straight-tether variant
  KiteParams kite;
  FourPointGeometry geometry;
  AeroTable aero = AeroTable::default_table();
  WinchParams winch;

  void validate() const;
};

/// Inputs held constant during one control interval.
struct IntervalInputs {
  ReelState reel{392.0, 0.0, 0.0};
  double i_s = 0.0;  // commanded steering
  double u_s = 0.0;  // actuated steering
  double u_d = 0.213;
  double v_s = 0.0;  // synchronous speed of the generator, m/s
  bool winch_locked = false;  // brake engaged: l_t and v_t_o frozen
};

/// Derived quantities at a state, used by the controllers and the log.
struct Observation {
  Vec3 kite_position;
  Vec3 kite_velocity;
  Vec3 apparent_wind;
  KiteFrame frame;
  double elevation = 0.0;  // rad
  double azimuth = 0.0;    // rad
  double heading = 0.0;    // rad, 0 = zenith, clockwise seen from outside
  double tether_force = 0.0;  // N, at the ground station
  double l_t = 0.0;
  double v_t_o = 0.0;
};

/// Tangent-plane heading of a body-x direction at a point on the sphere.
double heading_of(const Vec3& position, const Vec3& e_x);

/// Tether, kite and winch assembled into one system y' = g(t, y); the
/// implicit residual is R = g(t, y) - y'. State layout: positions of the
/// movable particles (tether 1..n, then A..D for the four-point kite),
/// their velocities, then (l_t, v_t_o).
class SystemModel {
 public:
  SystemModel(ModelConfig config, const WindField* wind);

  int n_particles() const { return n_particles_; }
  int dimension() const { return 6 * n_particles_ + 2; }
  int kite_particle() const { return config_.tether.n_segments; }  // 1-based
  int winch_index() const { return 6 * n_particles_; }

  IntervalInputs& inputs() { return inputs_; }
  const IntervalInputs& inputs() const { return inputs_; }
  const ModelConfig& config() const { return config_; }
  const WindField* wind() const { return wind_; }

  void derivative(double t, const VecX& y, VecX& ydot) const;
  VecX residual(double t, const VecX& y, const VecX& ydot) const;

  Observation observe(double t, const VecX& y) const;

  /// Particle positions including the anchor, for rendering.
  std::vector<Vec3> particle_positions(const VecX& y) const;

  /// Straight tether from the origin to the kite at the given elevation and
  /// azimuth, all particles at rest; the four-point body is attached above
  /// the last tether particle using the point-mass frame.
  VecX initial_state(double l_t, double elevation, double azimuth, double v_t_o = 0.0) const;

  /// Absolute tolerance vector for the state layout.
  VecX tolerances(double position_tol, double velocity_tol) const;

 private:
  Vec3 pos(const VecX& y, int particle) const;
  Vec3 vel(const VecX& y, int particle) const;
  KiteFrame frame_1p(double t, const Vec3& s_last, const Vec3& v_a) const;

  ModelConfig config_;
  const WindField* wind_;
  int n_particles_;
  IntervalInputs inputs_;
  std::vector<KiteSpring> springs_;
  double bridle_k0_ = 0.0;
  double bridle_c0_ = 0.0;

  // Last valid point-mass frame, held briefly while the flow is degenerate.
  mutable std::optional<KiteFrame> held_frame_;
  mutable double held_since_ = 0.0;
};

}  // namespace kitesim
