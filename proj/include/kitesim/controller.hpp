#pragma once

#include <cstddef>
#include <deque>
#include <string>

namespace kitesim {

enum class FlightPhase { ReelOutRight, ReelOutLeft, ReelIn, Parking };

const char* to_string(FlightPhase phase);
FlightPhase flight_phase_from_string(const std::string& name);
inline bool is_reel_out(FlightPhase p) {
  return p == FlightPhase::ReelOutRight || p == FlightPhase::ReelOutLeft;
}

/// Point on the unit sphere of tether directions.
struct SpherePoint {
  double azimuth;    // rad, 0 = downwind, positive towards +y
  double elevation;  // rad
};

struct PlannerConfig {
  double l_min = 392.0;              // m, reel-in ends
  double l_max = 700.0;              // m, reel-out ends
  double target_azimuth = 0.436332;  // rad (25 deg)
  double target_elevation = 0.436332;
  bool cycle = true;  // false: stay parked
};

class FlightPathPlanner {
 public:
  FlightPathPlanner(PlannerConfig config, FlightPhase initial);

  /// Updates the phase from the kite state and returns the current target.
  SpherePoint plan_target(const SpherePoint& kite, double l_t);

  FlightPhase phase() const { return phase_; }
  void set_phase(FlightPhase p) { phase_ = p; }
  const PlannerConfig& config() const { return config_; }

 private:
  PlannerConfig config_;
  FlightPhase phase_;
};

/// Initial great-circle bearing from kite to target on the unit sphere:
/// 0 = towards zenith, positive clockwise seen from outside. Throws
/// Error(Domain) for coincident or antipodal points.
double great_circle_heading(const SpherePoint& kite, const SpherePoint& target);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

struct PiGains {
  double kp = 1.2;
  double ki = 0.2;
};

class HeadingController {
 public:
  explicit HeadingController(PiGains gains) : gains_(gains) {}

  /// Returns the commanded steering i_s in [-1, 1].
  double update(double bearing_error, double dt);
  void reset() { integral_ = 0.0; }
  double integral() const { return integral_; }

 private:
  PiGains gains_;
  double integral_ = 0.0;
};

struct ActuatorConfig {
  double delay = 0.15;             // s
  double gain = 20.0;              // 1/s
  double max_rate_steering = 1.0;  // full scale per s
  double max_rate_depower = 0.2;
  double interval = 0.05;          // s
};

/// Transport delay followed by a rate-limited proportional tracking loop
/// for the steering and depower actuators of the kite control unit.
class Actuators {
 public:
  Actuators(ActuatorConfig config, double u_s0, double u_d0);

  /// Advances one control interval with the current commands.
  void update(double i_s, double i_d, double dt);
  double u_s() const { return u_s_; }
  double u_d() const { return u_d_; }

 private:
  ActuatorConfig config_;
  std::deque<std::pair<double, double>> queue_;
  std::size_t delay_steps_;
  double u_s_;
  double u_d_;
};

struct WinchSetpoints {
  double v_out_set = 1.0;   // m/s
  double F_max_out = 3000;  // N
  double v_in_set = -8.0;   // m/s
  double F_in_set = 500;    // N, lower force limit while reeling in
  double transition_time_constant = 1.0;  // s
  double v_park = 0.0;
};

struct PidGains {
  double kp = 2e-3;  // m/s per N
  double ki = 5e-4;  // m/s per N s
  double kd = 0.0;   // m/s per N/s
};

struct WinchControllerConfig {
  WinchSetpoints setpoints;
  PidGains reel_out;
  PidGains reel_in{1e-3, 2e-3, 0.0};
  double max_accel = 4.0;  // m/s^2, slew limit of the output
  double v_max = 12.0;     // m/s, magnitude limit of the output
};

/// Speed/force controller of the winch; output is the synchronous set speed.
class WinchController {
 public:
  explicit WinchController(WinchControllerConfig config, double v_initial = 0.0);

  double update(double F_t, double v_t_o, FlightPhase phase, double dt);
  double output() const { return output_; }

 private:
  WinchControllerConfig config_;
  FlightPhase last_phase_ = FlightPhase::Parking;
  bool first_ = true;
  double v_filtered_;
  double integral_ = 0.0;
  double last_error_ = 0.0;
  double output_;
};

}  // namespace kitesim
