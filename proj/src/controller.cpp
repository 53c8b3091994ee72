#include "kitesim/controller.hpp"

#include <algorithm>
#include <cmath>

#include "kitesim/error.hpp"
#include "kitesim/vec.hpp"

namespace kitesim {

const char* to_string(FlightPhase phase) {
  switch (phase) {
    case FlightPhase::ReelOutRight: return "reel_out_right";
    case FlightPhase::ReelOutLeft: return "reel_out_left";
    case FlightPhase::ReelIn: return "reel_in";
    case FlightPhase::Parking: return "parking";
  }
  return "parking";
}

FlightPhase flight_phase_from_string(const std::string& name) {
  if (name == "reel_out_right") return FlightPhase::ReelOutRight;
  if (name == "reel_out_left") return FlightPhase::ReelOutLeft;
  if (name == "reel_in") return FlightPhase::ReelIn;
  if (name == "parking") return FlightPhase::Parking;
  throw Error(ErrorKind::Config, "unknown flight phase '" + name + "'");
}

FlightPathPlanner::FlightPathPlanner(PlannerConfig config, FlightPhase initial)
    : config_(config), phase_(initial) {
  if (!(config_.l_min < config_.l_max))
    throw Error(ErrorKind::Domain, "planner: l_min must be < l_max");
}

SpherePoint FlightPathPlanner::plan_target(const SpherePoint& kite, double l_t) {
  if (config_.cycle) {
    switch (phase_) {
      case FlightPhase::ReelOutRight:
      case FlightPhase::ReelOutLeft:
        if (l_t >= config_.l_max) {
          phase_ = FlightPhase::ReelIn;
        } else if (phase_ == FlightPhase::ReelOutRight && kite.azimuth >= config_.target_azimuth) {
          phase_ = FlightPhase::ReelOutLeft;
        } else if (phase_ == FlightPhase::ReelOutLeft && kite.azimuth <= -config_.target_azimuth) {
          phase_ = FlightPhase::ReelOutRight;
        }
        break;
      case FlightPhase::ReelIn:
        if (l_t <= config_.l_min) phase_ = FlightPhase::ReelOutRight;
        break;
      case FlightPhase::Parking: break;
    }
  }
  switch (phase_) {
    case FlightPhase::ReelOutRight: return {config_.target_azimuth, config_.target_elevation};
    case FlightPhase::ReelOutLeft: return {-config_.target_azimuth, config_.target_elevation};
    default: return {0.0, kPi / 2.0};
  }
}

double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

double great_circle_heading(const SpherePoint& k, const SpherePoint& t) {
  const double d_az = t.azimuth - k.azimuth;
  const double y = std::sin(d_az) * std::cos(t.elevation);
  const double x = std::cos(k.elevation) * std::sin(t.elevation) -
                   std::sin(k.elevation) * std::cos(t.elevation) * std::cos(d_az);
  // Angular separation guards the coincident and antipodal cases.
  const double cos_sep = std::sin(k.elevation) * std::sin(t.elevation) +
                         std::cos(k.elevation) * std::cos(t.elevation) * std::cos(d_az);
  if (std::abs(cos_sep) > 1.0 - 1e-12 || std::hypot(x, y) < 1e-12)
    throw Error(ErrorKind::Domain, "great_circle_heading: bearing undefined");
  return std::atan2(y, x);
}

double HeadingController::update(double bearing_error, double dt) {
  const double e = wrap_angle(bearing_error);
  const double candidate = integral_ + gains_.ki * e * dt;
  const double unclamped = gains_.kp * e + candidate;
  const double out = std::clamp(unclamped, -1.0, 1.0);
  // Conditional integration: freeze the integrator while it would push the
  // output further into saturation.
  if (unclamped == out || (unclamped > 1.0 && e < 0.0) || (unclamped < -1.0 && e > 0.0))
    integral_ = std::clamp(candidate, -1.0, 1.0);
  return std::clamp(gains_.kp * e + integral_, -1.0, 1.0);
}

Actuators::Actuators(ActuatorConfig config, double u_s0, double u_d0)
    : config_(config), u_s_(u_s0), u_d_(u_d0) {
  delay_steps_ = static_cast<std::size_t>(std::lround(config_.delay / config_.interval));
  for (std::size_t i = 0; i < delay_steps_; ++i) queue_.emplace_back(u_s0, u_d0);
}

void Actuators::update(double i_s, double i_d, double dt) {
  queue_.emplace_back(std::clamp(i_s, -1.0, 1.0), std::clamp(i_d, 0.0, 1.0));
  const auto [c_s, c_d] = queue_.front();
  queue_.pop_front();
  auto track = [&](double u, double target, double rate) {
    const double step = std::min(config_.gain * dt, 1.0) * (target - u);
    return u + std::clamp(step, -rate * dt, rate * dt);
  };
  u_s_ = track(u_s_, c_s, config_.max_rate_steering);
  u_d_ = track(u_d_, c_d, config_.max_rate_depower);
}

WinchController::WinchController(WinchControllerConfig config, double v_initial)
    : config_(config), v_filtered_(v_initial), output_(v_initial) {}

double WinchController::update(double F_t, double /*v_t_o*/, FlightPhase phase, double dt) {
  const auto& sp = config_.setpoints;
  if (first_ || phase != last_phase_) {
    // Bumpless hand-over: the set-point filter restarts from the current output.
    if (!first_) v_filtered_ = output_;
    integral_ = 0.0;
    last_error_ = 0.0;
    first_ = false;
    last_phase_ = phase;
  }

  double target = sp.v_park;
  double error = 0.0;
  PidGains gains{};
  if (is_reel_out(phase)) {
    target = sp.v_out_set;
    error = F_t - sp.F_max_out;  // positive: force above the limit
    gains = config_.reel_out;
  } else if (phase == FlightPhase::ReelIn) {
    target = sp.v_in_set;
    error = sp.F_in_set - F_t;  // positive: force below the floor
    gains = config_.reel_in;
  }

  const double a = std::min(dt / sp.transition_time_constant, 1.0);
  v_filtered_ += a * (target - v_filtered_);

  double cmd = v_filtered_;
  if (phase != FlightPhase::Parking) {
    const double derivative = (error - last_error_) / dt;
    last_error_ = error;
    integral_ = std::clamp(integral_ + gains.ki * error * dt, 0.0, config_.v_max);
    const double pid = gains.kp * error + integral_ + gains.kd * derivative;
    // Limiting loop only ever raises the synchronous speed above the
    // speed set-point.
    cmd = std::max(v_filtered_, v_filtered_ + pid);
  }
  cmd = std::clamp(cmd, -config_.v_max, config_.v_max);
  const double max_step = config_.max_accel * dt;
  output_ += std::clamp(cmd - output_, -max_step, max_step);
  return output_;
}

}  // namespace kitesim
