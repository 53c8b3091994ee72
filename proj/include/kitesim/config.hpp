#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "kitesim/atmosphere.hpp"
#include "kitesim/controller.hpp"
#include "kitesim/system_model.hpp"

namespace kitesim {

struct AtmosphereConfig {
  WindProfile profile;
  WindLaw law = WindLaw::Blended;
  AirDensityModel density;
};

struct DepowerSettings {
  double parking = 0.25;
  double reel_out = 0.234;
  double reel_in = 0.401;
};

struct ControlConfig {
  PlannerConfig planner;
  PiGains heading;
  ActuatorConfig actuators;
  WinchControllerConfig winch;
  DepowerSettings depower;
};

struct SolverConfig {
  double abstol_position = 0.018;  // m
  double abstol_velocity = 3e-4;   // m/s
  double rtol = 0.0;
  double interval = 0.05;          // s
  int max_substeps = 2000;         // per interval
};

struct ScenarioConfig {
  std::string mode = "batch";
  double duration = 120.0;     // s
  std::uint64_t seed = 1;
  double l_t0 = 392.0;         // m
  double elevation0 = 1.2;     // rad
  double azimuth0 = 0.0;       // rad
  double settle_time = 5.0;    // s
  FlightPhase initial_phase = FlightPhase::ReelOutRight;
  bool lock_winch = false;     // brake engaged for the whole run
};

struct SimConfig {
  AtmosphereConfig atmosphere;
  ModelConfig model;
  ControlConfig control;
  SolverConfig solver;
  ScenarioConfig scenario;

  void validate() const;
};

/// Parses the YAML configuration. Missing keys take their defaults; unknown
/// keys and invalid values raise Error(Config) naming the key and line.
SimConfig load_config(const std::filesystem::path& path);
SimConfig parse_config(const std::string& text);

/// Fully resolved configuration as YAML; parse_config(dump_config(c)) == c.
std::string dump_config(const SimConfig& config);

}  // namespace kitesim
