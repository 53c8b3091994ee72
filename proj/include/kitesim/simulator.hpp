#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kitesim/config.hpp"
#include "kitesim/controller.hpp"
#include "kitesim/radau5.hpp"
#include "kitesim/system_model.hpp"

namespace kitesim {

/// One line of the cycle log, written at the end of each control interval.
struct LogRecord {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  double elevation_deg = 0.0;
  double azimuth_deg = 0.0;
  double heading = 0.0;  // rad
  double v_a = 0.0;
  double force = 0.0;
  double l_t = 0.0;
  double v_t_o = 0.0;
  double u_s = 0.0;
  double i_s = 0.0;  // commanded steering; not part of the CSV
  double u_d = 0.0;
  double v_s_set = 0.0;
  FlightPhase phase = FlightPhase::Parking;
  double power = 0.0;
};

using CycleLog = std::vector<LogRecord>;

/// Operator override. mode "auto" clears every override; in manual mode
/// only the channels present are taken over.
struct OperatorCommand {
  bool manual = false;
  std::optional<double> steering;
  std::optional<double> depower;
  std::optional<double> winch_set;
};

class Simulator {
 public:
  explicit Simulator(const SimConfig& config);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Runs the settle period with frozen controllers (called once; step()
  /// calls it automatically when needed).
  void settle();

  /// Advances one control interval and returns its log record.
  LogRecord step();

  /// Takes effect at the next interval boundary.
  void apply_command(const OperatorCommand& command);

  double time() const;
  const VecX& state() const { return y_; }
  const SystemModel& model() const { return *model_; }
  FlightPhase phase() const { return planner_.phase(); }
  std::vector<Vec3> particle_positions() const { return model_->particle_positions(y_); }
  const Radau5Stats& solver_stats() const { return solver_->stats(); }
  const SimConfig& config() const { return config_; }

 private:
  void integrate_interval(double t0, double t1);

  SimConfig config_;
  std::unique_ptr<WindField> wind_;
  std::unique_ptr<SystemModel> model_;
  std::unique_ptr<Radau5> solver_;
  FlightPathPlanner planner_;
  HeadingController heading_;
  Actuators actuators_;
  WinchController winch_;

  VecX y_;
  long step_index_ = 0;
  double t_ = 0.0;
  bool settled_ = false;
  double last_bearing_ = 0.0;
  double l_s_end_ = 0.0;  // rest length at the end of the previous interval

  OperatorCommand override_;
  std::optional<OperatorCommand> pending_;
};

/// Batch run: settle, then duration/interval intervals.
CycleLog run_batch(const SimConfig& config, double duration);

/// Fixed-width CSV with header; floats at 6 significant digits, time with
/// three decimals.
std::string csv_header();
std::string csv_line(const LogRecord& r);
void write_csv(const std::string& path, const CycleLog& log);
CycleLog read_csv(const std::string& path);

}  // namespace kitesim
