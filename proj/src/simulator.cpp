#include "kitesim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kitesim/error.hpp"

namespace kitesim {

namespace {

double depower_for(const DepowerSettings& d, FlightPhase phase) {
  if (is_reel_out(phase)) return d.reel_out;
  if (phase == FlightPhase::ReelIn) return d.reel_in;
  return d.parking;
}

}  // namespace

Simulator::Simulator(const SimConfig& config)
    : config_(config),
      planner_(config.control.planner, config.scenario.initial_phase),
      heading_(config.control.heading),
      actuators_(config.control.actuators, 0.0,
                 depower_for(config.control.depower, config.scenario.initial_phase)),
      winch_(config.control.winch, 0.0) {
  config_.validate();
  wind_ = std::make_unique<WindField>(config_.atmosphere.profile, config_.atmosphere.law,
                                      config_.atmosphere.density, config_.scenario.seed);
  model_ = std::make_unique<SystemModel>(config_.model, wind_.get());
  const auto& sc = config_.scenario;
  y_ = model_->initial_state(sc.l_t0, sc.elevation0, sc.azimuth0);
  Radau5Options opt;
  opt.atol = model_->tolerances(config_.solver.abstol_position, config_.solver.abstol_velocity);
  opt.rtol = config_.solver.rtol;
  opt.h_max = config_.solver.interval;
  opt.max_steps = config_.solver.max_substeps;
  solver_ = std::make_unique<Radau5>(
      [this](double t, const VecX& y, VecX& yd) { model_->derivative(t, y, yd); }, opt);
  l_s_end_ = sc.l_t0 / config_.model.tether.n_segments;
}

Simulator::~Simulator() = default;

double Simulator::time() const {
  return settled_ ? static_cast<double>(step_index_) * config_.solver.interval : -config_.scenario.settle_time;
}

void Simulator::integrate_interval(double t0, double t1) {
  wind_->advance(t1);
  double t = t0;
  try {
    solver_->integrate(t, y_, t1);
  } catch (const Error& e) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "t=%.3f s: ", t0);
    throw Error(e.kind(), buf + std::string(e.what()));
  }
}

void Simulator::settle() {
  if (settled_) return;
  const double dt = config_.solver.interval;
  const long n_settle = std::lround(config_.scenario.settle_time / dt);
  const int n = config_.model.tether.n_segments;
  IntervalInputs& in = model_->inputs();
  in.i_s = 0.0;
  in.u_s = 0.0;
  in.u_d = actuators_.u_d();
  in.v_s = 0.0;
  in.winch_locked = true;
  for (long k = -n_settle; k < 0; ++k) {
    const double t0 = static_cast<double>(k) * dt;
    in.reel = ReelState{n * l_s_end_, 0.0, t0};
    integrate_interval(t0, t0 + dt);
  }
  settled_ = true;
  step_index_ = 0;
}

void Simulator::apply_command(const OperatorCommand& command) { pending_ = command; }

LogRecord Simulator::step() {
  if (!settled_) settle();
  if (pending_) {
    override_ = *pending_;
    pending_.reset();
  }
  const double dt = config_.solver.interval;
  const double t0 = static_cast<double>(step_index_) * dt;
  const double t1 = static_cast<double>(step_index_ + 1) * dt;
  const Observation o = model_->observe(t0, y_);

  const SpherePoint kite{o.azimuth, o.elevation};
  const SpherePoint target = planner_.plan_target(kite, o.l_t);
  const FlightPhase phase = planner_.phase();
  try {
    last_bearing_ = great_circle_heading(kite, target);
  } catch (const Error&) {
    // Undefined bearing: hold the previous one.
  }
  double i_s = heading_.update(last_bearing_ - o.heading, dt);
  double i_d = depower_for(config_.control.depower, phase);
  double v_s = winch_.update(o.tether_force, o.v_t_o, phase, dt);
  if (override_.manual) {
    if (override_.steering) i_s = std::clamp(*override_.steering, -1.0, 1.0);
    if (override_.depower) i_d = std::clamp(*override_.depower, 0.0, 1.0);
    if (override_.winch_set) v_s = *override_.winch_set;
  }
  actuators_.update(i_s, i_d, dt);

  const int n = config_.model.tether.n_segments;
  const bool locked = config_.scenario.lock_winch;
  IntervalInputs& in = model_->inputs();
  in.reel = ReelState{n * l_s_end_, locked ? 0.0 : o.v_t_o, t0};
  in.i_s = i_s;
  in.u_s = actuators_.u_s();
  in.u_d = actuators_.u_d();
  in.v_s = v_s;
  in.winch_locked = locked;

  integrate_interval(t0, t1);
  l_s_end_ = segment_rest_length(in.reel, t1, n);
  ++step_index_;

  const Observation o1 = model_->observe(t1, y_);
  LogRecord r;
  r.t = t1;
  r.position = o1.kite_position;
  r.elevation_deg = rad2deg(o1.elevation);
  r.azimuth_deg = rad2deg(o1.azimuth);
  r.heading = o1.heading;
  r.v_a = o1.apparent_wind.norm();
  r.force = o1.tether_force;
  r.l_t = o1.l_t;
  r.v_t_o = o1.v_t_o;
  r.u_s = in.u_s;
  r.i_s = in.i_s;
  r.u_d = in.u_d;
  r.v_s_set = v_s;
  r.phase = phase;
  r.power = o1.tether_force * o1.v_t_o;
  return r;
}

CycleLog run_batch(const SimConfig& config, double duration) {
  Simulator sim(config);
  const long steps = std::lround(duration / config.solver.interval);
  CycleLog log;
  log.reserve(static_cast<std::size_t>(std::max(steps, 0L)));
  for (long k = 0; k < steps; ++k) log.push_back(sim.step());
  return log;
}

std::string csv_header() {
  return "t,x,y,z,elevation_deg,azimuth_deg,heading_rad,v_a,force,l_t,v_t_o,u_s,u_d,v_s_set,"
         "phase,power";
}

std::string csv_line(const LogRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%.3f,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%s,%.6g", r.t,
                r.position.x(), r.position.y(), r.position.z(), r.elevation_deg, r.azimuth_deg,
                r.heading, r.v_a, r.force, r.l_t, r.v_t_o, r.u_s, r.u_d, r.v_s_set,
                to_string(r.phase), r.power);
  return buf;
}

void write_csv(const std::string& path, const CycleLog& log) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << csv_header() << '\n';
  for (const auto& r : log) out << csv_line(r) << '\n';
}

CycleLog read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != csv_header())
    throw Error(ErrorKind::Io, path + ": missing or unexpected CSV header");
  CycleLog log;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 16)
      throw Error(ErrorKind::Io, path + ":" + std::to_string(line_no) + ": expected 16 columns");
    try {
      LogRecord r;
      r.t = std::stod(cells[0]);
      r.position = Vec3(std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[3]));
      r.elevation_deg = std::stod(cells[4]);
      r.azimuth_deg = std::stod(cells[5]);
      r.heading = std::stod(cells[6]);
      r.v_a = std::stod(cells[7]);
      r.force = std::stod(cells[8]);
      r.l_t = std::stod(cells[9]);
      r.v_t_o = std::stod(cells[10]);
      r.u_s = std::stod(cells[11]);
      r.i_s = r.u_s;
      r.u_d = std::stod(cells[12]);
      r.v_s_set = std::stod(cells[13]);
      r.phase = flight_phase_from_string(cells[14]);
      r.power = std::stod(cells[15]);
      log.push_back(r);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Io, path + ":" + std::to_string(line_no) + ": malformed number");
    }
  }
  return log;
}

}  // namespace kitesim
