#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kitesim/calibration.hpp"
#include "kitesim/config.hpp"
#include "kitesim/error.hpp"
#include "kitesim/realtime.hpp"
#include "kitesim/server.hpp"
#include "kitesim/simulator.hpp"

namespace fs = std::filesystem;
using namespace kitesim;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

struct Options {
  std::string mode;
  std::string config;
  std::uint64_t seed = 0;
  double duration = 0.0;
  unsigned short port = 8765;
  std::string out = "out";
  bool any_address = false;
  std::string log;
  std::string cases;
  std::string free = "u_d0";
  std::vector<double> sweep;
  std::vector<std::string> wind_samples;
  bool serial = false;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
}

// CSV with header v_w_ref,l_t,u_d,force,force_std,elevation_deg,elevation_std.
std::vector<ParkingCase> read_cases(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::string line;
  std::getline(in, line);
  std::vector<ParkingCase> cases;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ParkingCase c;
    char comma;
    std::istringstream ss(line);
    if (!(ss >> c.v_w_ref >> comma >> c.l_t >> comma >> c.u_d >> comma >> c.force >> comma >>
          c.force_std >> comma >> c.elevation_deg >> comma >> c.elevation_std))
      throw Error(ErrorKind::Io, path + ":" + std::to_string(line_no) + ": expected 7 numbers");
    cases.push_back(c);
  }
  return cases;
}

std::vector<ParkingParam> parse_free(const std::string& list) {
  std::vector<ParkingParam> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parking_param_from_string(item));
  return out;
}

int run_batch_mode(const SimConfig& cfg, const Options& o, const fs::path& out) {
  const CycleLog log = run_batch(cfg, cfg.scenario.duration);
  write_csv((out / "log.csv").string(), log);
  std::string text;
  try {
    text = report(cycle_metrics(log, cfg.solver.interval));
  } catch (const Error& e) {
    text = std::string("cycle.error=") + e.what() + "\n";
  }
  if (!o.sweep.empty()) {
    const auto points = wind_sweep(cfg, o.sweep, cfg.scenario.duration,
                                   o.serial ? Execution::Serial : Execution::Parallel);
    write_text(out / "sweep.csv", sweep_csv(points));
  }
  write_text(out / "metrics.txt", text);
  std::cout << text;
  return 0;
}

int run_parking_mode(const SimConfig& cfg, const Options& o, const fs::path& out) {
  const auto variants =
      parking_comparison(cfg, {}, o.serial ? Execution::Serial : Execution::Parallel);
  const std::string csv = parking_csv(variants);
  write_text(out / "parking.csv", csv);
  std::cout << csv;
  for (const auto& v : variants)
    if (!v.result.equilibrium) return 3;
  return 0;
}

int run_calibrate_mode(const SimConfig& cfg, const Options& o, const fs::path& out) {
  std::string text;
  const CycleLog log = o.log.empty() ? run_batch(cfg, cfg.scenario.duration) : read_csv(o.log);
  TurnRateExtraction ex;
  ex.commanded_steering = o.log.empty() && cfg.model.kite_model == KiteModelKind::OnePoint;
  try {
    text += report(fit_turn_rate(turn_rate_samples(log, cfg.solver.interval, ex)));
  } catch (const Error& e) {
    text += std::string("turn_rate.error=") + e.what() + "\n";
  }
  try {
    text += report(cycle_metrics(log, cfg.solver.interval));
  } catch (const Error& e) {
    text += std::string("cycle.error=") + e.what() + "\n";
  }
  if (!o.wind_samples.empty()) {
    if (o.wind_samples.size() != 3)
      throw Error(ErrorKind::Config, "--wind-samples needs three height:speed pairs");
    std::array<WindSample, 3> s{};
    for (std::size_t i = 0; i < 3; ++i) {
      const auto colon = o.wind_samples[i].find(':');
      if (colon == std::string::npos)
        throw Error(ErrorKind::Config, "--wind-samples entries are height:speed");
      s[i] = {std::stod(o.wind_samples[i].substr(0, colon)),
              std::stod(o.wind_samples[i].substr(colon + 1))};
    }
    const WindProfile p = fit_profile(s, s[0].height, s[0].speed);
    std::ostringstream os;
    os.precision(8);
    os << "wind_profile.z0=" << p.z0 << "\nwind_profile.K=" << p.K
       << "\nwind_profile.alpha_exp=" << p.alpha_exp << "\n";
    text += os.str();
  }
  if (!o.cases.empty()) {
    const auto cases = read_cases(o.cases);
    text += report(fit_parking_params(cfg, cases, parse_free(o.free)));
  }
  write_text(out / "calibration.txt", text);
  std::cout << text;
  return 0;
}

int run_realtime_mode(const SimConfig& cfg, const Options& o, const fs::path& out) {
  TelemetryServer server(o.port, 16, o.any_address);
  std::cerr << "telemetry on ws://" << (o.any_address ? "0.0.0.0" : "127.0.0.1") << ':'
            << server.port() << '\n';
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  Simulator sim(cfg);
  std::ofstream csv(out / "log.csv");
  if (!csv) throw Error(ErrorKind::Io, "cannot write " + (out / "log.csv").string());
  csv << csv_header() << '\n';
  RealtimeOptions ro;
  ro.duration = o.duration > 0.0 ? o.duration : 0.0;
  ro.stop = &g_stop;
  const RealtimeStats st =
      run_realtime(sim, ro, &server, [&](const LogRecord& r) { csv << csv_line(r) << '\n'; });
  std::ostringstream os;
  os << "realtime.intervals=" << st.intervals << "\nrealtime.deadline_misses=" << st.deadline_misses
     << "\nrealtime.miss_ratio=" << st.miss_ratio() << "\nrealtime.max_step_time=" << st.max_step_time
     << "\nrealtime.frames_dropped=" << st.frames_dropped
     << "\nrealtime.commands_applied=" << st.commands_applied
     << "\nrealtime.commands_rejected=" << st.commands_rejected << "\n";
  write_text(out / "realtime.txt", os.str());
  std::cout << os.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pumping kite power system simulator"};
  Options o;
  app.add_option("mode", o.mode, "batch | parking | calibrate | realtime")
      ->required()
      ->check(CLI::IsMember({"batch", "parking", "calibrate", "realtime"}));
  app.add_option("--config", o.config, "YAML configuration (empty file = defaults)")->required();
  app.add_option("--seed", o.seed, "Turbulence seed (overrides the configuration)");
  app.add_option("--duration", o.duration, "Simulated seconds (overrides the configuration)");
  app.add_option("--port", o.port, "Telemetry WebSocket port (realtime)");
  app.add_flag("--any-address", o.any_address, "Listen on all interfaces (realtime)");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--log", o.log, "Existing log CSV to calibrate against (calibrate)");
  app.add_option("--cases", o.cases, "Parking cases CSV for the parameter fit (calibrate)");
  app.add_option("--free", o.free, "Comma-separated free parking parameters (calibrate)");
  app.add_option("--wind-samples", o.wind_samples, "Three height:speed pairs (calibrate)");
  app.add_option("--sweep", o.sweep, "Reference wind speeds for a pumping sweep (batch)");
  app.add_flag("--serial", o.serial, "Run case sets serially");
  CLI11_PARSE(app, argc, argv);

  try {
    SimConfig cfg = load_config(o.config);
    cfg.scenario.mode = o.mode;
    if (app.count("--seed")) cfg.scenario.seed = o.seed;
    if (app.count("--duration")) cfg.scenario.duration = o.duration;
    else o.duration = cfg.scenario.duration;
    cfg.validate();
    const fs::path out(o.out);
    fs::create_directories(out);
    write_text(out / "config.resolved.yaml", dump_config(cfg));
    if (o.mode == "batch") return run_batch_mode(cfg, o, out);
    if (o.mode == "parking") return run_parking_mode(cfg, o, out);
    if (o.mode == "calibrate") return run_calibrate_mode(cfg, o, out);
    return run_realtime_mode(cfg, o, out);
  } catch (const Error& e) {
    std::cerr << "error.kind=" << to_string(e.kind()) << "\nerror.message=" << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error.kind=internal\nerror.message=" << e.what() << '\n';
    return 2;
  }
}
