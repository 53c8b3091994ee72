#include "kitesim/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "kitesim/error.hpp"

namespace kitesim {

void SimConfig::validate() const {
  try {
    atmosphere.profile.validate();
    atmosphere.density.validate();
    model.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, e.what());
  }
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::Config, what);
  };
  const auto& c = control;
  require(c.planner.l_min > 0.0 && c.planner.l_min < c.planner.l_max,
          "controller.planner: require 0 < l_min < l_max");
  require(c.actuators.delay >= 0.0 && c.actuators.gain > 0.0 && c.actuators.max_rate_steering > 0.0 &&
              c.actuators.max_rate_depower > 0.0,
          "controller.actuators: delay >= 0, gain and rates > 0");
  require(c.winch.setpoints.F_max_out > 0.0 && c.winch.setpoints.F_in_set > 0.0,
          "controller.winch: force limits must be > 0");
  require(c.winch.setpoints.transition_time_constant > 0.0,
          "controller.winch: transition_time_constant must be > 0");
  require(c.winch.max_accel > 0.0 && c.winch.v_max > 0.0, "controller.winch: max_accel, v_max > 0");
  for (double d : {c.depower.parking, c.depower.reel_out, c.depower.reel_in})
    require(d >= 0.0 && d <= 1.0, "controller.depower: settings must be in [0, 1]");
  require(solver.abstol_position > 0.0 && solver.abstol_velocity > 0.0 && solver.rtol >= 0.0,
          "solver: tolerances must be > 0");
  require(solver.interval > 0.0 && solver.max_substeps > 0, "solver: interval and max_substeps > 0");
  require(std::abs(c.actuators.interval - solver.interval) < 1e-12,
          "controller.actuators.interval must equal solver.interval");
  require(scenario.duration >= 0.0 && scenario.settle_time >= 0.0, "scenario: durations >= 0");
  require(scenario.l_t0 > 0.0, "scenario: l_t0 must be > 0");
  require(scenario.mode == "batch" || scenario.mode == "parking" || scenario.mode == "calibrate" ||
              scenario.mode == "realtime",
          "scenario.mode: expected batch, parking, calibrate or realtime");
}

namespace {

std::string line_of(const YAML::Node& n) {
  const auto m = n.Mark();
  return m.line >= 0 ? " (line " + std::to_string(m.line + 1) + ")" : "";
}

class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap())
      throw Error(ErrorKind::Config, path_ + ": expected a mapping" + line_of(node_));
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!node_ || node_.IsNull()) return;
    const YAML::Node v = node_[key];
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      throw Error(ErrorKind::Config, "invalid value for '" + qualified(key) + "'" + line_of(v));
    }
  }

  Section sub(const char* key) {
    seen_.insert(key);
    if (!node_ || node_.IsNull()) return Section(YAML::Node(), qualified(key));
    return Section(node_[key], qualified(key));
  }

  YAML::Node raw(const char* key) {
    seen_.insert(key);
    if (!node_ || node_.IsNull()) return YAML::Node();
    return node_[key];
  }

  std::string qualified(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    if (!node_ || node_.IsNull()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key))
        throw Error(ErrorKind::Config, "unknown key '" + qualified(key.c_str()) + "'" + line_of(kv.first));
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_pid(Section s, PidGains& g) {
  s.get("kp", g.kp);
  s.get("ki", g.ki);
  s.get("kd", g.kd);
  s.finish();
}

SimConfig from_yaml(const YAML::Node& root) {
  SimConfig c;
  Section top(root, "");

  {
    Section s = top.sub("atmosphere");
    auto& p = c.atmosphere.profile;
    std::string law = to_string(c.atmosphere.law);
    s.get("law", law);
    try {
      c.atmosphere.law = wind_law_from_string(law);
    } catch (const Error& e) {
      throw Error(ErrorKind::Config, std::string("atmosphere.law: ") + e.what());
    }
    s.get("v_w_ref", p.v_w_ref);
    s.get("z_ref", p.z_ref);
    s.get("z0", p.z0);
    s.get("K", p.K);
    s.get("alpha_exp", p.alpha_exp);
    s.get("turbulence_intensity", p.turbulence_intensity);
    s.get("rho0", c.atmosphere.density.rho0);
    s.get("H_rho", c.atmosphere.density.H_rho);
    s.finish();
  }
  {
    Section s = top.sub("tether");
    auto& t = c.model.tether;
    s.get("n_segments", t.n_segments);
    s.get("d_t", t.d_t);
    s.get("sigma", t.sigma);
    s.get("k0", t.k0);
    s.get("c0", t.c0);
    s.get("c_d_t", t.c_d_t);
    s.get("compression_stiffness_factor", t.compression_stiffness_factor);
    s.get("min_segment_length", t.min_segment_length);
    s.finish();
  }
  {
    Section s = top.sub("kite");
    auto& k = c.model.kite;
    std::string model = to_string(c.model.kite_model);
    s.get("model", model);
    try {
      c.model.kite_model = kite_model_from_string(model);
    } catch (const Error& e) {
      throw Error(ErrorKind::Config, std::string("kite.model: ") + e.what());
    }
    s.get("A", k.A);
    s.get("m_k", k.m_k);
    s.get("m_KCU", k.m_KCU);
    s.get("A_side_over_A", k.A_side_over_A);
    s.get("c_s", k.c_s);
    s.get("c_2c", k.c_2c);
    s.get("K_sD", k.K_sD);
    s.get("alpha0", k.alpha0);
    s.get("alpha_d_max", k.alpha_d_max);
    s.get("u_d0", k.u_d0);
    s.get("u_d_max", k.u_d_max);
    const YAML::Node table = s.raw("aero_table");
    if (table && !table.IsNull()) {
      if (!table.IsSequence())
        throw Error(ErrorKind::Config, "kite.aero_table: expected a list of [deg, C_L, C_D]" + line_of(table));
      std::vector<AeroTable::Point> pts;
      for (const auto& row : table) {
        if (!row.IsSequence() || row.size() != 3)
          throw Error(ErrorKind::Config, "kite.aero_table: each row needs [deg, C_L, C_D]" + line_of(row));
        try {
          pts.push_back({row[0].as<double>(), row[1].as<double>(), row[2].as<double>()});
        } catch (const YAML::Exception&) {
          throw Error(ErrorKind::Config, "kite.aero_table: non-numeric entry" + line_of(row));
        }
      }
      try {
        c.model.aero = AeroTable(std::move(pts));
      } catch (const Error& e) {
        throw Error(ErrorKind::Config, std::string("kite.aero_table: ") + e.what() + line_of(table));
      }
    }
    Section gs = s.sub("geometry");
    auto& g = c.model.geometry;
    gs.get("h_k", g.h_k);
    gs.get("h_b", g.h_b);
    gs.get("w_k", g.w_k);
    gs.get("gamma", g.gamma);
    gs.get("d_n_r", g.d_n_r);
    gs.get("w_rel", g.w_rel);
    gs.get("alpha_s0", g.alpha_s0);
    gs.get("alpha_s_max", g.alpha_s_max);
    gs.get("K_ds", g.K_ds);
    gs.get("kappa", g.kappa);
    gs.get("u_s0", g.u_s0);
    gs.get("d_bridle", g.d_bridle);
    gs.finish();
    s.finish();
  }
  {
    Section s = top.sub("winch");
    auto& w = c.model.winch;
    s.get("n_gear", w.n_gear);
    s.get("r", w.r);
    s.get("I", w.I);
    s.get("c_f", w.c_f);
    s.get("tau_s", w.tau_s);
    s.get("R_r", w.R_r);
    s.get("L", w.L);
    s.get("v_s_n", w.v_s_n);
    s.get("E_n", w.E_n);
    s.finish();
  }
  {
    Section s = top.sub("controller");
    Section pl = s.sub("planner");
    auto& p = c.control.planner;
    pl.get("l_min", p.l_min);
    pl.get("l_max", p.l_max);
    pl.get("target_azimuth", p.target_azimuth);
    pl.get("target_elevation", p.target_elevation);
    pl.get("cycle", p.cycle);
    pl.finish();
    Section hd = s.sub("heading");
    hd.get("kp", c.control.heading.kp);
    hd.get("ki", c.control.heading.ki);
    hd.finish();
    Section ac = s.sub("actuators");
    auto& a = c.control.actuators;
    ac.get("delay", a.delay);
    ac.get("gain", a.gain);
    ac.get("max_rate_steering", a.max_rate_steering);
    ac.get("max_rate_depower", a.max_rate_depower);
    ac.finish();
    Section wn = s.sub("winch");
    auto& w = c.control.winch;
    wn.get("v_out_set", w.setpoints.v_out_set);
    wn.get("F_max_out", w.setpoints.F_max_out);
    wn.get("v_in_set", w.setpoints.v_in_set);
    wn.get("F_in_set", w.setpoints.F_in_set);
    wn.get("transition_time_constant", w.setpoints.transition_time_constant);
    wn.get("v_park", w.setpoints.v_park);
    wn.get("max_accel", w.max_accel);
    wn.get("v_max", w.v_max);
    read_pid(wn.sub("reel_out"), w.reel_out);
    read_pid(wn.sub("reel_in"), w.reel_in);
    wn.finish();
    Section dp = s.sub("depower");
    dp.get("parking", c.control.depower.parking);
    dp.get("reel_out", c.control.depower.reel_out);
    dp.get("reel_in", c.control.depower.reel_in);
    dp.finish();
    s.finish();
  }
  {
    Section s = top.sub("solver");
    auto& v = c.solver;
    s.get("abstol_position", v.abstol_position);
    s.get("abstol_velocity", v.abstol_velocity);
    s.get("rtol", v.rtol);
    s.get("interval", v.interval);
    s.get("max_substeps", v.max_substeps);
    s.finish();
    c.control.actuators.interval = v.interval;
  }
  {
    Section s = top.sub("scenario");
    auto& v = c.scenario;
    s.get("mode", v.mode);
    s.get("duration", v.duration);
    s.get("seed", v.seed);
    s.get("l_t0", v.l_t0);
    s.get("elevation0", v.elevation0);
    s.get("azimuth0", v.azimuth0);
    s.get("settle_time", v.settle_time);
    std::string phase = to_string(v.initial_phase);
    s.get("initial_phase", phase);
    v.initial_phase = flight_phase_from_string(phase);
    s.get("lock_winch", v.lock_winch);
    s.finish();
  }
  top.finish();
  c.validate();
  return c;
}

}  // namespace

SimConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorKind::Config, std::string("YAML syntax error: ") + e.what());
  }
  if (root && !root.IsNull() && !root.IsMap())
    throw Error(ErrorKind::Config, "configuration root must be a mapping");
  return from_yaml(root);
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read configuration " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

class Writer {
 public:
  void section(const char* name) { out_ << indent() << name << ":\n"; ++depth_; }
  void end() { --depth_; }
  void num(const char* key, double v) {
    out_ << indent() << key << ": " << shortest(v) << '\n';
  }
  void integer(const char* key, long long v) { out_ << indent() << key << ": " << v << '\n'; }
  void uinteger(const char* key, unsigned long long v) { out_ << indent() << key << ": " << v << '\n'; }
  void text(const char* key, const std::string& v) { out_ << indent() << key << ": " << v << '\n'; }
  void boolean(const char* key, bool v) { out_ << indent() << key << ": " << (v ? "true" : "false") << '\n'; }
  void raw(const std::string& s) { out_ << indent() << s << '\n'; }
  std::string str() const { return out_.str(); }

 private:
  std::string indent() const { return std::string(2 * depth_, ' '); }
  std::ostringstream out_;
  int depth_ = 0;
};

void write_pid(Writer& w, const char* name, const PidGains& g) {
  w.section(name);
  w.num("kp", g.kp);
  w.num("ki", g.ki);
  w.num("kd", g.kd);
  w.end();
}

}  // namespace

std::string dump_config(const SimConfig& c) {
  Writer w;
  w.section("atmosphere");
  w.text("law", to_string(c.atmosphere.law));
  w.num("v_w_ref", c.atmosphere.profile.v_w_ref);
  w.num("z_ref", c.atmosphere.profile.z_ref);
  w.num("z0", c.atmosphere.profile.z0);
  w.num("K", c.atmosphere.profile.K);
  w.num("alpha_exp", c.atmosphere.profile.alpha_exp);
  w.num("turbulence_intensity", c.atmosphere.profile.turbulence_intensity);
  w.num("rho0", c.atmosphere.density.rho0);
  w.num("H_rho", c.atmosphere.density.H_rho);
  w.end();

  const auto& t = c.model.tether;
  w.section("tether");
  w.integer("n_segments", t.n_segments);
  w.num("d_t", t.d_t);
  w.num("sigma", t.sigma);
  w.num("k0", t.k0);
  w.num("c0", t.c0);
  w.num("c_d_t", t.c_d_t);
  w.num("compression_stiffness_factor", t.compression_stiffness_factor);
  w.num("min_segment_length", t.min_segment_length);
  w.end();

  const auto& k = c.model.kite;
  w.section("kite");
  w.text("model", to_string(c.model.kite_model));
  w.num("A", k.A);
  w.num("m_k", k.m_k);
  w.num("m_KCU", k.m_KCU);
  w.num("A_side_over_A", k.A_side_over_A);
  w.num("c_s", k.c_s);
  w.num("c_2c", k.c_2c);
  w.num("K_sD", k.K_sD);
  w.num("alpha0", k.alpha0);
  w.num("alpha_d_max", k.alpha_d_max);
  w.num("u_d0", k.u_d0);
  w.num("u_d_max", k.u_d_max);
  w.raw("aero_table:  # [alpha deg, C_L, C_D]");
  for (const auto& p : c.model.aero.points()) {
    w.raw("  - [" + shortest(p.alpha_deg) + ", " + shortest(p.cl) + ", " + shortest(p.cd) + "]");
  }
  const auto& g = c.model.geometry;
  w.section("geometry");
  w.num("h_k", g.h_k);
  w.num("h_b", g.h_b);
  w.num("w_k", g.w_k);
  w.num("gamma", g.gamma);
  w.num("d_n_r", g.d_n_r);
  w.num("w_rel", g.w_rel);
  w.num("alpha_s0", g.alpha_s0);
  w.num("alpha_s_max", g.alpha_s_max);
  w.num("K_ds", g.K_ds);
  w.num("kappa", g.kappa);
  w.num("u_s0", g.u_s0);
  w.num("d_bridle", g.d_bridle);
  w.end();
  w.end();

  const auto& wp = c.model.winch;
  w.section("winch");
  w.num("n_gear", wp.n_gear);
  w.num("r", wp.r);
  w.num("I", wp.I);
  w.num("c_f", wp.c_f);
  w.num("tau_s", wp.tau_s);
  w.num("R_r", wp.R_r);
  w.num("L", wp.L);
  w.num("v_s_n", wp.v_s_n);
  w.num("E_n", wp.E_n);
  w.end();

  const auto& ct = c.control;
  w.section("controller");
  w.section("planner");
  w.num("l_min", ct.planner.l_min);
  w.num("l_max", ct.planner.l_max);
  w.num("target_azimuth", ct.planner.target_azimuth);
  w.num("target_elevation", ct.planner.target_elevation);
  w.boolean("cycle", ct.planner.cycle);
  w.end();
  w.section("heading");
  w.num("kp", ct.heading.kp);
  w.num("ki", ct.heading.ki);
  w.end();
  w.section("actuators");
  w.num("delay", ct.actuators.delay);
  w.num("gain", ct.actuators.gain);
  w.num("max_rate_steering", ct.actuators.max_rate_steering);
  w.num("max_rate_depower", ct.actuators.max_rate_depower);
  w.end();
  w.section("winch");
  w.num("v_out_set", ct.winch.setpoints.v_out_set);
  w.num("F_max_out", ct.winch.setpoints.F_max_out);
  w.num("v_in_set", ct.winch.setpoints.v_in_set);
  w.num("F_in_set", ct.winch.setpoints.F_in_set);
  w.num("transition_time_constant", ct.winch.setpoints.transition_time_constant);
  w.num("v_park", ct.winch.setpoints.v_park);
  w.num("max_accel", ct.winch.max_accel);
  w.num("v_max", ct.winch.v_max);
  write_pid(w, "reel_out", ct.winch.reel_out);
  write_pid(w, "reel_in", ct.winch.reel_in);
  w.end();
  w.section("depower");
  w.num("parking", ct.depower.parking);
  w.num("reel_out", ct.depower.reel_out);
  w.num("reel_in", ct.depower.reel_in);
  w.end();
  w.end();

  w.section("solver");
  w.num("abstol_position", c.solver.abstol_position);
  w.num("abstol_velocity", c.solver.abstol_velocity);
  w.num("rtol", c.solver.rtol);
  w.num("interval", c.solver.interval);
  w.integer("max_substeps", c.solver.max_substeps);
  w.end();

  const auto& s = c.scenario;
  w.section("scenario");
  w.text("mode", s.mode);
  w.num("duration", s.duration);
  w.uinteger("seed", s.seed);
  w.num("l_t0", s.l_t0);
  w.num("elevation0", s.elevation0);
  w.num("azimuth0", s.azimuth0);
  w.num("settle_time", s.settle_time);
  w.text("initial_phase", to_string(s.initial_phase));
  w.boolean("lock_winch", s.lock_winch);
  w.end();
  return w.str();
}

}  // namespace kitesim
