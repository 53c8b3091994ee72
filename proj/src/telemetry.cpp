#include "kitesim/telemetry.hpp"

#include <cmath>

#include <json.hpp>

#include "kitesim/error.hpp"

namespace kitesim {

using nlohmann::json;

namespace {

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::Protocol, "expected a 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

double number(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number())
    throw Error(ErrorKind::Protocol, std::string("field '") + key + "' must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v))
    throw Error(ErrorKind::Protocol, std::string("field '") + key + "' must be finite");
  return v;
}

}  // namespace

TelemetryFrame make_frame(const Simulator& sim, const LogRecord& record) {
  return TelemetryFrame{record, sim.particle_positions()};
}

std::string encode_frame(const TelemetryFrame& f) {
  const LogRecord& r = f.record;
  json particles = json::array();
  for (const Vec3& p : f.particles) particles.push_back(vec(p));
  json j = {{"type", "telemetry"},
            {"t", r.t},
            {"position", vec(r.position)},
            {"elevation_deg", r.elevation_deg},
            {"azimuth_deg", r.azimuth_deg},
            {"heading_rad", r.heading},
            {"v_a", r.v_a},
            {"force", r.force},
            {"l_t", r.l_t},
            {"v_t_o", r.v_t_o},
            {"u_s", r.u_s},
            {"u_d", r.u_d},
            {"v_s_set", r.v_s_set},
            {"phase", to_string(r.phase)},
            {"power", r.power},
            {"particles", std::move(particles)}};
  return j.dump();
}

TelemetryFrame decode_frame(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Protocol, std::string("frame is not JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("type", "") != "telemetry")
    throw Error(ErrorKind::Protocol, "not a telemetry frame");
  TelemetryFrame f;
  LogRecord& r = f.record;
  r.t = number(j, "t");
  r.position = vec(j.at("position"));
  r.elevation_deg = number(j, "elevation_deg");
  r.azimuth_deg = number(j, "azimuth_deg");
  r.heading = number(j, "heading_rad");
  r.v_a = number(j, "v_a");
  r.force = number(j, "force");
  r.l_t = number(j, "l_t");
  r.v_t_o = number(j, "v_t_o");
  r.u_s = number(j, "u_s");
  r.u_d = number(j, "u_d");
  r.v_s_set = number(j, "v_s_set");
  try {
    r.phase = flight_phase_from_string(j.at("phase").get<std::string>());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::Protocol, std::string("bad phase: ") + e.what());
  }
  r.power = number(j, "power");
  for (const json& p : j.at("particles")) f.particles.push_back(vec(p));
  return f;
}

OperatorCommand decode_command(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception&) {
    throw Error(ErrorKind::Protocol, "command is not valid JSON");
  }
  if (!j.is_object()) throw Error(ErrorKind::Protocol, "command must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "mode" && key != "steering" && key != "depower" && key != "winch_set")
      throw Error(ErrorKind::Protocol, "unknown command field '" + key + "'");
  const auto mode = j.find("mode");
  if (mode == j.end() || !mode->is_string())
    throw Error(ErrorKind::Protocol, "field 'mode' must be \"auto\" or \"manual\"");
  OperatorCommand c;
  if (*mode == "auto") {
    if (j.size() > 1) throw Error(ErrorKind::Protocol, "auto mode takes no channel values");
    return c;
  }
  if (*mode != "manual")
    throw Error(ErrorKind::Protocol, "field 'mode' must be \"auto\" or \"manual\"");
  c.manual = true;
  if (j.contains("steering")) {
    const double s = number(j, "steering");
    if (s < -1.0 || s > 1.0) throw Error(ErrorKind::Protocol, "field 'steering' outside [-1, 1]");
    c.steering = s;
  }
  if (j.contains("depower")) {
    const double d = number(j, "depower");
    if (d < 0.0 || d > 1.0) throw Error(ErrorKind::Protocol, "field 'depower' outside [0, 1]");
    c.depower = d;
  }
  if (j.contains("winch_set")) c.winch_set = number(j, "winch_set");
  return c;
}

std::string encode_command(const OperatorCommand& c) {
  json j = {{"mode", c.manual ? "manual" : "auto"}};
  if (c.manual) {
    if (c.steering) j["steering"] = *c.steering;
    if (c.depower) j["depower"] = *c.depower;
    if (c.winch_set) j["winch_set"] = *c.winch_set;
  }
  return j.dump();
}

std::string encode_error(const std::string& message) {
  return json{{"type", "error"}, {"message", message}}.dump();
}

}  // namespace kitesim
