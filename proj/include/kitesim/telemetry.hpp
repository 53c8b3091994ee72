#pragma once

#include <string>
#include <vector>

#include "kitesim/simulator.hpp"

namespace kitesim {

/// Outbound message: one log record plus the particle positions, kite
/// points last.
struct TelemetryFrame {
  LogRecord record;
  std::vector<Vec3> particles;
};

TelemetryFrame make_frame(const Simulator& sim, const LogRecord& record);

/// JSON text with "type":"telemetry". Doubles are written with
/// round-trip precision so decode_frame(encode_frame(f)) == f.
std::string encode_frame(const TelemetryFrame& frame);
TelemetryFrame decode_frame(const std::string& text);

/// Inbound command: {"mode": "auto"|"manual", "steering": [-1,1],
/// "depower": [0,1], "winch_set": m/s}. Anything else raises
/// Error(Protocol) naming the offending field.
OperatorCommand decode_command(const std::string& text);
std::string encode_command(const OperatorCommand& command);

/// {"type":"error","message":...}
std::string encode_error(const std::string& message);

}  // namespace kitesim
