#pragma once

#include <atomic>
#include <cstddef>
#include <functional>

#include "kitesim/simulator.hpp"

namespace kitesim {

class TelemetryServer;

struct RealtimeOptions {
  double duration = 60.0;   // s of simulated time; <= 0 runs until stopped
  bool paced = true;        // false: run as fast as possible
  const std::atomic<bool>* stop = nullptr;
};

struct RealtimeStats {
  long intervals = 0;
  long deadline_misses = 0;    // intervals finished after their wall-clock deadline
  double max_lateness = 0.0;   // s
  double max_step_time = 0.0;  // s of wall time for one interval
  std::size_t commands_applied = 0;
  std::size_t frames_dropped = 0;
  std::size_t commands_rejected = 0;

  double miss_ratio() const {
    return intervals > 0 ? static_cast<double>(deadline_misses) / static_cast<double>(intervals) : 0.0;
  }
};

/// Fixed-cadence loop: one control interval per solver interval of wall
/// time. Commands from the server are applied at interval boundaries and
/// every record is published as a telemetry frame. `sink` receives each
/// record (e.g. for CSV logging).
RealtimeStats run_realtime(Simulator& sim, const RealtimeOptions& options,
                           TelemetryServer* server = nullptr,
                           const std::function<void(const LogRecord&)>& sink = {});

}  // namespace kitesim
