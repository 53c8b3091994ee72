#include "kitesim/realtime.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include "kitesim/server.hpp"
#include "kitesim/telemetry.hpp"

namespace kitesim {

RealtimeStats run_realtime(Simulator& sim, const RealtimeOptions& options,
                           TelemetryServer* server,
                           const std::function<void(const LogRecord&)>& sink) {
  using clock = std::chrono::steady_clock;
  const double dt = sim.config().solver.interval;
  const auto period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(dt));
  const long limit = options.duration > 0.0 ? std::lround(options.duration / dt) : -1;

  RealtimeStats stats;
  sim.settle();
  const auto start = clock::now();
  for (long k = 0; limit < 0 || k < limit; ++k) {
    if (options.stop && options.stop->load()) break;
    if (server) {
      for (const OperatorCommand& c : server->take_commands()) {
        sim.apply_command(c);
        ++stats.commands_applied;
      }
    }
    const auto began = clock::now();
    const LogRecord r = sim.step();
    if (server) server->publish(encode_frame(make_frame(sim, r)));
    if (sink) sink(r);
    const auto done = clock::now();
    const auto deadline = start + (k + 1) * period;
    stats.max_step_time =
        std::max(stats.max_step_time, std::chrono::duration<double>(done - began).count());
    ++stats.intervals;
    if (options.paced) {
      if (done > deadline) {
        ++stats.deadline_misses;
        stats.max_lateness =
            std::max(stats.max_lateness, std::chrono::duration<double>(done - deadline).count());
      } else {
        std::this_thread::sleep_until(deadline);
      }
    }
  }
  if (server) {
    stats.frames_dropped = server->dropped_frames();
    stats.commands_rejected = server->rejected_commands();
  }
  return stats;
}

}  // namespace kitesim
