#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "kitesim/simulator.hpp"

namespace kitesim {

/// WebSocket endpoint for one cockpit client. Outbound telemetry is held in a
/// bounded queue that drops the oldest frame when the client falls behind;
/// inbound commands are validated on the network thread and collected until
/// the simulation loop takes them at the next interval boundary. Malformed
/// commands are answered with an error frame and the session continues.
class TelemetryServer {
 public:
  /// Binds to 127.0.0.1 unless `any_address`; port 0 picks a free port.
  explicit TelemetryServer(unsigned short port, std::size_t queue_capacity = 16,
                           bool any_address = false);
  ~TelemetryServer();
  TelemetryServer(const TelemetryServer&) = delete;
  TelemetryServer& operator=(const TelemetryServer&) = delete;

  unsigned short port() const;

  /// Thread safe. Frames published while no client is connected are
  /// discarded without counting as drops.
  void publish(std::string frame);

  /// Thread safe. Commands received since the previous call, oldest first.
  std::vector<OperatorCommand> take_commands();

  bool client_connected() const;
  std::size_t dropped_frames() const;
  std::size_t rejected_commands() const;
  std::size_t sent_frames() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace kitesim
