#include <chrono>
#include <cstdio>
#include <string>

#include "kitesim/calibration.hpp"
#include "kitesim/config.hpp"
#include "kitesim/runner.hpp"

using namespace kitesim;

namespace {

template <class F>
auto timed(double& seconds, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto out = f();
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : KITESIM_SOURCE_DIR "/configs";
  std::printf("threads=%d\n", max_threads());
  int mismatches = 0;

  const SimConfig park = load_config(dir + "/parking.yaml");
  const ParkingOptions po{30.0, 30.0};
  double ts = 0.0, tp = 0.0;
  const auto ps = timed(ts, [&] { return parking_comparison(park, po, Execution::Serial); });
  const auto pp = timed(tp, [&] { return parking_comparison(park, po, Execution::Parallel); });
  const bool park_same = parking_csv(ps) == parking_csv(pp);
  mismatches += park_same ? 0 : 1;
  std::printf("parking_comparison cases=%zu serial_s=%.3f parallel_s=%.3f speedup=%.2f identical=%s\n",
              ps.size(), ts, tp, ts / tp, park_same ? "true" : "false");

  const SimConfig pump = load_config(dir + "/sim2_1p.yaml");
  const std::vector<double> winds{7.0, 8.0, 9.51, 11.0};
  const auto ss = timed(ts, [&] { return wind_sweep(pump, winds, 250.0, Execution::Serial); });
  const auto sp = timed(tp, [&] { return wind_sweep(pump, winds, 250.0, Execution::Parallel); });
  const bool sweep_same = sweep_csv(ss) == sweep_csv(sp);
  mismatches += sweep_same ? 0 : 1;
  std::printf("wind_sweep cases=%zu serial_s=%.3f parallel_s=%.3f speedup=%.2f identical=%s\n",
              ss.size(), ts, tp, ts / tp, sweep_same ? "true" : "false");
  return mismatches == 0 ? 0 : 1;
}
