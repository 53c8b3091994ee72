#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kitesim/config.hpp"
#include "kitesim/runner.hpp"
#include "kitesim/simulator.hpp"

namespace kitesim {

/// Standard product-moment correlation. Throws UndefinedCorrelation for a
/// constant series and Domain for mismatched or short inputs.
double pearson(std::span<const double> a, std::span<const double> b);

/// Centered moving average over `window` samples (odd; even values are
/// rounded up). Near the ends the window shrinks symmetrically.
std::vector<double> moving_average(std::span<const double> x, std::size_t window);

// ---------------------------------------------------------------------------
// Turn-rate law

struct TurnRateSample {
  double psi_dot;  // rad/s
  double v_a;      // m/s
  double u_s;
  double psi;      // rad
  double beta;     // rad
};

struct TurnRateFit {
  double c0 = 0.0;
  double c1 = 0.0;       // rad/m
  double c2 = 0.0;       // rad m/s^2
  double rho_pcc = 0.0;
  double sigma = 0.0;    // rad/s
  std::size_t samples = 0;
};

struct TurnRateExtraction {
  double smoothing = 2.0;      // s, moving-average width
  double skip = 10.0;          // s dropped after each reel-out start
  bool commanded_steering = false;  // use the controller output instead of u_s
};

/// Turn-rate samples of the reel-out phases of a log: heading rate by
/// central differences of the unwrapped heading, every channel smoothed.
std::vector<TurnRateSample> turn_rate_samples(const CycleLog& log, double interval,
                                              const TurnRateExtraction& options = {});

/// Least-squares fit of psi_dot = c1 v_a (u_s - c0) + c2 sin(psi) cos(beta) / v_a.
TurnRateFit fit_turn_rate(std::span<const TurnRateSample> samples);

// ---------------------------------------------------------------------------
// Parking equilibria

struct ParkingCase {
  double v_w_ref = 8.0;         // m/s
  double l_t = 392.0;           // m
  double u_d = 0.25;
  double force = 0.0;           // N
  double force_std = 0.0;       // N
  double elevation_deg = 0.0;
  double elevation_std = 0.0;   // deg
};

struct ParkingOptions {
  double settle = 60.0;  // s
  double window = 60.0;  // s
};

struct ParkingResult {
  ParkingCase measured;
  bool equilibrium = false;
  std::string reason;  // set when no equilibrium was reached
};

/// Parks the kite at the zenith with the winch braked and averages force
/// and elevation over the window following the settle time.
ParkingResult parking_equilibrium(const SimConfig& config, double v_w_ref, double l_t,
                                  double u_d, const ParkingOptions& options = {});

enum class ParkingParam { UD0, AlphaDMax, Z0, K, CDT };

const char* to_string(ParkingParam p);
ParkingParam parking_param_from_string(const std::string& name);

double get_param(const SimConfig& config, ParkingParam p);
void set_param(SimConfig& config, ParkingParam p, double value);

struct ParkingFitOptions {
  ParkingOptions parking;
  int max_evaluations = 120;
  double step = 0.1;         // initial simplex step relative to the start value
  double tolerance = 1e-3;   // objective spread that ends the search
  double min_sigma_force = 1.0;      // N, floor for the normalizing std
  double min_sigma_elevation = 0.1;  // deg
};

struct ParkingFit {
  std::vector<ParkingParam> free;
  std::vector<double> values;
  std::vector<ParkingResult> cases;           // simulated at the fitted values
  std::vector<double> force_error;            // (sim - meas) / sigma
  std::vector<double> elevation_error;
  double objective = 0.0;                     // max |normalized error|
  int evaluations = 0;
  bool converged = false;  // simplex collapsed within the budget
  bool success = false;    // every residual below one sigma
  std::vector<std::string> warnings;
};

/// Nelder-Mead search over the free parameters minimizing the largest
/// normalized force or elevation error across the cases. Cases are
/// simulated in parallel.
ParkingFit fit_parking_params(const SimConfig& base, const std::vector<ParkingCase>& cases,
                              const std::vector<ParkingParam>& free,
                              const ParkingFitOptions& options = {});

struct ParkingVariant {
  KiteModelKind model;
  int n_segments;
  ParkingResult result;
};

/// The four model variants (1p/4p, straight/segmented tether) parked under
/// the wind of `config`. The segmented variant uses the configured segment
/// count, or 7 when the configuration is already straight.
std::vector<ParkingVariant> parking_comparison(const SimConfig& config, const ParkingOptions& options,
                                               Execution exec = Execution::Parallel);
std::string parking_csv(const std::vector<ParkingVariant>& variants);

// ---------------------------------------------------------------------------
// Pumping cycle

struct CycleMetrics {
  double F_t_o = 0.0;  // N
  double F_t_i = 0.0;
  double v_t_o = 0.0;  // m/s
  double v_t_i = 0.0;
  double p_av = 0.0;   // W
  double eta_p = 0.0;
  double duty = 0.0;
  double eta_cyc = 0.0;
  double t_cycle = 0.0;  // s
  double e_out = 0.0;    // J
  double e_in = 0.0;     // J
};

/// Metrics of a record range treated as one cycle.
CycleMetrics cycle_metrics(std::span<const LogRecord> cycle, double interval);

/// Metrics of the last complete cycle (reel-out start to the next reel-out
/// start). Throws InsufficientData when the log holds none.
CycleMetrics cycle_metrics(const CycleLog& log, double interval);

/// Index ranges [begin, end) of every complete cycle in the log.
std::vector<std::pair<std::size_t, std::size_t>> complete_cycles(const CycleLog& log);

struct SweepPoint {
  double v_w_ref = 0.0;
  bool ok = false;
  CycleMetrics metrics;
  std::string error;
};

/// Pumping runs over several reference wind speeds, one case per thread.
std::vector<SweepPoint> wind_sweep(const SimConfig& config, const std::vector<double>& v_w_refs,
                                   double duration, Execution exec = Execution::Parallel);
std::string sweep_csv(const std::vector<SweepPoint>& points);

// ---------------------------------------------------------------------------
// key=value reports

std::string report(const TurnRateFit& fit, const std::string& prefix = "turn_rate");
std::string report(const CycleMetrics& m, const std::string& prefix = "cycle");
std::string report(const ParkingResult& r, const std::string& prefix = "parking");
std::string report(const ParkingFit& fit, const std::string& prefix = "parking_fit");

}  // namespace kitesim
