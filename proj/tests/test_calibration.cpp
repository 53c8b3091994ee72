#include <doctest.h>

#include <cmath>
#include <random>

#include "kitesim/calibration.hpp"
#include "kitesim/config.hpp"
#include "kitesim/error.hpp"

using namespace kitesim;

namespace {

struct TurnLaw {
  double c0 = -0.003, c1 = 0.261, c2 = 6.28;
  double operator()(double v_a, double u_s, double psi, double beta) const {
    return c1 * v_a * (u_s - c0) + c2 * std::sin(psi) * std::cos(beta) / v_a;
  }
};

std::vector<TurnRateSample> synthetic_turns(const TurnLaw& law, double noise, int n,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> va(15.0, 30.0), us(-0.3, 0.3), psi(-kPi, kPi),
      beta(0.3, 1.2);
  std::normal_distribution<double> eps(0.0, noise);
  std::vector<TurnRateSample> out;
  for (int i = 0; i < n; ++i) {
    TurnRateSample s{0.0, va(rng), us(rng), psi(rng), beta(rng)};
    s.psi_dot = law(s.v_a, s.u_s, s.psi, s.beta) + (noise > 0.0 ? eps(rng) : 0.0);
    out.push_back(s);
  }
  return out;
}

LogRecord record(FlightPhase phase, double power) {
  LogRecord r;
  r.phase = phase;
  r.power = power;
  r.force = phase == FlightPhase::ReelIn ? 800.0 : 3000.0;
  r.v_t_o = phase == FlightPhase::ReelIn ? -7.0 : 1.5;
  return r;
}

// Two cycles of n_out reel-out and n_in reel-in records bracketed by reel-in
// and a final reel-out start.
CycleLog synthetic_cycles(int n_out, int n_in, double p_out, double p_in) {
  CycleLog log;
  for (int k = 0; k < 5; ++k) log.push_back(record(FlightPhase::ReelIn, -p_in));
  for (int c = 0; c < 2; ++c) {
    for (int k = 0; k < n_out; ++k)
      log.push_back(record(k % 2 ? FlightPhase::ReelOutLeft : FlightPhase::ReelOutRight, p_out));
    for (int k = 0; k < n_in; ++k) log.push_back(record(FlightPhase::ReelIn, -p_in));
  }
  log.push_back(record(FlightPhase::ReelOutRight, p_out));
  return log;
}

SimConfig parking_config() {
  SimConfig c = parse_config(
      "atmosphere:\n  law: power\n  alpha_exp: 0.142857\n  turbulence_intensity: 0\n"
      "kite:\n  model: 1p\n");
  c.scenario.settle_time = 1.0;
  return c;
}

}  // namespace

TEST_CASE("pearson correlation") {
  const std::vector<double> a{1, 2, 3}, b{1, 2, 4}, c{3, 2, 1};
  CHECK(pearson(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pearson(a, c) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(pearson(a, b) == doctest::Approx(0.9820).epsilon(1e-4));
  const std::vector<double> flat{2, 2, 2};
  try {
    pearson(a, flat);
    FAIL("expected undefined correlation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UndefinedCorrelation);
  }
  CHECK_THROWS_AS(pearson(a, std::vector<double>{1, 2}), Error);
}

TEST_CASE("moving average") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  const auto y = moving_average(x, 3);
  CHECK(y[0] == 1.0);  // window shrinks symmetrically at the ends
  CHECK(y[1] == doctest::Approx(2.0));
  CHECK(y[4] == doctest::Approx(5.0));
  CHECK(y[5] == 6.0);
  CHECK(moving_average(x, 1) == x);
}

TEST_CASE("turn-rate fit recovers the synthetic law") {
  const TurnLaw law;
  const auto s = synthetic_turns(law, 0.002, 5000, 17);
  const TurnRateFit f = fit_turn_rate(s);
  CHECK(f.c0 == doctest::Approx(law.c0).epsilon(0.02));
  CHECK(f.c1 == doctest::Approx(law.c1).epsilon(0.02));
  CHECK(f.c2 == doctest::Approx(law.c2).epsilon(0.02));
  CHECK(f.sigma == doctest::Approx(0.002).epsilon(0.05));
  CHECK(f.rho_pcc > 0.999);
  CHECK(f.samples == 5000);
}

TEST_CASE("noise-free samples correlate perfectly") {
  const auto s = synthetic_turns(TurnLaw{}, 0.0, 500, 3);
  const TurnRateFit f = fit_turn_rate(s);
  CHECK(f.rho_pcc == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f.sigma < 1e-10);
}

TEST_CASE("scaling the turn rate scales the gains but not the offset or correlation") {
  const auto s = synthetic_turns(TurnLaw{}, 0.002, 2000, 5);
  auto scaled = s;
  for (auto& x : scaled) x.psi_dot *= 3.0;
  const TurnRateFit a = fit_turn_rate(s), b = fit_turn_rate(scaled);
  CHECK(b.c1 == doctest::Approx(3.0 * a.c1).epsilon(1e-9));
  CHECK(b.c2 == doctest::Approx(3.0 * a.c2).epsilon(1e-9));
  CHECK(b.c0 == doctest::Approx(a.c0).epsilon(1e-9));
  CHECK(b.rho_pcc == doctest::Approx(a.rho_pcc).epsilon(1e-12));
}

TEST_CASE("unidentifiable turn-rate terms are named") {
  auto s = synthetic_turns(TurnLaw{}, 0.002, 500, 8);
  auto no_gravity = s;
  for (auto& x : no_gravity) x.psi = 0.0;
  try {
    fit_turn_rate(no_gravity);
    FAIL("expected unidentifiable c2");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unidentifiable);
    CHECK(std::string(e.what()).find("c2") != std::string::npos);
  }
  auto fixed_steering = s;
  for (auto& x : fixed_steering) x.u_s = 0.1;
  try {
    fit_turn_rate(fixed_steering);
    FAIL("expected unidentifiable c1");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unidentifiable);
    CHECK(std::string(e.what()).find("c1") != std::string::npos);
  }
  s.resize(50);
  CHECK_THROWS_AS(fit_turn_rate(s), Error);
}

TEST_CASE("turn-rate samples come from reel-out after the skip") {
  CycleLog log;
  const double dt = 0.05;
  for (int i = 0; i < 2000; ++i) {
    LogRecord r;
    r.t = dt * (i + 1);
    r.phase = i < 1000 ? FlightPhase::ReelOutRight : FlightPhase::ReelIn;
    r.heading = 0.1 * r.t;  // constant turn rate
    r.v_a = 20.0;
    r.elevation_deg = 30.0;
    log.push_back(r);
  }
  const auto s = turn_rate_samples(log, dt);
  CHECK(s.size() == 800);
  CHECK(s[400].psi_dot == doctest::Approx(0.1));
  CHECK(s[400].beta == doctest::Approx(deg2rad(30.0)));
}

TEST_CASE("cycle metrics identities") {
  const CycleLog log = synthetic_cycles(803, 197, 1000.0, 0.203 * 803.0 * 1000.0 / 197.0);
  const CycleMetrics m = cycle_metrics(log, 0.05);
  CHECK(m.duty == doctest::Approx(0.803).epsilon(1e-12));
  CHECK(m.eta_p == doctest::Approx(0.797).epsilon(1e-12));
  CHECK(m.eta_cyc == doctest::Approx(0.640).epsilon(1e-3));
  CHECK(std::abs(m.eta_cyc - m.eta_p * m.duty) < 1e-9);
  CHECK(m.t_cycle == doctest::Approx(50.0));
  CHECK(m.p_av == doctest::Approx(0.797 * 803.0 * 1000.0 / 1000.0).epsilon(1e-12));
  CHECK(m.F_t_o == 3000.0);
  CHECK(m.v_t_i == -7.0);
  CHECK(complete_cycles(log).size() == 2);
}

TEST_CASE("cycle metrics limits") {
  const CycleMetrics free_in = cycle_metrics(synthetic_cycles(100, 50, 2000.0, 0.0), 0.05);
  CHECK(free_in.eta_p == 1.0);
  std::vector<LogRecord> constant(300, record(FlightPhase::ReelOutRight, 1500.0));
  const CycleMetrics c = cycle_metrics(std::span<const LogRecord>(constant), 0.05);
  CHECK(c.p_av == doctest::Approx(1500.0));
  CHECK(c.duty == 1.0);
  try {
    cycle_metrics(CycleLog(constant.begin(), constant.end()), 0.05);
    FAIL("expected insufficient data");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientData);
  }
}

TEST_CASE("reference parameter values are the defaults") {
  const SimConfig c = parse_config("");
  CHECK(get_param(c, ParkingParam::Z0) == 2e-4);
  CHECK(get_param(c, ParkingParam::K) == 1.0);
  CHECK(get_param(c, ParkingParam::AlphaDMax) == doctest::Approx(31.0));
  CHECK(get_param(c, ParkingParam::CDT) == doctest::Approx(0.96));
  CHECK(get_param(c, ParkingParam::UD0) == doctest::Approx(0.213));
  SimConfig d = c;
  set_param(d, ParkingParam::AlphaDMax, 25.0);
  CHECK(d.model.kite.alpha_d_max == doctest::Approx(deg2rad(25.0)));
  for (ParkingParam p : {ParkingParam::UD0, ParkingParam::AlphaDMax, ParkingParam::Z0,
                         ParkingParam::K, ParkingParam::CDT})
    CHECK(parking_param_from_string(to_string(p)) == p);
  CHECK_THROWS_AS(parking_param_from_string("span"), Error);
}

TEST_CASE("parking without wind has no equilibrium") {
  const ParkingResult r = parking_equilibrium(parking_config(), 0.0, 392.0, 0.25, {1.0, 1.0});
  CHECK_FALSE(r.equilibrium);
  CHECK(r.reason == "no wind");
}

TEST_CASE("parking fit recovers the depower offset") {
  SimConfig truth = parking_config();
  truth.model.kite.u_d0 = 0.234;
  const ParkingOptions po{20.0, 10.0};
  std::vector<ParkingCase> cases;
  for (double v : {7.0, 9.0}) {
    ParkingResult r = parking_equilibrium(truth, v, 392.0, 0.25, po);
    REQUIRE(r.equilibrium);
    r.measured.force_std = 10.0;
    r.measured.elevation_std = 0.5;
    cases.push_back(r.measured);
  }
  SimConfig start = truth;
  start.model.kite.u_d0 = 0.20;
  ParkingFitOptions fo;
  fo.parking = po;
  fo.max_evaluations = 40;
  fo.tolerance = 1e-4;
  const ParkingFit fit = fit_parking_params(start, cases, {ParkingParam::UD0}, fo);
  MESSAGE("u_d0 " << fit.values[0] << " after " << fit.evaluations << " evaluations");
  CHECK(std::abs(fit.values[0] - 0.234) < 0.005);
  CHECK(fit.success);
  CHECK(fit.warnings.empty());
}

TEST_CASE("duplicate parking cases are flagged") {
  ParkingCase c;
  c.force = 700.0;
  c.force_std = 50.0;
  c.elevation_deg = 68.0;
  c.elevation_std = 1.0;
  ParkingFitOptions fo;
  fo.parking = {2.0, 2.0};
  fo.max_evaluations = 3;
  const ParkingFit fit = fit_parking_params(parking_config(), {c, c}, {ParkingParam::UD0}, fo);
  REQUIRE_FALSE(fit.warnings.empty());
  CHECK(fit.warnings[0].find("under-determined") != std::string::npos);
}

TEST_CASE("reports are key=value lines") {
  TurnRateFit f;
  f.c1 = 0.25;
  const std::string text = report(f);
  CHECK(text.find("turn_rate.c1=0.25\n") != std::string::npos);
  CHECK(text.back() == '\n');
}
