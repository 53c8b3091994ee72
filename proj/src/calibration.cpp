#include "kitesim/calibration.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "kitesim/error.hpp"
#include "kitesim/runner.hpp"

namespace kitesim {

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::Domain, "pearson: series lengths differ");
  if (a.size() < 2) throw Error(ErrorKind::InsufficientData, "pearson: need at least 2 samples");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0))
    throw Error(ErrorKind::UndefinedCorrelation, "pearson: constant series");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> moving_average(std::span<const double> x, std::size_t window) {
  const std::size_t n = x.size();
  const std::size_t h = window / 2;
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = std::min({h, i, n - 1 - i});
    out[i] = (prefix[i + k + 1] - prefix[i - k]) / static_cast<double>(2 * k + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<TurnRateSample> turn_rate_samples(const CycleLog& log, double interval,
                                              const TurnRateExtraction& options) {
  const std::size_t n = log.size();
  if (n < 3) throw Error(ErrorKind::InsufficientData, "turn_rate_samples: log too short");
  std::vector<double> psi(n), psi_dot(n), v_a(n), u_s(n), beta(n);
  for (std::size_t i = 0; i < n; ++i) {
    const LogRecord& r = log[i];
    psi[i] = r.heading;
    if (i > 0) {
      const double d = std::remainder(psi[i] - psi[i - 1], 2.0 * kPi);
      psi[i] = psi[i - 1] + d;
    }
    v_a[i] = r.v_a;
    u_s[i] = options.commanded_steering ? r.i_s : r.u_s;
    beta[i] = deg2rad(r.elevation_deg);
  }
  psi_dot[0] = (psi[1] - psi[0]) / interval;
  psi_dot[n - 1] = (psi[n - 1] - psi[n - 2]) / interval;
  for (std::size_t i = 1; i + 1 < n; ++i) psi_dot[i] = (psi[i + 1] - psi[i - 1]) / (2.0 * interval);

  const auto window = static_cast<std::size_t>(std::lround(options.smoothing / interval)) | 1u;
  psi_dot = moving_average(psi_dot, window);
  v_a = moving_average(v_a, window);
  u_s = moving_average(u_s, window);
  psi = moving_average(psi, window);
  beta = moving_average(beta, window);

  const auto skip = static_cast<std::size_t>(std::lround(options.skip / interval));
  std::vector<TurnRateSample> out;
  std::size_t phase_start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool out_now = is_reel_out(log[i].phase);
    if (out_now && (i == 0 || !is_reel_out(log[i - 1].phase))) phase_start = i;
    if (!out_now || i < skip || i < phase_start + skip) continue;
    out.push_back({psi_dot[i], v_a[i], u_s[i], psi[i], beta[i]});
  }
  return out;
}

namespace {

// Share of column j not explained by the other columns (1 - R^2 without
// intercept); zero for a column that is a combination of the others.
double unexplained_share(const Eigen::MatrixXd& X, int j) {
  const double norm2 = X.col(j).squaredNorm();
  if (!(norm2 > 0.0)) return 0.0;
  Eigen::MatrixXd others(X.rows(), X.cols() - 1);
  for (int c = 0, k = 0; c < X.cols(); ++c)
    if (c != j) others.col(k++) = X.col(c);
  const Eigen::VectorXd coef = others.colPivHouseholderQr().solve(X.col(j));
  return (X.col(j) - others * coef).squaredNorm() / norm2;
}

}  // namespace

TurnRateFit fit_turn_rate(std::span<const TurnRateSample> samples) {
  const std::size_t n = samples.size();
  if (n < 100)
    throw Error(ErrorKind::InsufficientData, "fit_turn_rate: need at least 100 samples, got " +
                                                 std::to_string(n));
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const TurnRateSample& s = samples[i];
    if (!(s.v_a > 0.5))
      throw Error(ErrorKind::Domain, "fit_turn_rate: v_a must exceed 0.5 m/s");
    const auto r = static_cast<Eigen::Index>(i);
    X(r, 0) = s.v_a * s.u_s;
    X(r, 1) = s.v_a;
    X(r, 2) = std::sin(s.psi) * std::cos(s.beta) / s.v_a;
    y(r) = s.psi_dot;
  }
  constexpr double kRankTol = 1e-10;
  if (unexplained_share(X, 2) < kRankTol)
    throw Error(ErrorKind::Unidentifiable,
                "fit_turn_rate: c2 unidentifiable (gravity regressor sin(psi)cos(beta)/v_a is "
                "zero or collinear)");
  if (unexplained_share(X, 0) < kRankTol)
    throw Error(ErrorKind::Unidentifiable,
                "fit_turn_rate: c1 unidentifiable (steering input constant or collinear)");
  if (unexplained_share(X, 1) < kRankTol)
    throw Error(ErrorKind::Unidentifiable, "fit_turn_rate: c0 unidentifiable (v_a collinear)");

  const Eigen::Matrix3d A = X.transpose() * X;
  const Eigen::Vector3d b = X.transpose() * y;
  const Eigen::Vector3d coef = A.ldlt().solve(b);

  TurnRateFit fit;
  fit.samples = n;
  fit.c1 = coef(0);
  fit.c2 = coef(2);
  if (std::abs(fit.c1) < 1e-6)
    throw Error(ErrorKind::Unidentifiable, "fit_turn_rate: c0 unidentifiable (|c1| < 1e-6)");
  fit.c0 = -coef(1) / fit.c1;

  const Eigen::VectorXd fitted = X * coef;
  std::vector<double> f(fitted.data(), fitted.data() + n);
  std::vector<double> m(y.data(), y.data() + n);
  fit.rho_pcc = pearson(f, m);
  fit.sigma = std::sqrt((y - fitted).squaredNorm() / static_cast<double>(n));
  return fit;
}

// ---------------------------------------------------------------------------

ParkingResult parking_equilibrium(const SimConfig& config, double v_w_ref, double l_t,
                                  double u_d, const ParkingOptions& options) {
  ParkingResult res;
  res.measured.v_w_ref = v_w_ref;
  res.measured.l_t = l_t;
  res.measured.u_d = u_d;

  SimConfig c = config;
  c.atmosphere.profile.v_w_ref = v_w_ref;
  c.scenario.l_t0 = l_t;
  c.scenario.initial_phase = FlightPhase::Parking;
  c.scenario.lock_winch = true;
  c.control.planner.cycle = false;
  c.control.depower.parking = u_d;

  const double dt = c.solver.interval;
  const long n_settle = std::lround(options.settle / dt);
  const long n_window = std::lround(options.window / dt);
  double sf = 0.0, sf2 = 0.0, se = 0.0, se2 = 0.0;
  try {
    if (!(v_w_ref > 0.0)) throw Error(ErrorKind::NonEquilibrium, "no wind");
    Simulator sim(c);
    for (long k = 0; k < n_settle; ++k) sim.step();
    for (long k = 0; k < n_window; ++k) {
      const LogRecord r = sim.step();
      sf += r.force;
      sf2 += r.force * r.force;
      se += r.elevation_deg;
      se2 += r.elevation_deg * r.elevation_deg;
    }
  } catch (const Error& e) {
    res.reason = e.what();
    return res;
  }
  const double nw = static_cast<double>(n_window);
  ParkingCase& m = res.measured;
  m.force = sf / nw;
  m.force_std = std::sqrt(std::max(0.0, sf2 / nw - m.force * m.force));
  m.elevation_deg = se / nw;
  m.elevation_std = std::sqrt(std::max(0.0, se2 / nw - m.elevation_deg * m.elevation_deg));
  if (!(m.force > 0.0) || m.force_std > 0.5 * m.force) {
    std::ostringstream os;
    os << "force did not settle (mean " << m.force << " N, std " << m.force_std << " N)";
    res.reason = os.str();
    return res;
  }
  res.equilibrium = true;
  return res;
}

const char* to_string(ParkingParam p) {
  switch (p) {
    case ParkingParam::UD0: return "u_d0";
    case ParkingParam::AlphaDMax: return "alpha_d_max";
    case ParkingParam::Z0: return "z0";
    case ParkingParam::K: return "K";
    case ParkingParam::CDT: return "c_d_t";
  }
  return "?";
}

ParkingParam parking_param_from_string(const std::string& name) {
  for (ParkingParam p : {ParkingParam::UD0, ParkingParam::AlphaDMax, ParkingParam::Z0,
                         ParkingParam::K, ParkingParam::CDT})
    if (name == to_string(p)) return p;
  throw Error(ErrorKind::Config, "unknown parking parameter '" + name + "'");
}

// alpha_d_max is exchanged in degrees.
double get_param(const SimConfig& c, ParkingParam p) {
  switch (p) {
    case ParkingParam::UD0: return c.model.kite.u_d0;
    case ParkingParam::AlphaDMax: return rad2deg(c.model.kite.alpha_d_max);
    case ParkingParam::Z0: return c.atmosphere.profile.z0;
    case ParkingParam::K: return c.atmosphere.profile.K;
    case ParkingParam::CDT: return c.model.tether.c_d_t;
  }
  return 0.0;
}

void set_param(SimConfig& c, ParkingParam p, double v) {
  switch (p) {
    case ParkingParam::UD0: c.model.kite.u_d0 = v; break;
    case ParkingParam::AlphaDMax: c.model.kite.alpha_d_max = deg2rad(v); break;
    case ParkingParam::Z0: c.atmosphere.profile.z0 = v; break;
    case ParkingParam::K: c.atmosphere.profile.K = v; break;
    case ParkingParam::CDT: c.model.tether.c_d_t = v; break;
  }
}

namespace {

constexpr double kPenalty = 1e6;

struct ParkingEvaluation {
  double objective = kPenalty;
  std::vector<ParkingResult> results;
  std::vector<double> force_error, elevation_error;
};

ParkingEvaluation evaluate_parking(const SimConfig& base, const std::vector<ParkingCase>& cases,
                                   const std::vector<ParkingParam>& free,
                                   const std::vector<double>& x, const ParkingFitOptions& opt) {
  ParkingEvaluation ev;
  SimConfig c = base;
  for (std::size_t i = 0; i < free.size(); ++i) set_param(c, free[i], x[i]);
  try {
    c.validate();
  } catch (const Error&) {
    return ev;
  }
  ev.results = map_cases(cases, [&](const ParkingCase& pc) {
    return parking_equilibrium(c, pc.v_w_ref, pc.l_t, pc.u_d, opt.parking);
  });
  double worst = 0.0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const ParkingCase& meas = cases[i];
    const ParkingResult& r = ev.results[i];
    if (!r.equilibrium) {
      ev.force_error.push_back(kPenalty);
      ev.elevation_error.push_back(kPenalty);
      worst = kPenalty;
      continue;
    }
    const double ef = (r.measured.force - meas.force) / std::max(meas.force_std, opt.min_sigma_force);
    const double ee = (r.measured.elevation_deg - meas.elevation_deg) /
                      std::max(meas.elevation_std, opt.min_sigma_elevation);
    ev.force_error.push_back(ef);
    ev.elevation_error.push_back(ee);
    worst = std::max({worst, std::abs(ef), std::abs(ee)});
  }
  ev.objective = worst;
  return ev;
}

}  // namespace

ParkingFit fit_parking_params(const SimConfig& base, const std::vector<ParkingCase>& cases,
                              const std::vector<ParkingParam>& free,
                              const ParkingFitOptions& opt) {
  if (cases.empty()) throw Error(ErrorKind::InsufficientData, "fit_parking_params: no cases");
  if (free.empty()) throw Error(ErrorKind::Domain, "fit_parking_params: no free parameters");
  ParkingFit fit;
  fit.free = free;
  for (std::size_t i = 0; i < cases.size(); ++i)
    for (std::size_t j = i + 1; j < cases.size(); ++j)
      if (cases[i].l_t == cases[j].l_t && cases[i].u_d == cases[j].u_d &&
          cases[i].v_w_ref == cases[j].v_w_ref)
        fit.warnings.push_back("under-determined: cases " + std::to_string(i) + " and " +
                               std::to_string(j) + " are duplicates");
  if (2 * cases.size() < free.size())
    fit.warnings.push_back("under-determined: more free parameters than residuals");

  const std::size_t d = free.size();
  std::vector<std::vector<double>> simplex(d + 1, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i) simplex[0][i] = get_param(base, free[i]);
  for (std::size_t k = 1; k <= d; ++k) {
    simplex[k] = simplex[0];
    const double x0 = simplex[0][k - 1];
    simplex[k][k - 1] = x0 + opt.step * (x0 != 0.0 ? x0 : 1.0);
  }
  std::vector<double> f(d + 1);
  auto eval = [&](const std::vector<double>& x) {
    ++fit.evaluations;
    return evaluate_parking(base, cases, free, x, opt).objective;
  };
  for (std::size_t k = 0; k <= d; ++k) f[k] = eval(simplex[k]);

  auto affine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> r(d);
    for (std::size_t i = 0; i < d; ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return r;
  };

  while (fit.evaluations < opt.max_evaluations) {
    std::vector<std::size_t> order(d + 1);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[d - 1];
    if (f[worst] - f[best] < opt.tolerance) {
      fit.converged = true;
      break;
    }
    std::vector<double> centroid(d, 0.0);
    for (std::size_t k = 0; k <= d; ++k)
      if (k != worst)
        for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[k][i] / static_cast<double>(d);

    const auto xr = affine(centroid, simplex[worst], -1.0);
    const double fr = eval(xr);
    if (fr < f[best]) {
      const auto xe = affine(centroid, simplex[worst], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        f[worst] = fe;
      } else {
        simplex[worst] = xr;
        f[worst] = fr;
      }
    } else if (fr < f[second]) {
      simplex[worst] = xr;
      f[worst] = fr;
    } else {
      const bool outside = fr < f[worst];
      const auto xc = outside ? affine(centroid, xr, 0.5) : affine(centroid, simplex[worst], 0.5);
      const double fc = eval(xc);
      if (fc < std::min(fr, f[worst])) {
        simplex[worst] = xc;
        f[worst] = fc;
      } else {
        for (std::size_t k = 0; k <= d; ++k) {
          if (k == best) continue;
          simplex[k] = affine(simplex[best], simplex[k], 0.5);
          f[k] = eval(simplex[k]);
        }
      }
    }
  }

  const std::size_t best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
  fit.values = simplex[best];
  ParkingEvaluation ev = evaluate_parking(base, cases, free, fit.values, opt);
  fit.cases = std::move(ev.results);
  fit.force_error = std::move(ev.force_error);
  fit.elevation_error = std::move(ev.elevation_error);
  fit.objective = ev.objective;
  fit.success = fit.objective < 1.0;
  if (!fit.converged) fit.warnings.push_back("iteration budget exhausted; best-so-far reported");
  return fit;
}

std::vector<ParkingVariant> parking_comparison(const SimConfig& config, const ParkingOptions& options,
                                               Execution exec) {
  const int segmented = config.model.tether.n_segments > 1 ? config.model.tether.n_segments : 7;
  std::vector<ParkingVariant> variants;
  for (KiteModelKind m : {KiteModelKind::OnePoint, KiteModelKind::FourPoint})
    for (int n : {1, segmented}) variants.push_back({m, n, {}});
  const auto& c = config;
  run_cases(
      variants.size(),
      [&](std::size_t i) {
        SimConfig v = c;
        v.model.kite_model = variants[i].model;
        v.model.tether.n_segments = variants[i].n_segments;
        variants[i].result = parking_equilibrium(v, c.atmosphere.profile.v_w_ref, c.scenario.l_t0,
                                                 c.control.depower.parking, options);
      },
      exec);
  return variants;
}

std::string parking_csv(const std::vector<ParkingVariant>& variants) {
  std::ostringstream os;
  os << "model,tether,n_segments,force,force_std,elevation_deg,elevation_std,equilibrium\n";
  char buf[256];
  for (const ParkingVariant& v : variants) {
    const ParkingCase& m = v.result.measured;
    std::snprintf(buf, sizeof buf, "%s,%s,%d,%.6g,%.6g,%.6g,%.6g,%s\n", to_string(v.model),
                  v.n_segments == 1 ? "straight" : "segmented", v.n_segments, m.force, m.force_std,
                  m.elevation_deg, m.elevation_std, v.result.equilibrium ? "true" : "false");
    os << buf;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

CycleMetrics cycle_metrics(std::span<const LogRecord> cycle, double interval) {
  if (cycle.empty()) throw Error(ErrorKind::InsufficientData, "cycle_metrics: empty cycle");
  CycleMetrics m;
  std::size_t n_out = 0, n_in = 0;
  for (const LogRecord& r : cycle) {
    const double e = r.power * interval;
    if (is_reel_out(r.phase)) {
      ++n_out;
      m.e_out += e;
      m.F_t_o += r.force;
      m.v_t_o += r.v_t_o;
    } else {
      ++n_in;
      m.e_in -= e;
      m.F_t_i += r.force;
      m.v_t_i += r.v_t_o;
    }
  }
  if (n_out == 0 || !(m.e_out > 0.0))
    throw Error(ErrorKind::InsufficientData, "cycle_metrics: no reel-out energy");
  if (n_out > 0) {
    m.F_t_o /= static_cast<double>(n_out);
    m.v_t_o /= static_cast<double>(n_out);
  }
  if (n_in > 0) {
    m.F_t_i /= static_cast<double>(n_in);
    m.v_t_i /= static_cast<double>(n_in);
  }
  m.t_cycle = static_cast<double>(cycle.size()) * interval;
  m.p_av = (m.e_out - m.e_in) / m.t_cycle;
  m.duty = static_cast<double>(n_out) / static_cast<double>(cycle.size());
  m.eta_p = (m.e_out - m.e_in) / m.e_out;
  m.eta_cyc = m.eta_p * m.duty;
  return m;
}

std::vector<std::pair<std::size_t, std::size_t>> complete_cycles(const CycleLog& log) {
  std::vector<std::size_t> starts;
  for (std::size_t i = 1; i < log.size(); ++i)
    if (is_reel_out(log[i].phase) && !is_reel_out(log[i - 1].phase)) starts.push_back(i);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t k = 1; k < starts.size(); ++k) out.emplace_back(starts[k - 1], starts[k]);
  return out;
}

CycleMetrics cycle_metrics(const CycleLog& log, double interval) {
  const auto cycles = complete_cycles(log);
  if (cycles.empty())
    throw Error(ErrorKind::InsufficientData, "cycle_metrics: log holds no complete cycle");
  const auto [a, b] = cycles.back();
  return cycle_metrics(std::span<const LogRecord>(log.data() + a, b - a), interval);
}

std::vector<SweepPoint> wind_sweep(const SimConfig& config, const std::vector<double>& v_w_refs,
                                   double duration, Execution exec) {
  std::vector<SweepPoint> points(v_w_refs.size());
  run_cases(
      points.size(),
      [&](std::size_t i) {
        SweepPoint& p = points[i];
        p.v_w_ref = v_w_refs[i];
        SimConfig c = config;
        c.atmosphere.profile.v_w_ref = v_w_refs[i];
        try {
          p.metrics = cycle_metrics(run_batch(c, duration), c.solver.interval);
          p.ok = true;
        } catch (const Error& e) {
          p.error = e.what();
        }
      },
      exec);
  return points;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream os;
  os << "v_w_ref,ok,t_cycle,p_av,duty,eta_p,eta_cyc,F_t_o,F_t_i,v_t_o,v_t_i\n";
  char buf[320];
  for (const SweepPoint& p : points) {
    const CycleMetrics& m = p.metrics;
    std::snprintf(buf, sizeof buf, "%.6g,%s,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n",
                  p.v_w_ref, p.ok ? "true" : "false", m.t_cycle, m.p_av, m.duty, m.eta_p,
                  m.eta_cyc, m.F_t_o, m.F_t_i, m.v_t_o, m.v_t_i);
    os << buf;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

class Report {
 public:
  explicit Report(std::string prefix) : prefix_(std::move(prefix)) { os_.precision(8); }
  template <class T>
  Report& kv(const std::string& key, const T& value) {
    os_ << prefix_ << '.' << key << '=' << value << '\n';
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::string prefix_;
  std::ostringstream os_;
};

}  // namespace

std::string report(const TurnRateFit& fit, const std::string& prefix) {
  return Report(prefix)
      .kv("c0", fit.c0)
      .kv("c1", fit.c1)
      .kv("c2", fit.c2)
      .kv("rho_pcc", fit.rho_pcc)
      .kv("sigma", fit.sigma)
      .kv("samples", fit.samples)
      .str();
}

std::string report(const CycleMetrics& m, const std::string& prefix) {
  return Report(prefix)
      .kv("t_cycle", m.t_cycle)
      .kv("F_t_o", m.F_t_o)
      .kv("F_t_i", m.F_t_i)
      .kv("v_t_o", m.v_t_o)
      .kv("v_t_i", m.v_t_i)
      .kv("p_av", m.p_av)
      .kv("eta_p", m.eta_p)
      .kv("duty", m.duty)
      .kv("eta_cyc", m.eta_cyc)
      .str();
}

std::string report(const ParkingResult& r, const std::string& prefix) {
  Report rep(prefix);
  rep.kv("v_w_ref", r.measured.v_w_ref)
      .kv("l_t", r.measured.l_t)
      .kv("u_d", r.measured.u_d)
      .kv("equilibrium", r.equilibrium ? "true" : "false");
  if (r.equilibrium) {
    rep.kv("force", r.measured.force)
        .kv("force_std", r.measured.force_std)
        .kv("elevation_deg", r.measured.elevation_deg)
        .kv("elevation_std", r.measured.elevation_std);
  } else {
    rep.kv("reason", r.reason);
  }
  return rep.str();
}

std::string report(const ParkingFit& fit, const std::string& prefix) {
  Report rep(prefix);
  for (std::size_t i = 0; i < fit.free.size(); ++i) rep.kv(to_string(fit.free[i]), fit.values[i]);
  for (std::size_t i = 0; i < fit.force_error.size(); ++i) {
    rep.kv("case" + std::to_string(i) + ".force_error", fit.force_error[i]);
    rep.kv("case" + std::to_string(i) + ".elevation_error", fit.elevation_error[i]);
  }
  rep.kv("objective", fit.objective)
      .kv("evaluations", fit.evaluations)
      .kv("converged", fit.converged ? "true" : "false")
      .kv("success", fit.success ? "true" : "false");
  for (const std::string& w : fit.warnings) rep.kv("warning", w);
  return rep.str();
}

}  // namespace kitesim
