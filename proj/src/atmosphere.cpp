#include "kitesim/atmosphere.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "kitesim/error.hpp"

namespace kitesim {

const char* to_string(WindLaw law) {
  switch (law) {
    case WindLaw::Power: return "power";
    case WindLaw::Log: return "log";
    case WindLaw::Blended: return "blended";
  }
  return "blended";
}

WindLaw wind_law_from_string(const std::string& name) {
  if (name == "power") return WindLaw::Power;
  if (name == "log") return WindLaw::Log;
  if (name == "blended") return WindLaw::Blended;
  throw Error(ErrorKind::Config, "unknown wind law '" + name + "'");
}

void WindProfile::validate() const {
  if (!(z0 > 0.0)) throw Error(ErrorKind::Domain, "wind profile: z0 must be > 0");
  if (!(z_ref > z0)) throw Error(ErrorKind::Domain, "wind profile: z_ref must exceed z0");
  if (!(v_w_ref >= 0.0)) throw Error(ErrorKind::Domain, "wind profile: v_w_ref must be >= 0");
  if (!(turbulence_intensity >= 0.0))
    throw Error(ErrorKind::Domain, "wind profile: turbulence_intensity must be >= 0");
}

void AirDensityModel::validate() const {
  if (!(rho0 > 0.0) || !(H_rho > 0.0))
    throw Error(ErrorKind::Domain, "air density model: rho0 and H_rho must be > 0");
}

namespace {

double power_law(const WindProfile& p, double z) {
  return p.v_w_ref * std::pow(z / p.z_ref, p.alpha_exp);
}

double log_law(const WindProfile& p, double z) {
  return p.v_w_ref * std::log(z / p.z0) / std::log(p.z_ref / p.z0);
}

}  // namespace

double wind_speed(const WindProfile& profile, double z, WindLaw law) {
  if (!std::isfinite(z) || z <= 0.0)
    throw Error(ErrorKind::Domain, "wind_speed: height must be finite and > 0");
  const double h = std::max(z, profile.z0);
  double v = 0.0;
  switch (law) {
    case WindLaw::Power: v = power_law(profile, h); break;
    case WindLaw::Log: v = log_law(profile, h); break;
    case WindLaw::Blended: {
      const double v_log = log_law(profile, h);
      v = v_log + profile.K * (v_log - power_law(profile, h));
      break;
    }
  }
  return std::max(v, 0.0);
}

double fit_exponent(const WindProfile& profile, double z1) {
  if (!(z1 > profile.z_ref))
    throw Error(ErrorKind::Domain, "fit_exponent: z1 must exceed z_ref");
  if (profile.v_w_ref <= 0.0) return 0.0;
  return std::log(log_law(profile, z1) / profile.v_w_ref) / std::log(z1 / profile.z_ref);
}

WindProfile fit_profile(const std::array<WindSample, 3>& samples, double z_ref,
                        double v_w_ref) {
  if (!(samples[0].height < samples[1].height && samples[1].height < samples[2].height))
    throw Error(ErrorKind::Domain, "fit_profile: heights must be strictly increasing");
  if (std::abs(samples[0].height - z_ref) > 1e-9 * z_ref)
    throw Error(ErrorKind::Domain, "fit_profile: first sample must be at z_ref");
  if (!(v_w_ref > 0.0) || !(samples[1].speed > 0.0))
    throw Error(ErrorKind::Domain, "fit_profile: speeds must be positive");

  // With alpha fitted at z1 the blend term vanishes there, so the middle
  // sample pins z0 alone: r = ln(z1/z0)/ln(z_ref/z0) has a closed-form root.
  const double r = samples[1].speed / v_w_ref;
  const double z1 = samples[1].height;
  const double z2 = samples[2].height;

  auto report = [&](const std::string& reason, double z0, double K) {
    std::ostringstream os;
    os << "fit_profile: " << reason << " (z0=" << z0 << ", K=" << K << ")";
    return Error(ErrorKind::FitFailure, os.str());
  };

  if (std::abs(r - 1.0) < 1e-12) throw report("speed ratio at z1 is one; z0 undefined", 0.0, 0.0);
  const double log_z0 = (r * std::log(z_ref) - std::log(z1)) / (r - 1.0);
  const double z0 = std::exp(log_z0);

  WindProfile fitted;
  fitted.v_w_ref = v_w_ref;
  fitted.z_ref = z_ref;
  fitted.z0 = z0;
  fitted.K = 0.0;
  fitted.turbulence_intensity = 0.0;
  if (!(z0 >= 1e-6 && z0 <= 1.0)) throw report("z0 outside [1e-6, 1]", z0, 0.0);
  fitted.alpha_exp = fit_exponent(fitted, z1);

  const double v_log2 = log_law(fitted, z2);
  const double v_exp2 = power_law(fitted, z2);
  const double denom = v_log2 - v_exp2;
  const double numer = samples[2].speed - v_log2;
  if (std::abs(denom) > 1e-12) {
    fitted.K = numer / denom;
  } else if (std::abs(numer) > 1e-6) {
    throw report("log and power laws coincide at z2 but sample deviates", z0, 0.0);
  }
  if (!(fitted.K >= -5.0 && fitted.K <= 5.0)) throw report("K outside [-5, 5]", z0, fitted.K);

  for (const auto& s : samples) {
    const double residual = wind_speed(fitted, s.height, WindLaw::Blended) - s.speed;
    if (std::abs(residual) > 1e-6) {
      std::ostringstream os;
      os << "residual " << residual << " m/s at z=" << s.height;
      throw report(os.str(), z0, fitted.K);
    }
  }
  return fitted;
}

double air_density(const AirDensityModel& model, double z) {
  if (!std::isfinite(z) || z < 0.0)
    throw Error(ErrorKind::Domain, "air_density: height must be >= 0");
  return model.rho0 * std::exp(-z / model.H_rho);
}

Turbulence::Turbulence(std::uint64_t seed, double time_constant)
    : rng_(seed), tau_(time_constant) {
  prev_ = draw();
  next_ = prev_;
}

Vec3 Turbulence::draw() {
  const double a = normal_(rng_);
  const double b = normal_(rng_);
  const double c = normal_(rng_);
  return Vec3(a, b, c);
}

void Turbulence::advance(double t_next) {
  const double dt = t_next - t_next_;
  prev_ = next_;
  t_prev_ = t_next_;
  t_next_ = t_next;
  if (dt <= 0.0) return;
  // Exact discretisation of the Ornstein-Uhlenbeck process: unit stationary
  // variance independent of dt.
  const double a = std::exp(-dt / tau_);
  next_ = a * prev_ + std::sqrt(1.0 - a * a) * draw();
}

Vec3 Turbulence::sample(double t) const {
  if (t_next_ <= t_prev_) return next_;
  const double s = std::clamp((t - t_prev_) / (t_next_ - t_prev_), 0.0, 1.0);
  return (1.0 - s) * prev_ + s * next_;
}

WindField::WindField(WindProfile profile, WindLaw law, AirDensityModel density,
                     std::uint64_t seed)
    : profile_(profile), law_(law), density_(density), turbulence_(seed) {
  profile_.validate();
  density_.validate();
}

Vec3 WindField::wind_vector(double z, double t) const {
  const double h = std::max(z, profile_.z0);
  const double mean = wind_speed(profile_, h, law_);
  Vec3 v(mean, 0.0, 0.0);
  if (profile_.turbulence_intensity > 0.0)
    v += profile_.turbulence_intensity * mean * turbulence_.sample(t);
  return v;
}

double WindField::density(double z) const {
  return air_density(density_, std::max(z, 0.0));
}

void WindField::advance(double t_next) {
  if (profile_.turbulence_intensity > 0.0) turbulence_.advance(t_next);
}

}  // namespace kitesim
