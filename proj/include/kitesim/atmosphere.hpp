#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "kitesim/vec.hpp"

namespace kitesim {

enum class WindLaw { Power, Log, Blended };

const char* to_string(WindLaw law);
WindLaw wind_law_from_string(const std::string& name);

struct WindProfile {
  double v_w_ref = 9.51;  // m/s at z_ref
  double z_ref = 6.0;     // m
  double z0 = 2.0e-4;     // roughness length, m
  double K = 1.0;         // blend coefficient
  double alpha_exp = 1.0 / 7.0;
  double turbulence_intensity = 0.0;

  /// Throws Error(Domain) when an invariant is violated.
  void validate() const;
};

struct AirDensityModel {
  double rho0 = 1.225;   // kg/m^3
  double H_rho = 8550.0; // m

  void validate() const;
};

/// Wind speed at height z. Heights below z0 are clamped to z0.
double wind_speed(const WindProfile& profile, double z, WindLaw law);

/// Exponent that makes the power law meet the log law at z1.
double fit_exponent(const WindProfile& profile, double z1);

struct WindSample {
  double height;
  double speed;
};

/// Fits (z0, K) of the blended profile to three measured speeds; the first
/// sample must sit at z_ref. alpha_exp is set by fit_exponent at the middle
/// height.
WindProfile fit_profile(const std::array<WindSample, 3>& samples, double z_ref,
                        double v_w_ref);

double air_density(const AirDensityModel& model, double z);

/// First-order low-pass filtered Gaussian noise with unit variance per
/// component. Advanced once per control interval and linearly interpolated
/// in between so the solver sees a continuous wind field.
class Turbulence {
 public:
  Turbulence(std::uint64_t seed, double time_constant = 2.0);

  void advance(double t_next);
  Vec3 sample(double t) const;

 private:
  Vec3 draw();

  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  double tau_;
  double t_prev_ = 0.0;
  double t_next_ = 0.0;
  Vec3 prev_;
  Vec3 next_;
};

/// Horizontal wind along +x plus optional turbulence; owned by one simulation.
class WindField {
 public:
  WindField(WindProfile profile, WindLaw law, AirDensityModel density,
            std::uint64_t seed);

  Vec3 wind_vector(double z, double t) const;
  double density(double z) const;
  double speed(double z) const { return wind_speed(profile_, z, law_); }

  /// Latches the turbulence state for the interval ending at t_next.
  void advance(double t_next);

  const WindProfile& profile() const { return profile_; }
  WindLaw law() const { return law_; }

 private:
  WindProfile profile_;
  WindLaw law_;
  AirDensityModel density_;
  Turbulence turbulence_;
};

}  // namespace kitesim
