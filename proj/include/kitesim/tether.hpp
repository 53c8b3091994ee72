#pragma once

#include <span>
#include <vector>

#include "kitesim/vec.hpp"

namespace kitesim {

class WindField;

struct TetherParams {
  int n_segments = 7;
  double d_t = 0.004;        // diameter, m
  double sigma = 0.013;      // linear density, kg/m
  double k0 = 614600.0;      // unit spring constant, N
  double c0 = 473.0;         // unit damping coefficient, N s
  double c_d_t = 0.96;       // drag coefficient
  double compression_stiffness_factor = 0.1;
  double min_segment_length = 1.0;  // m

  void validate() const;
};

struct SegmentState {
  Vec3 s;    // particle i -> i+1, m
  Vec3 s_v;  // velocity of i+1 relative to i, m/s
  double l_s;
  double k;
  double c;
};

/// Reeling description latched at the start of a control interval.
struct ReelState {
  double l_t_i;  // tether length at interval start, m
  double v_t_o;  // reel-out speed, m/s
  double t_i;    // interval start time, s
};

double segment_rest_length(const ReelState& reel, double t, int n,
                           double min_length = 0.0);

struct SegmentConstants {
  double k;
  double c;
};

SegmentConstants segment_constants(const TetherParams& params, double l_s);

/// Force on particle i; particle i+1 receives the negation.
Vec3 spring_force(const SegmentState& seg, double compression_factor);

Vec3 segment_drag(const Vec3& v_w_s, const Vec3& v_i, const Vec3& v_i1,
                  const Vec3& s_i, double rho, const TetherParams& params);

/// Inputs for evaluating the forces of the whole chain. positions/velocities
/// hold n_segments + 1 particles; index 0 is the ground-station anchor.
struct TetherForceInputs {
  std::span<const Vec3> positions;
  std::span<const Vec3> velocities;
  double l_s;
  double t;
  const WindField* wind;  // nullptr means still air at sea-level density
};

/// Per-particle forces including gravity on the lumped tether masses.
/// Entry 0 is the total force the tether exerts on the anchor (the
/// ground-station tether force); the last particle has no upper segment.
std::vector<Vec3> particle_forces(const TetherForceInputs& in, const TetherParams& params);

/// Same as particle_forces but accumulates into out (size n_segments + 1).
void accumulate_particle_forces(const TetherForceInputs& in, const TetherParams& params,
                                std::span<Vec3> out);

/// Lumped masses of particles 0..n (half a segment at each end).
std::vector<double> particle_masses(const TetherParams& params, double l_s);

/// A free-ended chain hanging from (or anchored at) a fixed point, used for
/// standalone tether studies. State layout: positions of particles 1..n,
/// then their velocities.
struct TetherChain {
  TetherParams params;
  Vec3 anchor = Vec3::Zero();
  ReelState reel{0.0, 0.0, 0.0};
  double tip_mass = 0.0;  // extra mass lumped at the last particle
  const WindField* wind = nullptr;

  int dimension() const { return 6 * params.n_segments; }
  double rest_length(double t) const;
  /// Residual R = (v - p_dot, f/m - v_dot).
  VecX residual(double t, const VecX& y, const VecX& ydot) const;
  /// Derivative g(t, y) with R = g - ydot.
  VecX derivative(double t, const VecX& y) const;
  /// Force on the anchor (norm is the ground-station tether force).
  Vec3 anchor_force(double t, const VecX& y) const;
  /// Kinetic + gravitational + elastic energy (gravity referenced to z = 0).
  double mechanical_energy(double t, const VecX& y) const;
};

}  // namespace kitesim
