#include "kitesim/tether.hpp"

#include <algorithm>
#include <cmath>

#include "kitesim/atmosphere.hpp"
#include "kitesim/error.hpp"

namespace kitesim {

void TetherParams::validate() const {
  if (n_segments < 1) throw Error(ErrorKind::Domain, "tether: n_segments must be >= 1");
  if (!(d_t > 0.0 && sigma > 0.0 && k0 > 0.0))
    throw Error(ErrorKind::Domain, "tether: d_t, sigma and k0 must be > 0");
  if (!(c0 >= 0.0 && c_d_t >= 0.0))
    throw Error(ErrorKind::Domain, "tether: c0 and c_d_t must be >= 0");
  if (!(compression_stiffness_factor > 0.0 && compression_stiffness_factor <= 1.0))
    throw Error(ErrorKind::Domain, "tether: compression_stiffness_factor must be in (0, 1]");
  if (!(min_segment_length >= 0.0))
    throw Error(ErrorKind::Domain, "tether: min_segment_length must be >= 0");
}

double segment_rest_length(const ReelState& reel, double t, int n, double min_length) {
  const double l_s = reel.l_t_i / n + reel.v_t_o * (t - reel.t_i) / n;
  if (!(l_s > 0.0))
    throw Error(ErrorKind::ReelInExhausted, "segment rest length is no longer positive");
  return std::max(l_s, min_length);
}

SegmentConstants segment_constants(const TetherParams& params, double l_s) {
  if (!(l_s > 0.0)) throw Error(ErrorKind::Domain, "segment_constants: l_s must be > 0");
  return {params.k0 / l_s, params.c0 / l_s};
}

Vec3 spring_force(const SegmentState& seg, double compression_factor) {
  const double len = seg.s.norm();
  if (len < 1e-9) throw Error(ErrorKind::SingularGeometry, "spring_force: coincident particles");
  const Vec3 unit = seg.s / len;
  const double stretch = len - seg.l_s;
  const double k = stretch < 0.0 ? seg.k * compression_factor : seg.k;
  return (k * stretch + seg.c * unit.dot(seg.s_v)) * unit;
}

Vec3 segment_drag(const Vec3& v_w_s, const Vec3& v_i, const Vec3& v_i1, const Vec3& s_i,
                  double rho, const TetherParams& params) {
  const double len = s_i.norm();
  if (len < 1e-9) throw Error(ErrorKind::SingularGeometry, "segment_drag: zero-length segment");
  const Vec3 unit = s_i / len;
  const Vec3 v_app = v_w_s - 0.5 * (v_i + v_i1);
  const Vec3 v_perp = v_app - v_app.dot(unit) * unit;
  return 0.5 * params.c_d_t * rho * v_perp.norm() * len * params.d_t * v_perp;
}

void accumulate_particle_forces(const TetherForceInputs& in, const TetherParams& params,
                                std::span<Vec3> out) {
  const int n = params.n_segments;
  const auto [k, c] = segment_constants(params, in.l_s);
  const double m_seg = params.sigma * in.l_s;
  const Vec3 g = gravity_vector();

  for (int i = 0; i < n; ++i) {
    const Vec3& p0 = in.positions[i];
    const Vec3& p1 = in.positions[i + 1];
    SegmentState seg{p1 - p0, in.velocities[i + 1] - in.velocities[i], in.l_s, k, c};
    Vec3 f;
    try {
      f = spring_force(seg, params.compression_stiffness_factor);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " (tether segment " + std::to_string(i) + ")");
    }
    Vec3 drag = Vec3::Zero();
    if (params.c_d_t > 0.0) {
      const double z_mid = 0.5 * (p0.z() + p1.z());
      Vec3 v_w = Vec3::Zero();
      double rho = 1.225;
      if (in.wind != nullptr) {
        v_w = in.wind->wind_vector(std::max(z_mid, 1e-3), in.t);
        rho = in.wind->density(z_mid);
      }
      drag = segment_drag(v_w, in.velocities[i], in.velocities[i + 1], seg.s, rho, params);
    }
    out[i] += f + 0.5 * drag + 0.5 * m_seg * g;
    out[i + 1] += -f + 0.5 * drag + 0.5 * m_seg * g;
  }
}

std::vector<Vec3> particle_forces(const TetherForceInputs& in, const TetherParams& params) {
  if (static_cast<int>(in.positions.size()) != params.n_segments + 1 ||
      in.velocities.size() != in.positions.size())
    throw Error(ErrorKind::Domain, "particle_forces: expected n_segments + 1 particles");
  std::vector<Vec3> out(in.positions.size(), Vec3::Zero());
  accumulate_particle_forces(in, params, out);
  return out;
}

std::vector<double> particle_masses(const TetherParams& params, double l_s) {
  std::vector<double> m(params.n_segments + 1, params.sigma * l_s);
  m.front() *= 0.5;
  m.back() *= 0.5;
  return m;
}

double TetherChain::rest_length(double t) const {
  return segment_rest_length(reel, t, params.n_segments, params.min_segment_length);
}

namespace {

void unpack(const TetherChain& chain, const VecX& y, std::vector<Vec3>& pos,
            std::vector<Vec3>& vel) {
  const int n = chain.params.n_segments;
  pos.assign(n + 1, chain.anchor);
  vel.assign(n + 1, Vec3::Zero());
  for (int i = 0; i < n; ++i) {
    pos[i + 1] = y.segment<3>(3 * i);
    vel[i + 1] = y.segment<3>(3 * n + 3 * i);
  }
}

}  // namespace

VecX TetherChain::derivative(double t, const VecX& y) const {
  const int n = params.n_segments;
  std::vector<Vec3> pos, vel;
  unpack(*this, y, pos, vel);
  const double l_s = rest_length(t);
  std::vector<Vec3> f(n + 1, Vec3::Zero());
  accumulate_particle_forces({pos, vel, l_s, t, wind}, params, f);
  const auto m = particle_masses(params, l_s);
  VecX g(dimension());
  for (int i = 0; i < n; ++i) {
    double mass = m[i + 1];
    if (i == n - 1) mass += tip_mass;
    g.segment<3>(3 * i) = vel[i + 1];
    g.segment<3>(3 * n + 3 * i) = f[i + 1] / mass;
  }
  return g;
}

VecX TetherChain::residual(double t, const VecX& y, const VecX& ydot) const {
  return derivative(t, y) - ydot;
}

Vec3 TetherChain::anchor_force(double t, const VecX& y) const {
  std::vector<Vec3> pos, vel;
  unpack(*this, y, pos, vel);
  std::vector<Vec3> f(params.n_segments + 1, Vec3::Zero());
  accumulate_particle_forces({pos, vel, rest_length(t), t, wind}, params, f);
  return f[0];
}

double TetherChain::mechanical_energy(double t, const VecX& y) const {
  const int n = params.n_segments;
  std::vector<Vec3> pos, vel;
  unpack(*this, y, pos, vel);
  const double l_s = rest_length(t);
  const auto m = particle_masses(params, l_s);
  const double k = params.k0 / l_s;
  double e = 0.0;
  for (int i = 0; i <= n; ++i) {
    double mass = m[i];
    if (i == n) mass += tip_mass;
    e += 0.5 * mass * vel[i].squaredNorm() + mass * kGravity * pos[i].z();
  }
  for (int i = 0; i < n; ++i) {
    const double x = (pos[i + 1] - pos[i]).norm() - l_s;
    const double ki = x < 0.0 ? k * params.compression_stiffness_factor : k;
    e += 0.5 * ki * x * x;
  }
  return e;
}

}  // namespace kitesim
