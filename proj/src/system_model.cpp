#include "kitesim/system_model.hpp"

#include <cmath>

#include "kitesim/error.hpp"

namespace kitesim {

const char* to_string(KiteModelKind kind) {
  switch (kind) {
    case KiteModelKind::OnePoint: return "1p";
    case KiteModelKind::FourPoint: return "4p";
    case KiteModelKind::None: return "none";
  }
  return "none";
}

KiteModelKind kite_model_from_string(const std::string& name) {
  if (name == "1p") return KiteModelKind::OnePoint;
  if (name == "4p") return KiteModelKind::FourPoint;
  if (name == "none") return KiteModelKind::None;
  throw Error(ErrorKind::Config, "unknown kite model '" + name + "' (expected 1p, 4p or none)");
}

void ModelConfig::validate() const {
  tether.validate();
  kite.validate();
  geometry.validate();
  winch.validate();
}

double heading_of(const Vec3& position, const Vec3& e_x) {
  const double r = position.norm();
  if (r < 1e-9) throw Error(ErrorKind::SingularGeometry, "heading: kite at the ground station");
  const Vec3 radial = position / r;
  Vec3 up = Vec3::UnitZ() - radial.z() * radial;
  if (up.norm() < 1e-9) {
    // At the zenith the meridians collapse; use the downwind meridian.
    up = -Vec3::UnitX();
  }
  up.normalize();
  const Vec3 east = up.cross(radial);
  return std::atan2(e_x.dot(east), e_x.dot(up));
}

SystemModel::SystemModel(ModelConfig config, const WindField* wind)
    : config_(std::move(config)), wind_(wind) {
  config_.validate();
  n_particles_ = config_.tether.n_segments;
  if (config_.kite_model == KiteModelKind::FourPoint) {
    n_particles_ += 4;
    const KiteFrame canonical{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    springs_ = init_particles(Vec3::Zero(), canonical, config_.geometry).springs;
    const double area_ratio = std::pow(config_.geometry.d_bridle / config_.tether.d_t, 2);
    bridle_k0_ = config_.tether.k0 * area_ratio;
    bridle_c0_ = config_.tether.c0 * area_ratio;
  }
}

Vec3 SystemModel::pos(const VecX& y, int particle) const {
  if (particle == 0) return Vec3::Zero();
  return y.segment<3>(3 * (particle - 1));
}

Vec3 SystemModel::vel(const VecX& y, int particle) const {
  if (particle == 0) return Vec3::Zero();
  return y.segment<3>(3 * n_particles_ + 3 * (particle - 1));
}

KiteFrame SystemModel::frame_1p(double t, const Vec3& s_last, const Vec3& v_a) const {
  try {
    KiteFrame f = kite_frame(s_last, v_a);
    held_frame_ = f;
    held_since_ = t;
    return f;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegenerateFlow && held_frame_ && t - held_since_ <= 0.2)
      return *held_frame_;
    throw Error(ErrorKind::DegenerateFlow,
                "point-mass kite unstable: apparent wind aligned with the tether for more than "
                "0.2 s");
  }
}

std::vector<Vec3> SystemModel::particle_positions(const VecX& y) const {
  std::vector<Vec3> out;
  for (int i = 0; i <= n_particles_; ++i) out.push_back(pos(y, i));
  return out;
}

namespace {

Vec3 wind_at(const WindField* wind, const Vec3& p, double t) {
  return wind ? wind->wind_vector(std::max(p.z(), 1e-3), t) : Vec3::Zero();
}

double density_at(const WindField* wind, const Vec3& p) {
  return wind ? wind->density(p.z()) : 1.225;
}

}  // namespace

void SystemModel::derivative(double t, const VecX& y, VecX& ydot) const {
  const int n = config_.tether.n_segments;
  const int np = n_particles_;
  ydot.resize(dimension());
  const double l_s = segment_rest_length(inputs_.reel, t, n, config_.tether.min_segment_length);

  std::vector<Vec3> p(np + 1), v(np + 1), f(np + 1, Vec3::Zero());
  for (int i = 0; i <= np; ++i) {
    p[i] = pos(y, i);
    v[i] = vel(y, i);
  }
  accumulate_particle_forces({std::span<const Vec3>(p.data(), n + 1),
                              std::span<const Vec3>(v.data(), n + 1), l_s, t, wind_},
                             config_.tether, std::span<Vec3>(f.data(), n + 1));

  std::vector<double> mass(np + 1, config_.tether.sigma * l_s);
  mass[n] = 0.5 * config_.tether.sigma * l_s;
  const Vec3 g = gravity_vector();
  const KiteParams& kp = config_.kite;

  if (config_.kite_model == KiteModelKind::OnePoint) {
    const Vec3 v_a = wind_at(wind_, p[n], t) - v[n];
    const KiteFrame frame = frame_1p(t, p[n] - p[n - 1], v_a);
    const double beta = std::atan2(p[n].z(), std::hypot(p[n].x(), p[n].y()));
    const double psi = heading_of(p[n], frame.e_x);
    // Correction opposes the gravity-induced turn for the clockwise heading.
    const SteeringState st{inputs_.i_s, inputs_.u_s,
                           -steering_correction(v_a.norm(), psi, beta, kp.c_2c)};
    const Forces1p fk =
        forces_1p(frame, v_a, st, inputs_.u_d, density_at(wind_, p[n]), kp, config_.aero);
    f[n] += fk.total();
    mass[n] += kp.m_k + kp.m_KCU;
  } else if (config_.kite_model == KiteModelKind::FourPoint) {
    const FourPointGeometry& geo = config_.geometry;
    KiteBody body;
    for (int i = 0; i < 4; ++i) {
      body.pos[i] = p[n + 1 + i];
      body.vel[i] = v[n + 1 + i];
    }
    const KiteFrame frame = frame_4p(body);
    const std::array<Vec3, 3> wind{wind_at(wind_, body.pos[kB], t), wind_at(wind_, body.pos[kC], t),
                                   wind_at(wind_, body.pos[kD], t)};
    const SurfaceFlow flow = surface_aoa(body, frame, wind, inputs_.u_s, inputs_.u_d, kp, geo);
    const Forces4p fa =
        aero_forces_4p(frame, flow, density_at(wind_, body.centre()), config_.aero, kp, geo);
    const MassDistribution md = distribute_mass(kp.m_k, kp.m_KCU, geo.gamma, n * l_s,
                                                config_.tether.sigma, n);
    for (int i = 0; i < 4; ++i) {
      mass[n + 1 + i] = md.wing[i];
      f[n + 1 + i] += md.wing[i] * g;
    }
    for (int i = 0; i < 3; ++i) f[n + 2 + i] += fa.lift[i] + fa.drag[i];
    mass[n] += kp.m_KCU;
    f[n] += kp.m_KCU * g;
    for (std::size_t k = 0; k < springs_.size(); ++k) {
      const KiteSpring& sp = springs_[k];
      const int a = sp.a == 4 ? n : n + 1 + sp.a;
      const int b = sp.b == 4 ? n : n + 1 + sp.b;
      const SegmentState seg{p[b] - p[a], v[b] - v[a], sp.rest_length, bridle_k0_ / sp.rest_length,
                             bridle_c0_ / sp.rest_length};
      Vec3 fs;
      try {
        fs = spring_force(seg, config_.tether.compression_stiffness_factor);
      } catch (const Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " (kite spring " + std::to_string(k) + ")");
      }
      f[a] += fs;
      f[b] -= fs;
    }
  }

  for (int i = 1; i <= np; ++i) {
    ydot.segment<3>(3 * (i - 1)) = v[i];
    ydot.segment<3>(3 * np + 3 * (i - 1)) = f[i] / mass[i];
  }
  const int w = winch_index();
  if (inputs_.winch_locked) {
    ydot(w) = 0.0;
    ydot(w + 1) = 0.0;
  } else {
    ydot(w) = y(w + 1);
    ydot(w + 1) = winch_acceleration(config_.winch, inputs_.v_s, y(w + 1), f[0].norm());
  }
}

VecX SystemModel::residual(double t, const VecX& y, const VecX& ydot) const {
  VecX g;
  derivative(t, y, g);
  return g - ydot;
}

Observation SystemModel::observe(double t, const VecX& y) const {
  const int n = config_.tether.n_segments;
  Observation o;
  const double l_s = segment_rest_length(inputs_.reel, t, n, config_.tether.min_segment_length);
  std::vector<Vec3> p(n + 1), v(n + 1), f(n + 1, Vec3::Zero());
  for (int i = 0; i <= n; ++i) {
    p[i] = pos(y, i);
    v[i] = vel(y, i);
  }
  accumulate_particle_forces({p, v, l_s, t, wind_}, config_.tether, f);
  o.tether_force = f[0].norm();
  o.l_t = y(winch_index());
  o.v_t_o = y(winch_index() + 1);

  if (config_.kite_model == KiteModelKind::FourPoint) {
    KiteBody body;
    for (int i = 0; i < 4; ++i) {
      body.pos[i] = pos(y, n + 1 + i);
      body.vel[i] = vel(y, n + 1 + i);
    }
    o.kite_position = body.centre();
    o.kite_velocity = 0.5 * (body.vel[kC] + body.vel[kD]);
    o.frame = frame_4p(body);
  } else {
    o.kite_position = p[n];
    o.kite_velocity = v[n];
  }
  o.apparent_wind = wind_at(wind_, o.kite_position, t) - o.kite_velocity;
  if (config_.kite_model == KiteModelKind::OnePoint) {
    o.frame = held_frame_ ? *held_frame_ : KiteFrame{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    try {
      o.frame = kite_frame(p[n] - p[n - 1], o.apparent_wind);
    } catch (const Error&) {
    }
  } else if (config_.kite_model == KiteModelKind::None) {
    o.frame = KiteFrame{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  }
  const Vec3& k = o.kite_position;
  o.elevation = std::atan2(k.z(), std::hypot(k.x(), k.y()));
  o.azimuth = std::atan2(k.y(), k.x());
  o.heading = heading_of(k, o.frame.e_x);
  return o;
}

VecX SystemModel::initial_state(double l_t, double elevation, double azimuth, double v_t_o) const {
  const int n = config_.tether.n_segments;
  VecX y = VecX::Zero(dimension());
  const Vec3 dir(std::cos(elevation) * std::cos(azimuth), std::cos(elevation) * std::sin(azimuth),
                 std::sin(elevation));
  // Pre-stretch the line by the quasi-static load of a kite at rest so the
  // spring does not start slack.
  double strain = 0.0;
  if (config_.kite_model != KiteModelKind::None) {
    const Vec3 p = l_t * dir;
    const double v = wind_at(wind_, p, 0.0).norm();
    const double rho = wind_ ? wind_->density(p.z()) : 1.225;
    const auto [cl, cd] = config_.aero.coefficients(config_.kite.alpha0);
    strain = 0.5 * rho * v * v * config_.kite.A * std::hypot(cl, cd) / config_.tether.k0;
  }
  const double l_stretched = l_t * (1.0 + strain);
  for (int i = 1; i <= n; ++i) y.segment<3>(3 * (i - 1)) = (l_stretched * i / n) * dir;
  if (config_.kite_model == KiteModelKind::FourPoint) {
    const Vec3 p_kcu = l_stretched * dir;
    const Vec3 v_a = wind_at(wind_, p_kcu, 0.0);
    const Vec3 s_last = p_kcu / n;
    KiteFrame f0;
    try {
      f0 = kite_frame(s_last, v_a.norm() > 1e-6 ? v_a : Vec3(Vec3::UnitX()));
    } catch (const Error&) {
      // Kite straight downwind of the tether: face the wind with e_z down the tether.
      f0 = kite_frame(s_last, Vec3::UnitZ());
    }
    const KiteInit init = init_particles(p_kcu, f0, config_.geometry);
    for (int i = 0; i < 4; ++i) y.segment<3>(3 * (n + i)) = init.body.pos[i];
  }
  const int w = winch_index();
  y(w) = l_t;
  y(w + 1) = v_t_o;
  return y;
}

VecX SystemModel::tolerances(double position_tol, double velocity_tol) const {
  VecX atol(dimension());
  atol.head(3 * n_particles_).setConstant(position_tol);
  atol.segment(3 * n_particles_, 3 * n_particles_).setConstant(velocity_tol);
  atol(winch_index()) = position_tol;
  atol(winch_index() + 1) = velocity_tol;
  return atol;
}

}  // namespace kitesim
