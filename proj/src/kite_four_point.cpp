#include "kitesim/kite_four_point.hpp"

#include <algorithm>
#include <cmath>

#include "kitesim/error.hpp"

namespace kitesim {

void FourPointGeometry::validate() const {
  if (!(h_k > 0.0 && h_b > 0.0 && w_k > 0.0 && d_n_r > 0.0 && d_bridle > 0.0))
    throw Error(ErrorKind::Domain, "4p geometry: lengths must be > 0");
  if (!(gamma > 0.0 && gamma < 1.0 && w_rel > 0.0 && w_rel < 1.0))
    throw Error(ErrorKind::Domain, "4p geometry: gamma and w_rel must be in (0, 1)");
  if (!(K_ds >= 1.0 && K_ds <= 2.0)) throw Error(ErrorKind::Domain, "4p geometry: K_ds must be in [1, 2]");
}

MassDistribution distribute_mass(double m_k, double m_KCU, double gamma, double l_t,
                                 double sigma, int n) {
  MassDistribution d;
  d.m_PKCU = m_KCU + l_t * sigma / (2.0 * n);
  const double rest = (1.0 - gamma) * m_k;
  d.wing = {gamma * m_k, 0.4 * rest, 0.3 * rest, 0.3 * rest};
  return d;
}

KiteInit init_particles(const Vec3& p_kcu, const KiteFrame& f, const FourPointGeometry& g) {
  const double half_width = 0.5 * g.w_k * g.w_rel;
  const Vec3 centre = p_kcu - g.h_b * f.e_z;
  KiteInit init;
  init.body.pos[kA] = centre + g.d_n_r * g.w_k * g.w_rel * f.e_x;
  init.body.pos[kB] = centre - g.h_k * f.e_z;
  init.body.pos[kC] = centre + half_width * f.e_y;
  init.body.pos[kD] = centre - half_width * f.e_y;
  for (auto& v : init.body.vel) v.setZero();

  auto point = [&](int i) -> Vec3 { return i == 4 ? p_kcu : init.body.pos[i]; };
  static constexpr int kPairs[][2] = {{kA, kB}, {kA, kC}, {kA, kD}, {kB, kC}, {kB, kD},
                                      {kC, kD}, {4, kA},  {4, kB},  {4, kC},  {4, kD}};
  for (const auto& pr : kPairs)
    init.springs.push_back({pr[0], pr[1], (point(pr[0]) - point(pr[1])).norm()});
  return init;
}

KiteFrame frame_4p(const KiteBody& body) {
  const Vec3 down = body.centre() - body.pos[kB];
  const Vec3 span = body.pos[kC] - body.pos[kD];
  if (down.norm() < 1e-9 || span.norm() < 1e-9)
    throw Error(ErrorKind::SingularGeometry, "frame_4p: collapsed kite geometry");
  KiteFrame f;
  f.e_z = down.normalized();
  f.e_y = span.normalized();
  const Vec3 x = f.e_y.cross(f.e_z);
  if (x.norm() < 1e-9) throw Error(ErrorKind::SingularGeometry, "frame_4p: span parallel to height");
  f.e_x = x.normalized();
  return f;
}

double steering_angle(double u_s, double alpha_d, const KiteParams& p, const FourPointGeometry& g) {
  return (u_s - g.u_s0) / (1.0 + g.K_ds * (alpha_d / p.alpha_d_max)) * g.alpha_s_max;
}

namespace {

double projected_angle(const Vec3& v_proj, const Vec3& e_x, const char* surface) {
  const double n = v_proj.norm();
  if (!(n > 1e-9))
    throw Error(ErrorKind::Stagnation, std::string("surface_aoa: zero projected flow at ") + surface);
  return kPi - std::acos(std::clamp(v_proj.dot(e_x) / n, -1.0, 1.0));
}

}  // namespace

SurfaceFlow surface_aoa(const KiteBody& body, const KiteFrame& f, const std::array<Vec3, 3>& wind,
                        double u_s, double u_d, const KiteParams& p, const FourPointGeometry& g) {
  SurfaceFlow flow;
  for (int i = 0; i < 3; ++i) flow.v_a[i] = wind[i] - body.vel[kB + i];

  const double alpha_d = depower_angle(u_d, p);
  const double alpha_s = steering_angle(u_s, alpha_d, p, g);

  const Vec3& vb = flow.v_a[0];
  const Vec3 vb_xz = vb - vb.dot(f.e_y) * f.e_y;
  flow.alpha[0] = projected_angle(vb_xz, f.e_x, "B") - alpha_d + p.alpha0;

  const Vec3& vc = flow.v_a[1];
  const Vec3& vd = flow.v_a[2];
  const Vec3 vc_xy = vc - vc.dot(f.e_z) * f.e_z;
  const Vec3 vd_xy = vd - vd.dot(f.e_z) * f.e_z;
  flow.alpha[1] = projected_angle(vc_xy, f.e_x, "C") + alpha_s + g.alpha_s0;
  flow.alpha[2] = projected_angle(vd_xy, f.e_x, "D") - alpha_s + g.alpha_s0;
  return flow;
}

double drag_factor_4p(const KiteParams& p, const FourPointGeometry& g) {
  return (1.0 - p.A_side_over_A) * g.kappa;
}

Forces4p aero_forces_4p(const KiteFrame& f, const SurfaceFlow& flow, double rho,
                        const AeroTable& table, const KiteParams& p, const FourPointGeometry& g) {
  const double k_d = drag_factor_4p(p, g);
  const double a_side = p.A * p.A_side_over_A;
  Forces4p out;

  auto unit = [](const Vec3& v) -> Vec3 {
    const double n = v.norm();
    return n > 1e-12 ? Vec3(v / n) : Vec3::Zero();
  };

  const Vec3& vb = flow.v_a[0];
  const Vec3 vb_xz = vb - vb.dot(f.e_y) * f.e_y;
  const auto [cl_b, cd_b] = table.coefficients(flow.alpha[0]);
  out.lift[0] = 0.5 * rho * vb_xz.squaredNorm() * p.A * cl_b * unit(vb.cross(f.e_y));
  out.drag[0] = 0.5 * rho * k_d * vb.squaredNorm() * p.A * cd_b * unit(vb);

  const Vec3& vc = flow.v_a[1];
  const Vec3 vc_xy = vc - vc.dot(f.e_z) * f.e_z;
  const auto [cl_c, cd_c] = table.coefficients(flow.alpha[1]);
  out.lift[1] = 0.5 * rho * vc_xy.squaredNorm() * a_side * cl_c * unit(vc.cross(f.e_z));
  out.drag[1] = 0.5 * rho * k_d * vc.squaredNorm() * a_side * cd_c * unit(vc);

  const Vec3& vd = flow.v_a[2];
  const Vec3 vd_xy = vd - vd.dot(f.e_z) * f.e_z;
  const auto [cl_d, cd_d] = table.coefficients(flow.alpha[2]);
  out.lift[2] = 0.5 * rho * vd_xy.squaredNorm() * a_side * cl_d * unit(f.e_z.cross(vd));
  out.drag[2] = 0.5 * rho * k_d * vd.squaredNorm() * a_side * cd_d * unit(vd);
  return out;
}

}  // namespace kitesim
