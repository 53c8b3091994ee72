#include "kitesim/kite_one_point.hpp"

#include <algorithm>
#include <cmath>

#include "kitesim/error.hpp"

namespace kitesim {

void KiteParams::validate() const {
  if (!(A > 0.0 && m_k > 0.0 && m_KCU > 0.0))
    throw Error(ErrorKind::Domain, "kite: area and masses must be > 0");
  if (!(u_d0 > 0.0 && u_d0 < u_d_max && u_d_max <= 1.0))
    throw Error(ErrorKind::Domain, "kite: require 0 < u_d0 < u_d_max <= 1");
  if (!(A_side_over_A > 0.0 && A_side_over_A < 1.0))
    throw Error(ErrorKind::Domain, "kite: A_side_over_A must be in (0, 1)");
}

AeroTable::AeroTable(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw Error(ErrorKind::Domain, "aero table needs at least two points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i].cd > 0.0)) throw Error(ErrorKind::Domain, "aero table: C_D must be > 0");
    if (i > 0 && !(points_[i].alpha_deg > points_[i - 1].alpha_deg))
      throw Error(ErrorKind::Domain, "aero table: alpha grid must be strictly increasing");
  }
}

AeroTable AeroTable::default_table() {
  // (deg, C_L, C_D)
  static const double kData[][3] = {
      {-180.0, 0.0, 0.5}, {-90.0, 0.0, 1.0},  {-20.0, -0.1, 0.25}, {-5.0, 0.1, 0.1},
      {0.0, 0.25, 0.09},  {5.0, 0.45, 0.1},   {10.0, 0.65, 0.135}, {15.0, 0.7, 0.15},
      {20.0, 0.72, 0.165}, {25.0, 0.74, 0.19}, {30.0, 0.74, 0.22},  {40.0, 0.7, 0.32},
      {50.0, 0.6, 0.48},  {90.0, 0.0, 1.0},   {160.0, -0.5, 0.5},  {180.0, 0.0, 0.5},
  };
  std::vector<Point> pts;
  for (const auto& row : kData) pts.push_back({row[0], row[1], row[2]});
  return AeroTable(std::move(pts));
}

std::pair<double, double> AeroTable::coefficients(double alpha_rad) const {
  const double alpha = rad2deg(alpha_rad);
  if (alpha <= points_.front().alpha_deg) return {points_.front().cl, points_.front().cd};
  if (alpha >= points_.back().alpha_deg) return {points_.back().cl, points_.back().cd};
  const auto it = std::upper_bound(points_.begin(), points_.end(), alpha,
                                   [](double a, const Point& p) { return a < p.alpha_deg; });
  const Point& hi = *it;
  const Point& lo = *(it - 1);
  const double s = (alpha - lo.alpha_deg) / (hi.alpha_deg - lo.alpha_deg);
  return {lo.cl + s * (hi.cl - lo.cl), lo.cd + s * (hi.cd - lo.cd)};
}

KiteFrame kite_frame(const Vec3& s_last, const Vec3& v_a) {
  const double len = s_last.norm();
  if (len < 1e-9) throw Error(ErrorKind::SingularGeometry, "kite_frame: zero-length segment");
  KiteFrame f;
  f.e_z = -s_last / len;
  const Vec3 cross = v_a.cross(f.e_z);
  const double cn = cross.norm();
  if (!(cn >= 1e-9 * v_a.norm()) || cn == 0.0)
    throw Error(ErrorKind::DegenerateFlow, "kite_frame: apparent wind parallel to tether");
  f.e_y = cross / cn;
  f.e_x = f.e_y.cross(f.e_z);
  return f;
}

double depower_angle(double u_d, const KiteParams& p) {
  return (u_d - p.u_d0) / (p.u_d_max - p.u_d0) * p.alpha_d_max;
}

double angle_of_attack_1p(const Vec3& v_a, const Vec3& e_x, double u_d, const KiteParams& p) {
  const double va = v_a.norm();
  if (!(va > 0.0)) throw Error(ErrorKind::Stagnation, "angle_of_attack_1p: zero apparent wind");
  // Measured between the heading and the direction the kite moves through
  // the air, i.e. -v_a; identical to the top-surface angle of the 4p model.
  const double c = std::clamp(v_a.dot(e_x) / va, -1.0, 1.0);
  return kPi - std::acos(c) - depower_angle(u_d, p) + p.alpha0;
}

double steering_correction(double v_a_mag, double psi, double beta, double c_2c) {
  const double va = std::max(v_a_mag, 0.1);
  return c_2c / va * std::sin(psi) * std::cos(beta);
}

Forces1p forces_1p(const KiteFrame& frame, const Vec3& v_a, const SteeringState& st, double u_d,
                   double rho, const KiteParams& p, const AeroTable& table) {
  const double va = v_a.norm();
  if (!(va > 0.0)) throw Error(ErrorKind::Stagnation, "forces_1p: zero apparent wind");
  Forces1p out;
  out.alpha = angle_of_attack_1p(v_a, frame.e_x, u_d, p);
  const auto [cl, cd] = table.coefficients(out.alpha);
  const double q_a = 0.5 * rho * va * va * p.A;
  const Vec3 lift_dir = v_a.cross(frame.e_y).normalized();
  out.lift = q_a * cl * lift_dir;
  out.drag = q_a * cd * (1.0 + p.K_sD * std::abs(st.u_s)) * v_a / va;
  out.side = q_a * p.A_side_over_A * p.c_s * (st.i_s + st.i_s_c) * frame.e_y;
  out.gravity = (p.m_k + p.m_KCU) * gravity_vector();
  return out;
}

}  // namespace kitesim
