#pragma once

#include <utility>
#include <vector>

#include "kitesim/vec.hpp"

namespace kitesim {

struct KiteParams {
  double A = 10.18;             // projected area, m^2
  double m_k = 6.21;            // kg
  double m_KCU = 8.4;           // kg
  double A_side_over_A = 0.306;
  double c_s = 2.59;            // steering coefficient
  double c_2c = 0.93;           // gravity correction factor
  double K_sD = 0.6;            // steering-induced drag factor
  double alpha0 = 0.14;         // powered kite-tether angle, rad
  double alpha_d_max = deg2rad(31.0);
  double u_d0 = 0.213;
  double u_d_max = 0.4247;

  void validate() const;
};

/// Piecewise-linear lift and drag curves over the angle of attack in
/// degrees, clamped at the grid ends.
class AeroTable {
 public:
  struct Point {
    double alpha_deg;
    double cl;
    double cd;
  };

  AeroTable() = default;
  explicit AeroTable(std::vector<Point> points);

  /// Default curves for a leading-edge inflatable tube kite.
  static AeroTable default_table();
  /// (C_L, C_D) at an angle of attack in radians.
  std::pair<double, double> coefficients(double alpha) const;
  const std::vector<Point>& points() const { return points_; }

 private:
  std::vector<Point> points_;
};

struct KiteFrame {
  Vec3 e_x;  // heading
  Vec3 e_y;  // span
  Vec3 e_z;  // along the last tether segment, pointing towards the ground
};

/// Frame of the point-mass kite: z along the last segment, x-z plane
/// containing the apparent wind.
KiteFrame kite_frame(const Vec3& s_last, const Vec3& v_a);

/// Depower angle alpha_d for a depower setting.
double depower_angle(double u_d, const KiteParams& params);

double angle_of_attack_1p(const Vec3& v_a, const Vec3& e_x, double u_d,
                          const KiteParams& params);

double steering_correction(double v_a_mag, double psi, double beta, double c_2c);

struct SteeringState {
  double i_s;    // commanded steering
  double u_s;    // actuated steering
  double i_s_c;  // gravity correction term (already signed)
};

struct Forces1p {
  Vec3 lift;
  Vec3 drag;
  Vec3 side;
  Vec3 gravity;
  double alpha;
  Vec3 total() const { return lift + drag + side + gravity; }
};

Forces1p forces_1p(const KiteFrame& frame, const Vec3& v_a, const SteeringState& steering,
                   double u_d, double rho, const KiteParams& params, const AeroTable& table);

}  // namespace kitesim
