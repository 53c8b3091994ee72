#pragma once

#include <array>
#include <vector>

#include "kitesim/kite_one_point.hpp"
#include "kitesim/vec.hpp"

namespace kitesim {

struct FourPointGeometry {
  double h_k = 2.23;       // kite height, m
  double h_b = 4.9;        // bridle height, m
  double w_k = 5.77;       // kite width, m
  double gamma = 0.47;     // nose mass fraction
  double d_n_r = 0.2;      // relative nose distance
  double w_rel = 0.91;     // relative width
  double alpha_s0 = deg2rad(10.0);
  double alpha_s_max = deg2rad(15.9);
  double K_ds = 1.5;       // depower-steering coupling
  double kappa = 0.93;     // drag compensation
  double u_s0 = -0.003;    // steering offset
  double d_bridle = 0.0025;  // bridle line diameter, m

  void validate() const;
};

/// Index of the kite particles inside the body arrays.
enum KitePoint : int { kA = 0, kB = 1, kC = 2, kD = 3 };

struct MassDistribution {
  double m_PKCU;
  std::array<double, 4> wing;  // A, B, C, D
};

MassDistribution distribute_mass(double m_k, double m_KCU, double gamma, double l_t,
                                 double sigma, int n);

struct KiteSpring {
  int a;  // 0..3 wing particles, 4 = KCU
  int b;
  double rest_length;
};

struct KiteBody {
  std::array<Vec3, 4> pos;  // A, B, C, D
  std::array<Vec3, 4> vel;
  Vec3 centre() const { return 0.5 * (pos[kC] + pos[kD]); }
};

struct KiteInit {
  KiteBody body;
  std::vector<KiteSpring> springs;
};

/// Zero-force positions of A..D above the KCU and the as-built rest lengths
/// of the internal springs (complete graph over A..D plus bridle lines from
/// the KCU to each wing particle).
KiteInit init_particles(const Vec3& p_kcu, const KiteFrame& frame0, const FourPointGeometry& geo);

KiteFrame frame_4p(const KiteBody& body);

/// Steering angle alpha_s for steering u_s at depower angle alpha_d.
double steering_angle(double u_s, double alpha_d, const KiteParams& params,
                      const FourPointGeometry& geo);

struct SurfaceFlow {
  std::array<double, 3> alpha;  // B, C, D
  std::array<Vec3, 3> v_a;      // apparent velocity at B, C, D
};

/// Angles of attack of the top (B) and side (C, D) surfaces; wind holds the
/// wind velocity at each of B, C and D.
SurfaceFlow surface_aoa(const KiteBody& body, const KiteFrame& frame,
                        const std::array<Vec3, 3>& wind, double u_s, double u_d,
                        const KiteParams& params, const FourPointGeometry& geo);

double drag_factor_4p(const KiteParams& params, const FourPointGeometry& geo);

struct Forces4p {
  std::array<Vec3, 3> lift;  // B, C, D
  std::array<Vec3, 3> drag;
};

Forces4p aero_forces_4p(const KiteFrame& frame, const SurfaceFlow& flow, double rho,
                        const AeroTable& table, const KiteParams& params,
                        const FourPointGeometry& geo);

}  // namespace kitesim
