#include "kitesim/winch.hpp"

#include <cmath>

#include "kitesim/error.hpp"

namespace kitesim {

void WinchParams::validate() const {
  if (!(n_gear > 0 && r > 0 && I > 0 && c_f > 0 && tau_s > 0 && R_r > 0 && L > 0 && v_s_n > 0 &&
        E_n > 0))
    throw Error(ErrorKind::Domain, "winch: all parameters must be > 0");
}

GeneratorCoefficients generator_coefficients(const WinchParams& p, double v_s) {
  // The voltage rises linearly up to E_n at v_s_n; above that it is capped,
  // so alpha falls off with 1/v_s^2.
  const double v_ref = std::max(std::abs(v_s), p.v_s_n);
  const double alpha = p.E_n * p.E_n * p.r / (v_ref * v_ref * p.R_r * p.n_gear);
  const double beta = (p.L * p.L) / (p.R_r * p.R_r) * (p.n_gear * p.n_gear) / (p.r * p.r);
  return {alpha, beta};
}

double generator_torque(const WinchParams& p, double v_s, double v_t_o) {
  const auto [alpha, beta] = generator_coefficients(p, v_s);
  const double slip = v_s - v_t_o;
  return alpha * slip / (1.0 + beta * slip * slip);
}

double friction_torque(const WinchParams& p, double v_t_o) {
  const double sign = v_t_o > 0.0 ? 1.0 : (v_t_o < 0.0 ? -1.0 : 0.0);
  return p.c_f * v_t_o + p.tau_s * sign;
}

double winch_acceleration(const WinchParams& p, double v_s, double v_t_o, double f_tether) {
  const double ratio = p.r / p.n_gear;
  const double tau_d = ratio * f_tether;
  return ratio / p.I * (generator_torque(p, v_s, v_t_o) + tau_d - friction_torque(p, v_t_o));
}

std::array<double, 2> winch_residual(const WinchState& s, const std::array<double, 2>& s_dot,
                                     double f_tether, const WinchParams& p) {
  return {s.v_t_o - s_dot[0], winch_acceleration(p, s.v_s, s.v_t_o, f_tether) - s_dot[1]};
}

}  // namespace kitesim
