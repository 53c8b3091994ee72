#pragma once

#include <array>

namespace kitesim {

struct WinchParams {
  double n_gear = 6.2;
  double r = 0.1615;      // drum radius, m
  double I = 0.328;       // inertia seen from the generator, kg m^2
  double c_f = 0.799;     // viscous friction, N s
  double tau_s = 3.18;    // static friction, N m
  double R_r = 0.0727;    // rotor resistance, Ohm
  double L = 0.00297;     // self inductance, H
  double v_s_n = 4.09;    // nominal synchronous speed at the tether, m/s
  double E_n = 231.0;     // nominal voltage, V

  void validate() const;
};

struct WinchState {
  double l_t;    // tether length, m
  double v_t_o;  // reel-out speed, m/s (positive = reel-out)
  double v_s;    // commanded synchronous speed, m/s
};

/// Torque-speed coefficients of the generator for a synchronous speed.
struct GeneratorCoefficients {
  double alpha;  // N m s/m
  double beta;   // (s/m)^2
};

GeneratorCoefficients generator_coefficients(const WinchParams& params, double v_s);

double generator_torque(const WinchParams& params, double v_s, double v_t_o);

double friction_torque(const WinchParams& params, double v_t_o);

/// Reel-out acceleration for a tether force acting on the drum.
double winch_acceleration(const WinchParams& params, double v_s, double v_t_o, double f_tether);

/// R = [v_t_o - l_dot, a_t_o - v_dot].
std::array<double, 2> winch_residual(const WinchState& state, const std::array<double, 2>& state_dot,
                                     double f_tether, const WinchParams& params);

}  // namespace kitesim
