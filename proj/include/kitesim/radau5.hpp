#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "kitesim/vec.hpp"

namespace kitesim {

/// Right-hand side g(t, y) of y' = g(t, y).
using OdeFunction = std::function<void(double t, const VecX& y, VecX& ydot)>;

struct Radau5Options {
  VecX atol;               // per component
  double rtol = 0.0;
  double h_initial = 1e-3;
  double h_max = 0.05;
  double h_min = 1e-10;
  int max_steps = 5000;    // per integrate() call
  int max_newton = 7;
  double newton_tol = 0.03;
  double jacobian_reuse_theta = 1e-3;
};

struct Radau5Stats {
  long steps = 0;
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
  long jacobians = 0;
  long decompositions = 0;
  long newton_failures = 0;
};

/// Three-stage Radau IIA collocation method (order 5) with simplified Newton
/// iterations, embedded error estimation and step size control. The
/// internal step size and Jacobian persist across integrate() calls so a
/// sequence of short control intervals keeps its history.
class Radau5 {
 public:
  Radau5(OdeFunction f, Radau5Options options);

  /// Advances y from t to t_end (inclusive); throws Error(SolverFailure).
  void integrate(double& t, VecX& y, double t_end);

  /// Forgets Jacobian and extrapolation history (use after discontinuities).
  void reset();

  double step_size() const { return h_; }
  const Radau5Stats& stats() const { return stats_; }
  Radau5Options& options() { return options_; }

 private:
  double error_norm(const VecX& v, const VecX& scale) const;
  void compute_jacobian(double t, const VecX& y, const VecX& f0);
  void decompose(double h);

  OdeFunction f_;
  Radau5Options options_;
  Radau5Stats stats_;

  // Method constants.
  Eigen::Matrix3d T_, T_inv_;
  double gamma_ = 0.0, alpha_ = 0.0, beta_ = 0.0;
  double c1_ = 0.0, c2_ = 0.0;
  double dd1_ = 0.0, dd2_ = 0.0, dd3_ = 0.0;

  int n_ = 0;
  MatX jac_;
  bool jac_valid_ = false;
  double h_lu_ = 0.0;
  bool lu_valid_ = false;
  Eigen::PartialPivLU<MatX> lu_real_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_complex_;

  double h_ = 0.0;
  double h_old_ = 0.0;
  bool have_history_ = false;
  VecX z1_, z2_, z3_;  // last accepted stage increments
  double theta_ = 1.0;
  double faccon_ = 1.0;
  bool first_step_ = true;
  double err_old_ = 1e-2;
};

}  // namespace kitesim
