#include "kitesim/radau5.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "kitesim/error.hpp"

namespace kitesim {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

Radau5::Radau5(OdeFunction f, Radau5Options options) : f_(std::move(f)), options_(std::move(options)) {
  const double s6 = std::sqrt(6.0);
  c1_ = (4.0 - s6) / 10.0;
  c2_ = (4.0 + s6) / 10.0;
  dd1_ = -(13.0 + 7.0 * s6) / 3.0;
  dd2_ = (-13.0 + 7.0 * s6) / 3.0;
  dd3_ = -1.0 / 3.0;

  Eigen::Matrix3d a;
  a << (88.0 - 7.0 * s6) / 360.0, (296.0 - 169.0 * s6) / 1800.0, (-2.0 + 3.0 * s6) / 225.0,
      (296.0 + 169.0 * s6) / 1800.0, (88.0 + 7.0 * s6) / 360.0, (-2.0 - 3.0 * s6) / 225.0,
      (16.0 - s6) / 36.0, (16.0 + s6) / 36.0, 1.0 / 9.0;
  const Eigen::Matrix3d a_inv = a.inverse();
  Eigen::EigenSolver<Eigen::Matrix3d> es(a_inv);
  int real_idx = -1;
  int complex_idx = -1;
  for (int i = 0; i < 3; ++i) {
    const auto ev = es.eigenvalues()(i);
    if (std::abs(ev.imag()) < 1e-10) real_idx = i;
    else if (ev.imag() > 0.0) complex_idx = i;
  }
  gamma_ = es.eigenvalues()(real_idx).real();
  alpha_ = es.eigenvalues()(complex_idx).real();
  beta_ = es.eigenvalues()(complex_idx).imag();
  const auto vecs = es.eigenvectors();
  T_.col(0) = vecs.col(real_idx).real();
  T_.col(1) = vecs.col(complex_idx).real();
  T_.col(2) = -vecs.col(complex_idx).imag();
  T_inv_ = T_.inverse();
}

void Radau5::reset() {
  jac_valid_ = false;
  lu_valid_ = false;
  have_history_ = false;
  first_step_ = true;
  faccon_ = 1.0;
  theta_ = 1.0;
}

double Radau5::error_norm(const VecX& v, const VecX& scale) const {
  return std::sqrt((v.array() / scale.array()).square().sum() / static_cast<double>(v.size()));
}

void Radau5::compute_jacobian(double t, const VecX& y, const VecX& f0) {
  jac_.resize(n_, n_);
  VecX yp = y;
  VecX fp(n_);
  for (int j = 0; j < n_; ++j) {
    const double saved = yp(j);
    const double delta = std::sqrt(kEps * std::max(1e-5, std::abs(saved)));
    yp(j) = saved + delta;
    f_(t, yp, fp);
    jac_.col(j) = (fp - f0) / delta;
    yp(j) = saved;
  }
  stats_.rhs_evaluations += n_;
  ++stats_.jacobians;
  jac_valid_ = true;
  lu_valid_ = false;
}

void Radau5::decompose(double h) {
  MatX e1 = -jac_;
  e1.diagonal().array() += gamma_ / h;
  lu_real_.compute(e1);
  Eigen::MatrixXcd e2 = (-jac_).cast<std::complex<double>>();
  e2.diagonal().array() += std::complex<double>(alpha_ / h, beta_ / h);
  lu_complex_.compute(e2);
  h_lu_ = h;
  lu_valid_ = true;
  ++stats_.decompositions;
}

void Radau5::integrate(double& t, VecX& y, double t_end) {
  if (n_ != y.size()) {
    n_ = static_cast<int>(y.size());
    reset();
  }
  if (options_.atol.size() != n_)
    throw Error(ErrorKind::SolverFailure, "radau5: atol size does not match the state");
  if (h_ <= 0.0) h_ = options_.h_initial;

  VecX f0(n_), f1(n_), f2(n_), f3(n_);
  VecX z1(n_), z2(n_), z3(n_), w1(n_), w2(n_), w3(n_);
  VecX scale(n_), cont(n_), tmp(n_);
  Eigen::VectorXcd rc(n_);
  bool jac_fresh = false;
  bool last_rejected = false;
  double h_acc = 0.0, err_acc = 1e-2;
  int steps = 0;
  const double t_tol = 1e-12 * std::max(1.0, std::abs(t_end));

  while (t < t_end - t_tol) {
    f_(t, y, f0);
    ++stats_.rhs_evaluations;
    if (!f0.allFinite())
      throw Error(ErrorKind::SolverFailure, "radau5: non-finite derivative at t=" + std::to_string(t));
    if (!jac_valid_) {
      compute_jacobian(t, y, f0);
      jac_fresh = true;
    }
    scale = options_.atol.array() + options_.rtol * y.array().abs();

    double h = std::min(h_, options_.h_max);
    for (;;) {
      if (++steps > options_.max_steps)
        throw Error(ErrorKind::SolverFailure,
                    "radau5: step budget exhausted at t=" + std::to_string(t) +
                        " (h=" + std::to_string(h) + ")");
      if (t + h > t_end - t_tol) h = t_end - t;
      if (h < options_.h_min)
        throw Error(ErrorKind::SolverFailure, "radau5: step size underflow at t=" + std::to_string(t));
      if (!lu_valid_ || h != h_lu_) decompose(h);
      ++stats_.steps;

      // Starting values from the previous collocation polynomial.
      if (have_history_) {
        const double r = h / h_old_;
        const double nodes[4] = {0.0, c1_, c2_, 1.0};
        const VecX* vals[3] = {&z1_, &z2_, &z3_};
        VecX* out[3] = {&z1, &z2, &z3};
        const double cs[3] = {c1_, c2_, 1.0};
        for (int i = 0; i < 3; ++i) {
          const double s = 1.0 + cs[i] * r;
          out[i]->setZero();
          for (int j = 1; j < 4; ++j) {
            double l = 1.0;
            for (int k = 0; k < 4; ++k)
              if (k != j) l *= (s - nodes[k]) / (nodes[j] - nodes[k]);
            *out[i] += l * *vals[j - 1];
          }
          *out[i] -= z3_;
        }
      } else {
        z1.setZero();
        z2.setZero();
        z3.setZero();
      }
      w1 = T_inv_(0, 0) * z1 + T_inv_(0, 1) * z2 + T_inv_(0, 2) * z3;
      w2 = T_inv_(1, 0) * z1 + T_inv_(1, 1) * z2 + T_inv_(1, 2) * z3;
      w3 = T_inv_(2, 0) * z1 + T_inv_(2, 1) * z2 + T_inv_(2, 2) * z3;

      // Simplified Newton iteration.
      faccon_ = std::pow(std::max(faccon_, kEps), 0.8);
      theta_ = std::abs(options_.jacobian_reuse_theta);
      double dyn_old = 0.0, thq_old = 0.0;
      bool converged = false;
      double h_factor = 0.5;
      int newt = 0;
      for (; newt < options_.max_newton; ++newt) {
        tmp = y + z1;
        f_(t + c1_ * h, tmp, f1);
        tmp = y + z2;
        f_(t + c2_ * h, tmp, f2);
        tmp = y + z3;
        f_(t + h, tmp, f3);
        stats_.rhs_evaluations += 3;

        VecX r1 = T_inv_(0, 0) * f1 + T_inv_(0, 1) * f2 + T_inv_(0, 2) * f3 - (gamma_ / h) * w1;
        VecX r2 = T_inv_(1, 0) * f1 + T_inv_(1, 1) * f2 + T_inv_(1, 2) * f3 -
                  (alpha_ / h) * w2 + (beta_ / h) * w3;
        VecX r3 = T_inv_(2, 0) * f1 + T_inv_(2, 1) * f2 + T_inv_(2, 2) * f3 -
                  (beta_ / h) * w2 - (alpha_ / h) * w3;
        const VecX dw1 = lu_real_.solve(r1);
        rc.real() = r2;
        rc.imag() = r3;
        const Eigen::VectorXcd u = lu_complex_.solve(rc);
        const VecX dw2 = u.real();
        const VecX dw3 = u.imag();

        const double dyno = std::sqrt(((dw1.array() / scale.array()).square().sum() +
                                       (dw2.array() / scale.array()).square().sum() +
                                       (dw3.array() / scale.array()).square().sum()) /
                                      (3.0 * n_));
        if (!std::isfinite(dyno)) break;
        if (newt >= 1) {
          const double thq = dyno / dyn_old;
          theta_ = newt == 1 ? thq : std::sqrt(thq * thq_old);
          thq_old = thq;
          if (theta_ < 0.99) {
            faccon_ = theta_ / (1.0 - theta_);
            const double dyth = faccon_ * dyno *
                                std::pow(theta_, options_.max_newton - 1 - newt) /
                                options_.newton_tol;
            if (dyth >= 1.0) {
              const double qnewt = std::clamp(dyth, 1e-4, 20.0);
              h_factor = 0.8 * std::pow(qnewt, -1.0 / (4.0 + options_.max_newton - 1 - newt));
              break;
            }
          } else {
            break;
          }
        }
        dyn_old = std::max(dyno, kEps);
        w1 += dw1;
        w2 += dw2;
        w3 += dw3;
        z1 = T_(0, 0) * w1 + T_(0, 1) * w2 + T_(0, 2) * w3;
        z2 = T_(1, 0) * w1 + T_(1, 1) * w2 + T_(1, 2) * w3;
        z3 = T_(2, 0) * w1 + T_(2, 1) * w2 + T_(2, 2) * w3;
        if (faccon_ * dyno <= options_.newton_tol) {
          converged = true;
          break;
        }
      }

      if (!converged) {
        ++stats_.newton_failures;
        h *= h_factor;
        last_rejected = true;
        if (!jac_fresh) {
          compute_jacobian(t, y, f0);
          jac_fresh = true;
        }
        continue;
      }

      // Embedded error estimate.
      const double he1 = dd1_ / h, he2 = dd2_ / h, he3 = dd3_ / h;
      f2 = he1 * z1 + he2 * z2 + he3 * z3;
      cont = lu_real_.solve(f0 + f2);
      double err = std::max(error_norm(cont, scale), 1e-10);
      if (err >= 1.0 && (first_step_ || last_rejected)) {
        tmp = y + cont;
        f_(t, tmp, f1);
        ++stats_.rhs_evaluations;
        cont = lu_real_.solve(f1 + f2);
        err = std::max(error_norm(cont, scale), 1e-10);
      }
      if (!std::isfinite(err)) err = 1e10;

      const int nit = options_.max_newton;
      const double fac = std::min(0.9, (2.0 * nit + 1.0) / (2.0 * nit + newt + 1));
      double quot = std::clamp(std::pow(err, 0.25) / fac, 1.0 / 8.0, 5.0);
      double h_new = h / quot;

      if (err < 1.0) {
        if (!first_step_ && h_acc > 0.0) {
          double facgus = (h_acc / h) * std::pow(err * err / err_acc, 0.25) / 0.9;
          facgus = std::clamp(facgus, 1.0 / 8.0, 5.0);
          quot = std::max(quot, facgus);
          h_new = h / quot;
        }
        h_acc = h;
        err_acc = std::max(1e-2, err);
        ++stats_.accepted;
        first_step_ = false;
        last_rejected = false;
        t += h;
        y += z3;
        z1_ = z1;
        z2_ = z2;
        z3_ = z3;
        h_old_ = h;
        have_history_ = true;
        h_new = std::min(h_new, options_.h_max);
        const double qt = h_new / h;
        if (theta_ <= options_.jacobian_reuse_theta && qt >= 1.0 && qt <= 1.2) h_new = h;
        // A step clipped to the interval end must not shrink the proposal.
        if (h < h_ && t >= t_end - t_tol) h_new = std::max(h_new, std::min(h_, options_.h_max));
        if (theta_ > options_.jacobian_reuse_theta) jac_valid_ = false;
        jac_fresh = false;
        h_ = h_new;
        break;
      }
      ++stats_.rejected;
      last_rejected = true;
      h = first_step_ ? 0.1 * h : h_new;
    }
  }
  t = t_end;
}

}  // namespace kitesim
