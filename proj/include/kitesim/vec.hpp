#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace kitesim {

using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

inline constexpr double kGravity = 9.81;
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

inline Vec3 gravity_vector() { return Vec3(0.0, 0.0, -kGravity); }

}  // namespace kitesim
