#pragma once

#include <Eigen/Core>

#include <numbers>

namespace lidopt {

using Index = Eigen::Index;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat3X = Eigen::Matrix3Xd;
using VecX = Eigen::VectorXd;

template <typename Scalar>
constexpr Scalar deg2rad(Scalar degrees) {
  return degrees * std::numbers::pi_v<Scalar> / Scalar(180);
}

template <typename Scalar>
constexpr Scalar rad2deg(Scalar radians) {
  return radians * Scalar(180) / std::numbers::pi_v<Scalar>;
}

}  // namespace lidopt
