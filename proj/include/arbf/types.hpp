#pragma once

#include <Eigen/Dense>

namespace arbf {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;

using Eigen::Vector2d;
using Vector6d = Eigen::Matrix<double, 6, 1>;

}  // namespace arbf
