#pragma once

#include <cmath>
#include <stdexcept>

#include "arbf/types.hpp"

// Closed-form model of a two-link planar manipulator with point masses at the
// link tips:  M(q)q" + C(q,q')q' + G(q) = tau.  All functions are pure and
// accept arbitrary Eigen 2-vector expressions.

namespace arbf {

template <typename Scalar = double>
struct RobotParams {
  Scalar m1{1};    // link 1 mass [kg]
  Scalar m2{1};    // link 2 mass [kg]
  Scalar l1{1};    // link 1 length [m]
  Scalar l2{1};    // link 2 length [m]
  Scalar g{9.8};   // gravitational acceleration [m/s^2]

  void validate() const {
    if (!(m1 > Scalar(0))) throw std::invalid_argument("robot.m1 must be > 0");
    if (!(m2 > Scalar(0))) throw std::invalid_argument("robot.m2 must be > 0");
    if (!(l1 > Scalar(0))) throw std::invalid_argument("robot.l1 must be > 0");
    if (!(l2 > Scalar(0))) throw std::invalid_argument("robot.l2 must be > 0");
    if (!(g >= Scalar(0))) throw std::invalid_argument("robot.g must be >= 0");
  }
};

template <typename Scalar = double>
struct JointState {
  Vec2<Scalar> q{Vec2<Scalar>::Zero()};      // joint positions [rad]
  Vec2<Scalar> qdot{Vec2<Scalar>::Zero()};   // joint velocities [rad/s]
};

using RobotParamsd = RobotParams<double>;
using JointStated = JointState<double>;

// Inertia matrix; symmetric by construction (the off-diagonal entries are the
// same stored value) and positive definite for valid parameters.
template <typename Scalar, typename DerivedQ>
Mat2<Scalar> mass_matrix(const RobotParams<Scalar>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  using std::cos;
  const Scalar c2 = cos(q(1));
  const Scalar m11 =
      (p.m1 + p.m2) * p.l1 * p.l1 + p.m2 * p.l2 * p.l2 + Scalar(2) * p.m2 * p.l1 * p.l2 * c2;
  const Scalar m12 = p.m2 * p.l2 * p.l2 + p.m2 * p.l1 * p.l2 * c2;
  const Scalar m22 = p.m2 * p.l2 * p.l2;
  Mat2<Scalar> m;
  m << m11, m12, m12, m22;
  return m;
}

// dM/dq2; only q2 enters M, so Mdot = mass_matrix_partial_q2 * q2dot.
template <typename Scalar, typename DerivedQ>
Mat2<Scalar> mass_matrix_partial_q2(const RobotParams<Scalar>& p,
                                    const Eigen::MatrixBase<DerivedQ>& q) {
  using std::sin;
  const Scalar h = p.m2 * p.l1 * p.l2 * sin(q(1));
  Mat2<Scalar> dm;
  dm << Scalar(-2) * h, -h, -h, Scalar(0);
  return dm;
}

// Coriolis matrix in Christoffel-symbol form, so Mdot - 2C is skew-symmetric.
template <typename Scalar, typename DerivedQ, typename DerivedV>
Mat2<Scalar> coriolis_matrix(const RobotParams<Scalar>& p, const Eigen::MatrixBase<DerivedQ>& q,
                             const Eigen::MatrixBase<DerivedV>& qdot) {
  using std::sin;
  const Scalar h = p.m2 * p.l1 * p.l2 * sin(q(1));
  Mat2<Scalar> c;
  c << -h * qdot(1), -h * (qdot(0) + qdot(1)), h * qdot(0), Scalar(0);
  return c;
}

template <typename Scalar, typename DerivedQ>
Vec2<Scalar> gravity_vector(const RobotParams<Scalar>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  using std::cos;
  Vec2<Scalar> g;
  g(0) = (p.m1 + p.m2) * p.g * p.l1 * cos(q(0)) + p.m2 * p.g * p.l2 * cos(q(0) + q(1));
  g(1) = p.m2 * p.g * p.l2 * cos(q(0) + q(1));
  return g;
}

// tau for a prescribed motion: M(q)q" + C(q,q')q' + G(q).
template <typename Scalar, typename DerivedQ, typename DerivedV, typename DerivedA>
Vec2<Scalar> inverse_dynamics(const RobotParams<Scalar>& p, const Eigen::MatrixBase<DerivedQ>& q,
                              const Eigen::MatrixBase<DerivedV>& qdot,
                              const Eigen::MatrixBase<DerivedA>& qddot) {
  return mass_matrix(p, q) * qddot + coriolis_matrix(p, q, qdot) * qdot + gravity_vector(p, q);
}

// q" = M(q)^-1 (tau - C q' - G), via the closed-form 2x2 inverse.
template <typename Scalar, typename DerivedT>
Vec2<Scalar> forward_dynamics(const RobotParams<Scalar>& p, const JointState<Scalar>& s,
                              const Eigen::MatrixBase<DerivedT>& tau) {
  using std::abs;
  const Mat2<Scalar> m = mass_matrix(p, s.q);
  const Vec2<Scalar> rhs =
      tau - coriolis_matrix(p, s.q, s.qdot) * s.qdot - gravity_vector(p, s.q);
  const Scalar det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (!(abs(det) > Scalar(1e-12)))
    throw std::domain_error("forward_dynamics: degenerate mass matrix");
  Vec2<Scalar> qdd;
  qdd(0) = (m(1, 1) * rhs(0) - m(0, 1) * rhs(1)) / det;
  qdd(1) = (m(0, 0) * rhs(1) - m(1, 0) * rhs(0)) / det;
  return qdd;
}

template <typename Scalar>
Scalar kinetic_energy(const RobotParams<Scalar>& p, const JointState<Scalar>& s) {
  return Scalar(0.5) * s.qdot.dot(mass_matrix(p, s.q) * s.qdot);
}

}  // namespace arbf
