#pragma once

#include <utility>

#include "arbf/dynamics.hpp"
#include "arbf/rbf_network.hpp"
#include "arbf/trajectory.hpp"
#include "arbf/types.hpp"

// The four controllers and the shared error algebra.  All torques are
// computed from the accumulator state carried into the step; accumulators
// (PID integral term, RBF weights) are updated afterwards, so the integral
// variants stay step-for-step equivalent where they coincide algebraically.

namespace arbf {

struct GainSet {
  Vector2d k1{10.0, 6.0};      // diagonal of K1
  Vector2d k2{3.0, 1.8};       // diagonal of K2
  Vector2d ki{0.05, 0.05};     // diagonal of K_I (PID only)
  AdaptConfig adapt;           // RBF controllers only

  void validate() const;
};

struct ErrorPair {
  Vector2d e1{Vector2d::Zero()};      // q_d - q
  Vector2d e1_dot{Vector2d::Zero()};  // q'_d - q'
  Vector2d e2{Vector2d::Zero()};      // e1_dot + K1 e1
  Vector2d k1{Vector2d::Zero()};      // gains used to form e2

  Vector2d qdot_r(const DesiredPoint& d) const { return d.qdot + k1.cwiseProduct(e1); }
  Vector2d qddot_r(const DesiredPoint& d) const { return d.qddot + k1.cwiseProduct(e1_dot); }
};

enum class ControllerKind { kPid, kMbff, kRbf };

struct ControllerState {
  ControllerKind kind{ControllerKind::kPid};
  GainSet gains;
  // PID: the accumulated integral torque K_I * int e2 dt.  The gain is folded
  // into each increment so the update mirrors adapt_step operation-for-
  // operation (see rbf_torque).
  Vector2d integral_term{Vector2d::Zero()};
  RbfNetwork net;  // RBF controllers only
};

ErrorPair composite_error(const Vector2d& qd, const Vector2d& qd_dot, const JointStated& state,
                          const Vector2d& k1);

// tau = K2 e2 + integral_term, then integral_term += (KI_i e2_i) dt per joint.
Vector2d pid_torque(ControllerState& state, const ErrorPair& err, double dt);

// tau = K2 e2 + M(q_d)q"_d + C(q_d, q'_d)q'_d + G(q_d).
Vector2d mbff_torque(const RobotParamsd& params, const GainSet& gains, const ErrorPair& err,
                     const DesiredPoint& desired);

// tau = K2 e2 + W^T S(Z_d) with the pre-update weights, then one adapt_step.
Vector2d rbf_torque(ControllerState& state, const ErrorPair& err, const Vector6d& zd, double dt);

// Residuals between the composite dynamics at the actual state and the
// feedforward dynamics at the desired state:
//   H1 uses C(q, q') q'_r in the first bracket, H2 uses C(q, q') q'.
std::pair<Vector2d, Vector2d> residuals(const RobotParamsd& params, const JointStated& state,
                                        const ErrorPair& err, const DesiredPoint& desired);

}  // namespace arbf
