#include "arbf/control.hpp"

#include <stdexcept>

namespace arbf {

void GainSet::validate() const {
  if (!(k1.minCoeff() > 0.0)) throw std::invalid_argument("gains.k1 entries must be > 0");
  if (!(k2.minCoeff() > 0.0)) throw std::invalid_argument("gains.k2 entries must be > 0");
  if (!(ki.minCoeff() > 0.0)) throw std::invalid_argument("gains.ki entries must be > 0");
  if (!(adapt.gamma > 0.0)) throw std::invalid_argument("gains.adapt.gamma must be > 0");
  if (!(adapt.delta0 >= 0.0)) throw std::invalid_argument("gains.adapt.delta0 must be >= 0");
  if (!(adapt.w0 > 0.0)) throw std::invalid_argument("gains.adapt.w0 must be > 0");
}

ErrorPair composite_error(const Vector2d& qd, const Vector2d& qd_dot, const JointStated& state,
                          const Vector2d& k1) {
  ErrorPair err;
  err.e1 = qd - state.q;
  err.e1_dot = qd_dot - state.qdot;
  err.e2 = err.e1_dot + k1.cwiseProduct(err.e1);
  err.k1 = k1;
  return err;
}

Vector2d pid_torque(ControllerState& state, const ErrorPair& err, double dt) {
  const Vector2d tau = state.gains.k2.cwiseProduct(err.e2) + state.integral_term;
  // Same per-step shape as the weight update in adapt_step: gain times error,
  // times dt, added to the accumulator after the torque is formed.
  for (int i = 0; i < 2; ++i)
    state.integral_term[i] += (state.gains.ki[i] * err.e2[i]) * dt;
  return tau;
}

Vector2d mbff_torque(const RobotParamsd& params, const GainSet& gains, const ErrorPair& err,
                     const DesiredPoint& desired) {
  return gains.k2.cwiseProduct(err.e2) +
         inverse_dynamics(params, desired.q, desired.qdot, desired.qddot);
}

Vector2d rbf_torque(ControllerState& state, const ErrorPair& err, const Vector6d& zd, double dt) {
  const Eigen::VectorXd s = activations(state.net, zd);
  const Vector2d nn = state.net.weights.transpose() * s;
  const Vector2d tau = state.gains.k2.cwiseProduct(err.e2) + nn;
  state.net.weights = adapt_step(state.net, state.gains.adapt, s, err.e2, dt);
  return tau;
}

std::pair<Vector2d, Vector2d> residuals(const RobotParamsd& params, const JointStated& state,
                                        const ErrorPair& err, const DesiredPoint& desired) {
  const Vector2d qdot_r = err.qdot_r(desired);
  const Vector2d qddot_r = err.qddot_r(desired);
  const Mat2<double> m = mass_matrix(params, state.q);
  const Mat2<double> c = coriolis_matrix(params, state.q, state.qdot);
  const Vector2d g = gravity_vector(params, state.q);
  const Vector2d feedforward = inverse_dynamics(params, desired.q, desired.qdot, desired.qddot);
  const Vector2d h1 = m * qddot_r + c * qdot_r + g - feedforward;
  const Vector2d h2 = m * qddot_r + c * state.qdot + g - feedforward;
  return {h1, h2};
}

}  // namespace arbf
