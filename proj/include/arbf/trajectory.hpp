#pragma once

#include <array>
#include <utility>
#include <variant>
#include <vector>

#include "arbf/types.hpp"

// Periodic reference generator.  A joint follows either a sinusoid or a
// constant set point; the stacked input Z_d(t) = [q_d, q'_d, q"_d] feeds the
// RBF network, the clustering step and the excitation analysis.

namespace arbf {

struct Sinusoid {
  double amplitude{1.0};   // [rad]
  double omega{1.0};       // angular frequency [rad/s]
  double phase{0.0};       // [rad]
  double offset{0.0};      // [rad]
};

struct SetPoint {
  double value{0.0};  // [rad]
};

using JointWaveform = std::variant<Sinusoid, SetPoint>;

struct TrajectorySpec {
  std::array<JointWaveform, 2> joints{Sinusoid{}, Sinusoid{}};
  double period{0.0};  // common period t_p [s]

  // Throws std::invalid_argument if the period is not positive, a sinusoid
  // frequency is not positive, or the stated period is not a common period
  // of every sinusoid joint.
  void validate() const;

  // q_d1 = sin(t), q_d2 = cos(t), t_p = 2*pi.
  static TrajectorySpec sinusoid_default();
  static TrajectorySpec set_point(const Vector2d& value, double period = 1.0);
};

struct DesiredPoint {
  Vector2d q{Vector2d::Zero()};
  Vector2d qdot{Vector2d::Zero()};
  Vector2d qddot{Vector2d::Zero()};

  Vector6d as_input() const {
    Vector6d z;
    z << q, qdot, qddot;
    return z;
  }
};

// Analytic evaluation of the reference and its first two derivatives.
DesiredPoint sample(const TrajectorySpec& spec, double t);

// Samples at t0, t0+dt, ... with count floor((t1-t0)/dt)+1; throws on dt <= 0
// or t1 <= t0.
std::vector<std::pair<double, DesiredPoint>> sample_grid(const TrajectorySpec& spec, double t0,
                                                         double t1, double dt);

// Same grid as an N x 6 matrix of stacked inputs.
Eigen::MatrixXd input_samples(const TrajectorySpec& spec, double t0, double t1, double dt);

// Amplitude-derived bound with ||Z_d(t)|| <= input_bound(spec) for all t.
double input_bound(const TrajectorySpec& spec);

}  // namespace arbf
