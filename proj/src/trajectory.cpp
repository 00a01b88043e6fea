#include "arbf/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace arbf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Evaluated {
  double q, qdot, qddot;
};

Evaluated evaluate(const JointWaveform& wf, double t) {
  if (const auto* s = std::get_if<Sinusoid>(&wf)) {
    const double arg = s->omega * t + s->phase;
    return {s->amplitude * std::sin(arg) + s->offset, s->amplitude * s->omega * std::cos(arg),
            -s->amplitude * s->omega * s->omega * std::sin(arg)};
  }
  return {std::get<SetPoint>(wf).value, 0.0, 0.0};
}

}  // namespace

void TrajectorySpec::validate() const {
  if (!(period > 0.0)) throw std::invalid_argument("trajectory.period must be > 0");
  for (std::size_t i = 0; i < joints.size(); ++i) {
    if (const auto* s = std::get_if<Sinusoid>(&joints[i])) {
      if (!(s->omega > 0.0))
        throw std::invalid_argument("trajectory joint " + std::to_string(i + 1) +
                                    ": omega must be > 0");
      // The stated period must hold an integer number of cycles.
      const double cycles = s->omega * period / kTwoPi;
      if (std::abs(cycles - std::round(cycles)) > 1e-6 * std::max(1.0, cycles))
        throw std::invalid_argument("trajectory.period is not a common period of joint " +
                                    std::to_string(i + 1));
    }
  }
}

TrajectorySpec TrajectorySpec::sinusoid_default() {
  TrajectorySpec spec;
  spec.joints[0] = Sinusoid{1.0, 1.0, 0.0, 0.0};
  spec.joints[1] = Sinusoid{1.0, 1.0, std::numbers::pi / 2.0, 0.0};
  spec.period = kTwoPi;
  return spec;
}

TrajectorySpec TrajectorySpec::set_point(const Vector2d& value, double period) {
  TrajectorySpec spec;
  spec.joints[0] = SetPoint{value[0]};
  spec.joints[1] = SetPoint{value[1]};
  spec.period = period;
  return spec;
}

DesiredPoint sample(const TrajectorySpec& spec, double t) {
  DesiredPoint d;
  for (int i = 0; i < 2; ++i) {
    const Evaluated e = evaluate(spec.joints[static_cast<std::size_t>(i)], t);
    d.q[i] = e.q;
    d.qdot[i] = e.qdot;
    d.qddot[i] = e.qddot;
  }
  return d;
}

std::vector<std::pair<double, DesiredPoint>> sample_grid(const TrajectorySpec& spec, double t0,
                                                         double t1, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("sample_grid: dt must be > 0");
  if (!(t1 > t0)) throw std::invalid_argument("sample_grid: t1 must be > t0");
  const double span = (t1 - t0) / dt;
  const auto count =
      static_cast<std::size_t>(std::floor(span * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()))) + 1;
  std::vector<std::pair<double, DesiredPoint>> grid;
  grid.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = t0 + dt * static_cast<double>(k);
    grid.emplace_back(t, sample(spec, t));
  }
  return grid;
}

Eigen::MatrixXd input_samples(const TrajectorySpec& spec, double t0, double t1, double dt) {
  const auto grid = sample_grid(spec, t0, t1, dt);
  Eigen::MatrixXd z(static_cast<Eigen::Index>(grid.size()), 6);
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    z.row(i) = grid[static_cast<std::size_t>(i)].second.as_input().transpose();
  return z;
}

double input_bound(const TrajectorySpec& spec) {
  double sum = 0.0;
  for (const auto& joint : spec.joints) {
    if (const auto* s = std::get_if<Sinusoid>(&joint)) {
      const double a = std::abs(s->amplitude) + std::abs(s->offset);
      const double v = std::abs(s->amplitude) * s->omega;
      const double w = std::abs(s->amplitude) * s->omega * s->omega;
      sum += a * a + v * v + w * w;
    } else {
      const double c = std::get<SetPoint>(joint).value;
      sum += c * c;
    }
  }
  return std::sqrt(sum);
}

}  // namespace arbf
