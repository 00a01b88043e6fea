#include "arbf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <thread>

#include "arbf/errors.hpp"
#include "arbf/serialization.hpp"

namespace arbf {

namespace {

ControllerKind kind_from_label(const std::string& label) {
  if (label == kControllerPid) return ControllerKind::kPid;
  if (label == kControllerMbff) return ControllerKind::kMbff;
  if (label == kControllerRbfLattice || label == kControllerRbfOptimized)
    return ControllerKind::kRbf;
  throw ConfigError("unknown controller '" + label + "'");
}

unsigned thread_cap() {
  if (const char* env = std::getenv("ADAPTIVE_SIM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

void Scenario::validate() const {
  robot.validate();
  trajectory.validate();
  // Strict gain positivity is enforced at the JSON boundary; in-memory
  // scenarios may use degenerate gains (zero gains, frozen learning) for
  // diagnostics.
  if (!gains.k1.allFinite() || !gains.k2.allFinite() || !gains.ki.allFinite() ||
      gains.k1.minCoeff() < 0.0 || gains.k2.minCoeff() < 0.0 || gains.ki.minCoeff() < 0.0 ||
      !(gains.adapt.gamma >= 0.0) || !(gains.adapt.delta0 >= 0.0) || !(gains.adapt.w0 > 0.0))
    throw ConfigError("scenario.gains must be finite and non-negative");
  kind_from_label(controller);
  for (const auto& label : controllers) kind_from_label(label);
  if (!(duration > 0.0)) throw ConfigError("scenario.duration must be > 0");
  if (!(dt > 0.0)) throw ConfigError("scenario.dt must be > 0");
  if (record_decimation < 1) throw ConfigError("scenario.record_decimation must be >= 1");
  if (weight_snapshot_decimation && *weight_snapshot_decimation < 1)
    throw ConfigError("scenario.weight_snapshot_decimation must be >= 1");
  if (!initial_state.q.allFinite() || !initial_state.qdot.allFinite())
    throw ConfigError("scenario.initial_state must be finite");
  if (window && !(window->first < window->second))
    throw ConfigError("scenario.window must satisfy begin < end");
  if (!(network.sigma > 0.0)) throw ConfigError("scenario.network.sigma must be > 0");
  if (network.kmeans) {
    if (network.kmeans->nodes < 1) throw ConfigError("scenario.network.kmeans.nodes must be >= 1");
    if (!(network.kmeans->sample_dt > 0.0))
      throw ConfigError("scenario.network.kmeans.sample_dt must be > 0");
  }
  if (pe_T0 && !(*pe_T0 > 0.0)) throw ConfigError("scenario.pe.T0 must be > 0");
  if (pe_dt && !(*pe_dt > 0.0)) throw ConfigError("scenario.pe.dt must be > 0");
}

std::pair<double, double> Scenario::metrics_window() const {
  if (window) return *window;
  return {std::max(0.0, duration - 20.0), duration};
}

RbfNetwork build_network(const Scenario& scenario, const std::string& controller_label) {
  RbfNetwork net;
  net.sigma = scenario.network.sigma;
  if (controller_label == kControllerRbfLattice) {
    if (!scenario.network.lattice)
      throw ConfigError("controller 'rbfnn_lattice' needs scenario.network.lattice");
    net.centers = lattice_centers(scenario.network.lattice->levels);
  } else if (scenario.network.preset) {
    net = *scenario.network.preset;
  } else if (scenario.network.centers_file) {
    RbfNetwork loaded = load_network(*scenario.network.centers_file);
    loaded.sigma = scenario.network.sigma;
    net = std::move(loaded);
  } else if (scenario.network.kmeans) {
    const KmeansNodeSpec& spec = *scenario.network.kmeans;
    KmeansConfig cfg;
    cfg.clusters = spec.nodes;
    cfg.seed = spec.seed.value_or(scenario.seed);
    cfg.max_iters = spec.max_iters;
    cfg.tol = spec.tol;
    cfg.init = spec.init;
    const Eigen::MatrixXd data =
        input_samples(scenario.trajectory, 0.0, scenario.trajectory.period, spec.sample_dt);
    net.centers = kmeans(data, cfg).centers;
  } else {
    throw ConfigError("controller '" + controller_label +
                      "' needs a network source (preset, centers_file or kmeans)");
  }
  if (net.weights.size() == 0) net.weights = Eigen::MatrixXd::Zero(net.node_count(), 2);
  net.validate();
  return net;
}

JointStated integrate_step(const RobotParamsd& params, const JointStated& state,
                           const Vector2d& tau, double dt, IntegratorKind method) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_step: dt must be > 0");
  if (method == IntegratorKind::kSemiImplicitEuler) {
    JointStated next;
    next.qdot = state.qdot + forward_dynamics(params, state, tau) * dt;
    next.q = state.q + next.qdot * dt;
    return next;
  }
  // Classical RK4 on (q, q') with the torque held constant across the stages.
  const auto deriv = [&](const JointStated& s) {
    return std::pair<Vector2d, Vector2d>{s.qdot, forward_dynamics(params, s, tau)};
  };
  const auto shifted = [&](const JointStated& s, const std::pair<Vector2d, Vector2d>& k,
                           double h) {
    JointStated out;
    out.q = s.q + k.first * h;
    out.qdot = s.qdot + k.second * h;
    return out;
  };
  const auto k1 = deriv(state);
  const auto k2 = deriv(shifted(state, k1, dt / 2.0));
  const auto k3 = deriv(shifted(state, k2, dt / 2.0));
  const auto k4 = deriv(shifted(state, k3, dt));
  JointStated next;
  next.q = state.q + (dt / 6.0) * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first);
  next.qdot =
      state.qdot + (dt / 6.0) * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second);
  return next;
}

RunResult run(const Scenario& scenario) {
  scenario.validate();

  RunResult result;
  result.label = scenario.controller;
  result.kind = kind_from_label(scenario.controller);
  result.gains = scenario.gains;
  result.dt = scenario.dt;
  result.record_decimation = scenario.record_decimation;

  ControllerState ctl;
  ctl.kind = result.kind;
  ctl.gains = scenario.gains;
  const bool is_rbf = ctl.kind == ControllerKind::kRbf;
  if (is_rbf) ctl.net = build_network(scenario, scenario.controller);

  const auto steps = static_cast<std::size_t>(std::llround(scenario.duration / scenario.dt));
  const auto recorded = steps / static_cast<std::size_t>(scenario.record_decimation) + 1;
  result.t.reserve(recorded);
  result.q.reserve(recorded);
  result.qdot.reserve(recorded);
  result.qd.reserve(recorded);
  result.e1.reserve(recorded);
  result.e2.reserve(recorded);
  result.tau.reserve(recorded);
  result.nn.reserve(recorded);
  result.ff.reserve(recorded);
  if (is_rbf) {
    result.wnorm.reserve(recorded);
    result.dwnorm.reserve(recorded);
    result.dwmax.reserve(recorded);
  }
  const int snap_decim = scenario.weight_snapshot_decimation.value_or(
      std::max(1, static_cast<int>(steps / 200)));

  JointStated state = scenario.initial_state;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = scenario.dt * static_cast<double>(k);
    const DesiredPoint desired = sample(scenario.trajectory, t);
    const ErrorPair err = composite_error(desired.q, desired.qdot, state, ctl.gains.k1);

    Vector2d tau;
    Vector2d nn = Vector2d::Zero();
    Vector2d dwnorm = Vector2d::Zero();
    Vector2d dwmax = Vector2d::Zero();
    switch (ctl.kind) {
      case ControllerKind::kPid:
        tau = pid_torque(ctl, err, scenario.dt);
        break;
      case ControllerKind::kMbff:
        tau = mbff_torque(scenario.robot, ctl.gains, err, desired);
        break;
      case ControllerKind::kRbf: {
        // Same steps as rbf_torque, keeping the intermediates for recording.
        const Eigen::VectorXd s = activations(ctl.net, desired.as_input());
        nn = ctl.net.weights.transpose() * s;
        tau = ctl.gains.k2.cwiseProduct(err.e2) + nn;
        Eigen::MatrixXd next = adapt_step(ctl.net, ctl.gains.adapt, s, err.e2, scenario.dt);
        for (int i = 0; i < 2; ++i) {
          dwnorm[i] = (next.col(i) - ctl.net.weights.col(i)).norm();
          dwmax[i] = (next.col(i) - ctl.net.weights.col(i)).cwiseAbs().maxCoeff();
        }
        ctl.net.weights = std::move(next);
        break;
      }
    }

    if (k % static_cast<std::size_t>(scenario.record_decimation) == 0) {
      result.t.push_back(t);
      result.q.push_back(state.q);
      result.qdot.push_back(state.qdot);
      result.qd.push_back(desired.q);
      result.e1.push_back(err.e1);
      result.e2.push_back(err.e2);
      result.tau.push_back(tau);
      result.nn.push_back(nn);
      result.ff.push_back(inverse_dynamics(scenario.robot, desired.q, desired.qdot, desired.qddot));
      if (is_rbf) {
        Vector2d wn;
        for (int i = 0; i < 2; ++i) wn[i] = ctl.net.weights.col(i).norm();
        result.wnorm.push_back(wn);
        result.dwnorm.push_back(dwnorm);
        result.dwmax.push_back(dwmax);
      }
    }
    if (is_rbf && k % static_cast<std::size_t>(snap_decim) == 0) {
      result.snapshot_t.push_back(t);
      result.snapshots.push_back(ctl.net.weights);
    }

    state = integrate_step(scenario.robot, state, tau, scenario.dt, scenario.integrator);
    if (!state.q.allFinite() || !state.qdot.allFinite() || state.qdot.norm() > 1e6)
      throw DivergedError(k, t);
  }

  if (is_rbf) result.final_network = std::move(ctl.net);
  return result;
}

std::vector<RunOutcome> run_comparison(const Scenario& scenario,
                                       const std::vector<std::string>& controllers) {
  if (controllers.empty()) throw ConfigError("run_comparison: no controllers given");
  const unsigned cap = std::min<unsigned>(thread_cap(), static_cast<unsigned>(controllers.size()));

  std::vector<RunOutcome> outcomes(controllers.size());
  std::vector<std::future<void>> pending;
  std::size_t next = 0;
  const auto launch = [&](std::size_t idx) {
    return std::async(std::launch::async, [&scenario, &controllers, &outcomes, idx]() {
      Scenario one = scenario;
      one.controller = controllers[idx];
      outcomes[idx].label = controllers[idx];
      try {
        outcomes[idx].result = run(one);
      } catch (const std::exception& e) {
        outcomes[idx].error = e.what();
      }
    });
  };
  while (next < controllers.size() || !pending.empty()) {
    while (next < controllers.size() && pending.size() < cap) pending.push_back(launch(next++));
    pending.front().wait();
    pending.erase(pending.begin());
  }
  return outcomes;
}

}  // namespace arbf
