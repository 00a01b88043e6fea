#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arbf/clustering.hpp"
#include "arbf/control.hpp"
#include "arbf/dynamics.hpp"
#include "arbf/rbf_network.hpp"
#include "arbf/trajectory.hpp"

// Fixed-step closed-loop simulation: one torque per step (zero-order hold),
// plant integrated over dt, full time series recorded.

namespace arbf {

enum class IntegratorKind { kSemiImplicitEuler, kRk4 };

// Where the hidden nodes come from for an RBF controller.
struct LatticeSpec {
  std::vector<std::vector<double>> levels;  // per input dimension
};

struct KmeansNodeSpec {
  int nodes{20};
  std::optional<std::uint64_t> seed;  // defaults to the scenario seed
  int max_iters{500};
  double tol{1e-9};
  KmeansInit init{KmeansInit::kNearZero};
  double sample_dt{0.01};  // trajectory sampling step over one period
};

struct NetworkConfig {
  double sigma{1.1};
  std::optional<LatticeSpec> lattice;
  std::optional<KmeansNodeSpec> kmeans;
  std::optional<std::string> centers_file;    // network JSON on disk
  std::optional<RbfNetwork> preset;           // in-memory network (tests)
};

// Controller labels accepted in scenarios.
inline constexpr const char* kControllerPid = "pid";
inline constexpr const char* kControllerMbff = "mbff";
inline constexpr const char* kControllerRbfLattice = "rbfnn_lattice";
inline constexpr const char* kControllerRbfOptimized = "rbfnn_optimized";

struct Scenario {
  RobotParamsd robot;
  TrajectorySpec trajectory{TrajectorySpec::sinusoid_default()};
  GainSet gains;
  std::string controller{kControllerRbfOptimized};
  std::vector<std::string> controllers;  // compare list; defaults to {controller}
  NetworkConfig network;
  double duration{2000.0};
  double dt{0.01};
  JointStated initial_state;
  IntegratorKind integrator{IntegratorKind::kSemiImplicitEuler};
  int record_decimation{1};
  std::optional<int> weight_snapshot_decimation;  // defaults to steps/200
  std::uint64_t seed{1};
  std::optional<std::pair<double, double>> window;  // metrics window [s]
  // PE analysis settings (cmd_pe).
  double pe_t0{0.0};
  std::optional<double> pe_T0;  // defaults to 2 * trajectory.period
  std::optional<double> pe_dt;  // defaults to dt

  void validate() const;
  std::pair<double, double> metrics_window() const;  // window or [duration-20, duration]
};

struct RunResult {
  std::string label;
  ControllerKind kind{ControllerKind::kPid};
  GainSet gains;
  double dt{0.0};
  int record_decimation{1};

  std::vector<double> t;
  std::vector<Vector2d> q, qdot, qd, e1, e2, tau;
  std::vector<Vector2d> nn;       // W^T S(Z_d) (zero for PID/MBFF)
  std::vector<Vector2d> ff;       // inverse dynamics at the desired state
  std::vector<Vector2d> wnorm;    // ||W_i|| per joint (RBF only)
  std::vector<Vector2d> dwnorm;   // ||W_i(k+1) - W_i(k)|| per joint (RBF only)
  std::vector<Vector2d> dwmax;    // max |entry change| per joint (RBF only)

  std::vector<double> snapshot_t;
  std::vector<Eigen::MatrixXd> snapshots;   // decimated weight matrices

  std::optional<RbfNetwork> final_network;

  bool has_network() const { return final_network.has_value(); }
  std::size_t samples() const { return t.size(); }
};

struct RunOutcome {
  std::string label;
  std::optional<RunResult> result;
  std::string error;  // nonempty when the run failed

  bool ok() const { return result.has_value(); }
};

// Builds the hidden-node network for an RBF controller label.  For
// "rbfnn_lattice" the lattice spec is required; "rbfnn_optimized" uses, in
// order of precedence, the preset network, the centers file, or K-means over
// one period of the desired trajectory.
RbfNetwork build_network(const Scenario& scenario, const std::string& controller_label);

// Advances the plant by one step with the torque held constant.
JointStated integrate_step(const RobotParamsd& params, const JointStated& state,
                           const Vector2d& tau, double dt, IntegratorKind method);

// Runs scenario.controller for scenario.duration.  Deterministic given the
// scenario (including seed).  Throws DivergedError when ||q'|| exceeds 1e6 or
// the state stops being finite.
RunResult run(const Scenario& scenario);

// One run per controller label, same scenario otherwise.  Runs execute in
// parallel up to ADAPTIVE_SIM_THREADS (or the hardware concurrency); a failed
// run is reported in its outcome without aborting the others.
std::vector<RunOutcome> run_comparison(const Scenario& scenario,
                                       const std::vector<std::string>& controllers);

}  // namespace arbf
