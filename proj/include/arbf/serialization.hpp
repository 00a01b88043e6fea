#pragma once

#include <string>

#include <json.hpp>

#include "arbf/excitation.hpp"
#include "arbf/metrics.hpp"
#include "arbf/simulator.hpp"

// JSON (de)serialization for the domain types plus the CSV writers.  All
// numeric file output uses round-trip precision so reruns diff byte-exact.

namespace arbf {

nlohmann::json to_json(const RobotParamsd& p);
RobotParamsd robot_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrajectorySpec& spec);
TrajectorySpec trajectory_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RbfNetwork& net);
RbfNetwork network_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GainSet& gains);
GainSet gains_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Scenario& scenario);
// Throws ConfigError with a field-level message on any schema violation.
Scenario scenario_from_json(const nlohmann::json& j);

// File helpers; parse errors are rethrown as ConfigError with line/column
// diagnostics.
Scenario load_scenario(const std::string& path);
RbfNetwork load_network(const std::string& path);
void save_network(const RbfNetwork& net, const std::string& path);

// timeseries CSV with header
//   t,q1,q2,qd1,qd2,e11,e12,e21,e22,tau1,tau2,nn1,nn2,ff1,ff2,wnorm1,wnorm2
void write_timeseries_csv(const RunResult& result, const std::string& path);

// Decimated weight snapshots (RBF runs).
nlohmann::json snapshots_to_json(const RunResult& result);

// Per-run metrics for one or more windows.
nlohmann::json summary_to_json(const RunResult& result, const std::vector<Window>& windows);

nlohmann::json to_json(const SummaryTable& table);

nlohmann::json to_json(const ExcitationReport& report);
void write_gramian_csv(const Eigen::MatrixXd& gramian, const std::string& path);

// Full round-trip decimal formatting (17 significant digits).
std::string format_double(double v);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace arbf
