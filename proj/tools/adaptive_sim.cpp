// Command-line front end: scenario execution (run), four-controller
// comparison (compare), persistence-of-excitation analysis (pe) and
// hidden-node generation (nodes).  Exit codes: 0 ok, 2 config error,
// 3 diverged run.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arbf/errors.hpp"
#include "arbf/metrics.hpp"
#include "arbf/serialization.hpp"
#include "arbf/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

struct CommonOptions {
  std::string scenario_path;
  std::string out_dir{"."};
  std::optional<double> dt;
  std::optional<double> duration;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> integrator;
  std::optional<std::string> window;
  std::optional<std::string> controllers;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--scenario", opt.scenario_path, "scenario JSON file")->required();
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_option("--dt", [&opt](const CLI::results_t& r) { opt.dt = std::stod(r[0]); return true; },
                  "override the step size [s]");
  cmd->add_option("--duration",
                  [&opt](const CLI::results_t& r) { opt.duration = std::stod(r[0]); return true; },
                  "override the run duration [s]");
  cmd->add_option("--seed",
                  [&opt](const CLI::results_t& r) { opt.seed = std::stoull(r[0]); return true; },
                  "override the RNG seed");
  cmd->add_option("--integrator",
                  [&opt](const CLI::results_t& r) { opt.integrator = r[0]; return true; },
                  "euler | rk4");
  cmd->add_option("--window",
                  [&opt](const CLI::results_t& r) { opt.window = r[0]; return true; },
                  "metrics window A:B [s]");
  cmd->add_option("--controllers",
                  [&opt](const CLI::results_t& r) { opt.controllers = r[0]; return true; },
                  "comma-separated controller list");
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const std::string part = s.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!part.empty()) parts.push_back(part);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return parts;
}

arbf::Scenario load_with_overrides(const CommonOptions& opt) {
  arbf::Scenario sc = arbf::load_scenario(opt.scenario_path);
  if (opt.dt) sc.dt = *opt.dt;
  if (opt.duration) sc.duration = *opt.duration;
  if (opt.seed) sc.seed = *opt.seed;
  if (opt.integrator) {
    if (*opt.integrator == "euler")
      sc.integrator = arbf::IntegratorKind::kSemiImplicitEuler;
    else if (*opt.integrator == "rk4")
      sc.integrator = arbf::IntegratorKind::kRk4;
    else
      throw arbf::ConfigError("--integrator: expected 'euler' or 'rk4'");
  }
  if (opt.window) {
    const auto colon = opt.window->find(':');
    if (colon == std::string::npos)
      throw arbf::ConfigError("--window: expected the form A:B");
    try {
      sc.window = {std::stod(opt.window->substr(0, colon)),
                   std::stod(opt.window->substr(colon + 1))};
    } catch (const std::exception&) {
      throw arbf::ConfigError("--window: expected numbers in the form A:B");
    }
  }
  if (opt.controllers) {
    sc.controllers = split_csv(*opt.controllers);
    if (sc.controllers.empty()) throw arbf::ConfigError("--controllers: empty list");
  }
  sc.validate();
  return sc;
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

std::vector<arbf::Window> report_windows(const arbf::Scenario& sc) {
  const auto [a, b] = sc.metrics_window();
  std::vector<arbf::Window> windows{{a, b}};
  // Also report the tighter trailing window when it is distinct and valid.
  const double alt_begin = std::max(0.0, sc.duration - 10.0);
  if (!sc.window && alt_begin > a) windows.push_back({alt_begin, sc.duration});
  return windows;
}

int cmd_run(const CommonOptions& opt) {
  const arbf::Scenario sc = load_with_overrides(opt);
  const fs::path out = prepare_out_dir(opt.out_dir);
  const arbf::RunResult result = arbf::run(sc);
  arbf::write_timeseries_csv(result, (out / "timeseries.csv").string());
  arbf::write_text_file((out / "summary.json").string(),
                        arbf::summary_to_json(result, report_windows(sc)).dump(2) + "\n");
  if (result.has_network()) {
    arbf::save_network(*result.final_network, (out / "network_final.json").string());
    arbf::write_text_file((out / "weights_snapshots.json").string(),
                          arbf::snapshots_to_json(result).dump() + "\n");
  }
  std::printf("run '%s': %zu samples -> %s\n", result.label.c_str(), result.samples(),
              out.string().c_str());
  return kExitOk;
}

int cmd_compare(const CommonOptions& opt) {
  const arbf::Scenario sc = load_with_overrides(opt);
  const fs::path out = prepare_out_dir(opt.out_dir);
  std::vector<std::string> controllers = sc.controllers;
  if (controllers.empty()) controllers = {sc.controller};
  const auto outcomes = arbf::run_comparison(sc, controllers);

  std::vector<std::string> used_names;
  for (const auto& outcome : outcomes) {
    if (!outcome.ok()) continue;
    std::string name = "timeseries_" + outcome.label;
    int suffix = 2;
    while (std::find(used_names.begin(), used_names.end(), name) != used_names.end())
      name = "timeseries_" + outcome.label + "_" + std::to_string(suffix++);
    used_names.push_back(name);
    arbf::write_timeseries_csv(*outcome.result, (out / (name + ".csv")).string());
  }

  const auto [a, b] = sc.metrics_window();
  const arbf::SummaryTable table = arbf::summary_table(outcomes, {a, b});
  std::string text = table.to_text();
  json j = arbf::to_json(table);
  const auto windows = report_windows(sc);
  if (windows.size() > 1) {
    const arbf::SummaryTable alt = arbf::summary_table(outcomes, windows[1]);
    text += "\n" + alt.to_text();
    j["alt"] = arbf::to_json(alt);
  }
  arbf::write_text_file((out / "table.txt").string(), text);
  arbf::write_text_file((out / "table.json").string(), j.dump(2) + "\n");
  std::fputs(text.c_str(), stdout);

  const bool all_failed =
      std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return !o.ok(); });
  return all_failed ? kExitDiverged : kExitOk;
}

int cmd_pe(const CommonOptions& opt, bool write_gramian) {
  const arbf::Scenario sc = load_with_overrides(opt);
  const fs::path out = prepare_out_dir(opt.out_dir);
  const std::string label =
      sc.controller == arbf::kControllerRbfLattice ? sc.controller : arbf::kControllerRbfOptimized;
  const arbf::RbfNetwork net = arbf::build_network(sc, label);
  const double T0 = sc.pe_T0.value_or(2.0 * sc.trajectory.period);
  const double dt = sc.pe_dt.value_or(sc.dt);
  const arbf::ExcitationReport report =
      arbf::analyze_excitation(net, sc.trajectory, sc.pe_t0, T0, dt);
  arbf::write_text_file((out / "pe_report.json").string(),
                        arbf::to_json(report).dump(2) + "\n");
  if (write_gramian) arbf::write_gramian_csv(report.gramian, (out / "gramian.csv").string());
  std::printf("pe: %lld nodes, alpha1=%s alpha2=%s -> %s\n",
              static_cast<long long>(report.gramian.rows()),
              arbf::format_double(report.alpha1).c_str(),
              arbf::format_double(report.alpha2).c_str(),
              report.persistent ? "PE" : "not PE");
  return kExitOk;
}

int cmd_nodes(const CommonOptions& opt) {
  const arbf::Scenario sc = load_with_overrides(opt);
  const fs::path out = prepare_out_dir(opt.out_dir);
  const std::string label =
      sc.controller == arbf::kControllerRbfLattice ? sc.controller : arbf::kControllerRbfOptimized;
  arbf::RbfNetwork net;
  try {
    net = arbf::build_network(sc, label);
  } catch (const std::logic_error& e) {
    const std::uint64_t seed =
        sc.network.kmeans && sc.network.kmeans->seed ? *sc.network.kmeans->seed : sc.seed;
    throw arbf::ConfigError(std::string(e.what()) + " (kmeans seed " + std::to_string(seed) + ")");
  }
  arbf::save_network(net, (out / "centers.json").string());

  const double sample_dt = sc.network.kmeans ? sc.network.kmeans->sample_dt : 0.01;
  const Eigen::MatrixXd samples =
      arbf::input_samples(sc.trajectory, 0.0, sc.trajectory.period, sample_dt);
  std::string csv = "t,zd1,zd2,zd3,zd4,zd5,zd6,c1,c2,c3,c4,c5,c6\n";
  char buf[64];
  const auto rows = std::max<Eigen::Index>(samples.rows(), net.centers.rows());
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (i < samples.rows()) {
      std::snprintf(buf, sizeof(buf), "%.17g", sample_dt * static_cast<double>(i));
      csv += buf;
      for (Eigen::Index c = 0; c < 6; ++c) {
        std::snprintf(buf, sizeof(buf), ",%.17g", samples(i, c));
        csv += buf;
      }
    } else {
      csv += ",,,,,,";
    }
    if (i < net.centers.rows()) {
      for (Eigen::Index c = 0; c < net.centers.cols(); ++c) {
        std::snprintf(buf, sizeof(buf), ",%.17g", net.centers(i, c));
        csv += buf;
      }
    } else {
      for (Eigen::Index c = 0; c < net.centers.cols(); ++c) csv += ',';
    }
    csv += '\n';
  }
  arbf::write_text_file((out / "nodes_vs_trajectory.csv").string(), csv);
  std::printf("nodes: %lld centers -> %s\n", static_cast<long long>(net.centers.rows()),
              out.string().c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive feedforward RBF-network manipulator control simulator"};
  app.require_subcommand(1);

  CommonOptions run_opt, compare_opt, pe_opt, nodes_opt;
  bool write_gramian = false;

  CLI::App* run_cmd = app.add_subcommand("run", "run one scenario and write its time series");
  add_common(run_cmd, run_opt);
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run the controller list and tabulate the indices");
  add_common(compare_cmd, compare_opt);
  CLI::App* pe_cmd = app.add_subcommand("pe", "excitation analysis of the node distribution");
  add_common(pe_cmd, pe_opt);
  pe_cmd->add_flag("--gramian", write_gramian, "also write gramian.csv");
  CLI::App* nodes_cmd = app.add_subcommand("nodes", "generate the hidden-node distribution");
  add_common(nodes_cmd, nodes_opt);

  try {
    app.parse(argc, argv);
    if (run_cmd->parsed()) return cmd_run(run_opt);
    if (compare_cmd->parsed()) return cmd_compare(compare_opt);
    if (pe_cmd->parsed()) return cmd_pe(pe_opt, write_gramian);
    if (nodes_cmd->parsed()) return cmd_nodes(nodes_opt);
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const arbf::DivergedError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
}
