#include "arbf/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "arbf/errors.hpp"

namespace arbf {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& j, const char* key, const std::string& where) {
  const json& v = member(j, key, where);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, const std::string& where, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return number(j, key, where);
}

Vector2d vec2(const json& j, const char* key, const std::string& where) {
  const json& v = member(j, key, where);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(where + "." + key, "expected an array of two numbers");
  return {v[0].get<double>(), v[1].get<double>()};
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) fail(where, "unknown field '" + key + "'");
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
  const auto cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(where, "rows must be nonempty arrays");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) fail(where, "ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) fail(where, "entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
    }
  }
  return m;
}

json vec2_to_json(const Vector2d& v) { return json::array({v[0], v[1]}); }

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

json to_json(const RobotParamsd& p) {
  return {{"m1", p.m1}, {"m2", p.m2}, {"l1", p.l1}, {"l2", p.l2}, {"g", p.g}};
}

RobotParamsd robot_from_json(const json& j) {
  reject_unknown(j, {"m1", "m2", "l1", "l2", "g"}, "robot");
  RobotParamsd p;
  p.m1 = number(j, "m1", "robot");
  p.m2 = number(j, "m2", "robot");
  p.l1 = number(j, "l1", "robot");
  p.l2 = number(j, "l2", "robot");
  p.g = number(j, "g", "robot");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

json to_json(const TrajectorySpec& spec) {
  json joints = json::array();
  for (const auto& joint : spec.joints) {
    if (const auto* s = std::get_if<Sinusoid>(&joint)) {
      joints.push_back({{"kind", "sinusoid"},
                        {"amplitude", s->amplitude},
                        {"omega", s->omega},
                        {"phase", s->phase},
                        {"offset", s->offset}});
    } else {
      joints.push_back({{"kind", "setpoint"}, {"constant", std::get<SetPoint>(joint).value}});
    }
  }
  return {{"joints", std::move(joints)}, {"period", spec.period}};
}

TrajectorySpec trajectory_from_json(const json& j) {
  reject_unknown(j, {"joints", "period"}, "trajectory");
  const json& joints = member(j, "joints", "trajectory");
  if (!joints.is_array() || joints.size() != 2)
    fail("trajectory.joints", "expected an array of two joints");
  TrajectorySpec spec;
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string where = "trajectory.joints[" + std::to_string(i) + "]";
    const json& joint = joints[i];
    const json& kind = member(joint, "kind", where);
    if (kind == "sinusoid") {
      reject_unknown(joint, {"kind", "amplitude", "omega", "phase", "offset"}, where);
      Sinusoid s;
      s.amplitude = number(joint, "amplitude", where);
      s.omega = number(joint, "omega", where);
      s.phase = number_or(joint, "phase", where, 0.0);
      s.offset = number_or(joint, "offset", where, 0.0);
      spec.joints[i] = s;
    } else if (kind == "setpoint") {
      reject_unknown(joint, {"kind", "constant"}, where);
      spec.joints[i] = SetPoint{number(joint, "constant", where)};
    } else {
      fail(where + ".kind", "expected 'sinusoid' or 'setpoint'");
    }
  }
  spec.period = number(j, "period", "trajectory");
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

json to_json(const RbfNetwork& net) {
  return {{"sigma", net.sigma},
          {"centers", matrix_to_json(net.centers)},
          {"weights", matrix_to_json(net.weights)}};
}

RbfNetwork network_from_json(const json& j) {
  reject_unknown(j, {"sigma", "centers", "weights"}, "network");
  RbfNetwork net;
  net.sigma = number(j, "sigma", "network");
  net.centers = matrix_from_json(member(j, "centers", "network"), "network.centers");
  if (j.contains("weights"))
    net.weights = matrix_from_json(j["weights"], "network.weights");
  else
    net.weights = Eigen::MatrixXd::Zero(net.centers.rows(), 2);
  try {
    net.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return net;
}

json to_json(const GainSet& gains) {
  return {{"k1", vec2_to_json(gains.k1)},
          {"k2", vec2_to_json(gains.k2)},
          {"ki", vec2_to_json(gains.ki)},
          {"adapt",
           {{"gamma", gains.adapt.gamma}, {"delta0", gains.adapt.delta0}, {"w0", gains.adapt.w0}}}};
}

GainSet gains_from_json(const json& j) {
  reject_unknown(j, {"k1", "k2", "ki", "adapt"}, "gains");
  GainSet gains;
  gains.k1 = vec2(j, "k1", "gains");
  gains.k2 = vec2(j, "k2", "gains");
  gains.ki = vec2(j, "ki", "gains");
  if (j.contains("adapt")) {
    const json& a = j["adapt"];
    reject_unknown(a, {"gamma", "delta0", "w0"}, "gains.adapt");
    gains.adapt.gamma = number(a, "gamma", "gains.adapt");
    gains.adapt.delta0 = number_or(a, "delta0", "gains.adapt", 0.0);
    gains.adapt.w0 = number_or(a, "w0", "gains.adapt", 10.0);
  }
  try {
    gains.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return gains;
}

json to_json(const Scenario& sc) {
  json j;
  j["robot"] = to_json(sc.robot);
  j["trajectory"] = to_json(sc.trajectory);
  j["gains"] = to_json(sc.gains);
  j["controller"] = sc.controller;
  if (!sc.controllers.empty()) j["controllers"] = sc.controllers;
  json net;
  net["sigma"] = sc.network.sigma;
  if (sc.network.lattice) {
    json levels = json::array();
    for (const auto& l : sc.network.lattice->levels) levels.push_back(l);
    net["lattice"] = {{"levels", std::move(levels)}};
  }
  if (sc.network.kmeans) {
    const auto& k = *sc.network.kmeans;
    json kj = {{"nodes", k.nodes},
               {"max_iters", k.max_iters},
               {"tol", k.tol},
               {"init", k.init == KmeansInit::kNearZero ? "near_zero" : "random_data_point"},
               {"sample_dt", k.sample_dt}};
    if (k.seed) kj["seed"] = *k.seed;
    net["kmeans"] = std::move(kj);
  }
  if (sc.network.centers_file) net["centers_file"] = *sc.network.centers_file;
  j["network"] = std::move(net);
  j["duration"] = sc.duration;
  j["dt"] = sc.dt;
  j["seed"] = sc.seed;
  j["initial_state"] = {{"q", vec2_to_json(sc.initial_state.q)},
                        {"qdot", vec2_to_json(sc.initial_state.qdot)}};
  j["integrator"] = sc.integrator == IntegratorKind::kSemiImplicitEuler ? "euler" : "rk4";
  j["record_decimation"] = sc.record_decimation;
  if (sc.weight_snapshot_decimation) j["weight_snapshot_decimation"] = *sc.weight_snapshot_decimation;
  if (sc.window) j["window"] = json::array({sc.window->first, sc.window->second});
  json pe = {{"t0", sc.pe_t0}};
  if (sc.pe_T0) pe["T0"] = *sc.pe_T0;
  if (sc.pe_dt) pe["dt"] = *sc.pe_dt;
  j["pe"] = std::move(pe);
  return j;
}

Scenario scenario_from_json(const json& j) {
  reject_unknown(j,
                 {"robot", "trajectory", "gains", "controller", "controllers", "network",
                  "duration", "dt", "seed", "initial_state", "integrator", "record_decimation",
                  "weight_snapshot_decimation", "window", "pe"},
                 "scenario");
  Scenario sc;
  sc.robot = robot_from_json(member(j, "robot", "scenario"));
  sc.trajectory = trajectory_from_json(member(j, "trajectory", "scenario"));
  sc.gains = gains_from_json(member(j, "gains", "scenario"));
  if (j.contains("controller")) {
    if (!j["controller"].is_string()) fail("scenario.controller", "expected a string");
    sc.controller = j["controller"].get<std::string>();
  }
  if (j.contains("controllers")) {
    if (!j["controllers"].is_array()) fail("scenario.controllers", "expected an array");
    for (const auto& c : j["controllers"]) {
      if (!c.is_string()) fail("scenario.controllers", "entries must be strings");
      sc.controllers.push_back(c.get<std::string>());
    }
  }

  const json& net = member(j, "network", "scenario");
  reject_unknown(net, {"sigma", "lattice", "kmeans", "centers_file"}, "scenario.network");
  sc.network.sigma = number(net, "sigma", "scenario.network");
  if (net.contains("lattice")) {
    const json& lat = net["lattice"];
    reject_unknown(lat, {"levels"}, "scenario.network.lattice");
    const json& levels = member(lat, "levels", "scenario.network.lattice");
    if (!levels.is_array() || levels.empty())
      fail("scenario.network.lattice.levels", "expected a nonempty array of arrays");
    LatticeSpec spec;
    for (const auto& dim : levels) {
      if (!dim.is_array() || dim.empty())
        fail("scenario.network.lattice.levels", "each dimension needs at least one level");
      std::vector<double> vals;
      for (const auto& v : dim) {
        if (!v.is_number()) fail("scenario.network.lattice.levels", "levels must be numbers");
        vals.push_back(v.get<double>());
      }
      spec.levels.push_back(std::move(vals));
    }
    sc.network.lattice = std::move(spec);
  }
  if (net.contains("kmeans")) {
    const json& km = net["kmeans"];
    reject_unknown(km, {"nodes", "seed", "max_iters", "tol", "init", "sample_dt"},
                   "scenario.network.kmeans");
    KmeansNodeSpec spec;
    spec.nodes = static_cast<int>(number(km, "nodes", "scenario.network.kmeans"));
    if (km.contains("seed")) spec.seed = km["seed"].get<std::uint64_t>();
    spec.max_iters =
        static_cast<int>(number_or(km, "max_iters", "scenario.network.kmeans", 500.0));
    spec.tol = number_or(km, "tol", "scenario.network.kmeans", 1e-9);
    if (km.contains("init")) {
      const std::string init = km["init"].get<std::string>();
      if (init == "near_zero")
        spec.init = KmeansInit::kNearZero;
      else if (init == "random_data_point")
        spec.init = KmeansInit::kRandomDataPoint;
      else
        fail("scenario.network.kmeans.init", "expected 'near_zero' or 'random_data_point'");
    }
    spec.sample_dt = number_or(km, "sample_dt", "scenario.network.kmeans", 0.01);
    sc.network.kmeans = spec;
  }
  if (net.contains("centers_file")) {
    if (!net["centers_file"].is_string()) fail("scenario.network.centers_file", "expected a string");
    sc.network.centers_file = net["centers_file"].get<std::string>();
  }

  sc.duration = number(j, "duration", "scenario");
  sc.dt = number(j, "dt", "scenario");
  if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("initial_state")) {
    const json& st = j["initial_state"];
    reject_unknown(st, {"q", "qdot"}, "scenario.initial_state");
    sc.initial_state.q = vec2(st, "q", "scenario.initial_state");
    sc.initial_state.qdot = vec2(st, "qdot", "scenario.initial_state");
  }
  if (j.contains("integrator")) {
    const std::string integ = j["integrator"].get<std::string>();
    if (integ == "euler")
      sc.integrator = IntegratorKind::kSemiImplicitEuler;
    else if (integ == "rk4")
      sc.integrator = IntegratorKind::kRk4;
    else
      fail("scenario.integrator", "expected 'euler' or 'rk4'");
  }
  if (j.contains("record_decimation"))
    sc.record_decimation = static_cast<int>(number(j, "record_decimation", "scenario"));
  if (j.contains("weight_snapshot_decimation"))
    sc.weight_snapshot_decimation =
        static_cast<int>(number(j, "weight_snapshot_decimation", "scenario"));
  if (j.contains("window")) {
    const json& w = j["window"];
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
      fail("scenario.window", "expected [begin, end]");
    sc.window = {w[0].get<double>(), w[1].get<double>()};
  }
  if (j.contains("pe")) {
    const json& pe = j["pe"];
    reject_unknown(pe, {"t0", "T0", "dt"}, "scenario.pe");
    sc.pe_t0 = number_or(pe, "t0", "scenario.pe", 0.0);
    if (pe.contains("T0")) sc.pe_T0 = number(pe, "T0", "scenario.pe");
    if (pe.contains("dt")) sc.pe_dt = number(pe, "dt", "scenario.pe");
  }
  sc.validate();
  return sc;
}

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                      e.what());
  }
}

}  // namespace

Scenario load_scenario(const std::string& path) { return scenario_from_json(parse_file(path)); }

RbfNetwork load_network(const std::string& path) { return network_from_json(parse_file(path)); }

void save_network(const RbfNetwork& net, const std::string& path) {
  write_text_file(path, to_json(net).dump(2) + "\n");
}

void write_timeseries_csv(const RunResult& r, const std::string& path) {
  std::string out;
  out.reserve(r.samples() * 220 + 128);
  out += "t,q1,q2,qd1,qd2,e11,e12,e21,e22,tau1,tau2,nn1,nn2,ff1,ff2,wnorm1,wnorm2\n";
  const bool rbf = !r.wnorm.empty();
  char buf[64];
  const auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g%c", v, sep);
    out += buf;
  };
  for (std::size_t k = 0; k < r.samples(); ++k) {
    put(r.t[k], ',');
    put(r.q[k][0], ',');
    put(r.q[k][1], ',');
    put(r.qd[k][0], ',');
    put(r.qd[k][1], ',');
    put(r.e1[k][0], ',');
    put(r.e1[k][1], ',');
    put(r.e2[k][0], ',');
    put(r.e2[k][1], ',');
    put(r.tau[k][0], ',');
    put(r.tau[k][1], ',');
    put(r.nn[k][0], ',');
    put(r.nn[k][1], ',');
    put(r.ff[k][0], ',');
    put(r.ff[k][1], ',');
    put(rbf ? r.wnorm[k][0] : 0.0, ',');
    put(rbf ? r.wnorm[k][1] : 0.0, '\n');
  }
  write_text_file(path, out);
}

json snapshots_to_json(const RunResult& r) {
  json j;
  j["controller"] = r.label;
  j["t"] = r.snapshot_t;
  json snaps = json::array();
  for (const auto& w : r.snapshots) snaps.push_back(matrix_to_json(w));
  j["weights"] = std::move(snaps);
  return j;
}

json summary_to_json(const RunResult& r, const std::vector<Window>& windows) {
  json j;
  j["controller"] = r.label;
  j["dt"] = r.dt;
  j["samples"] = r.samples();
  json all = json::array();
  for (const auto& w : windows) {
    json one;
    one["window"] = json::array({w.t_begin, w.t_end});
    const Vector2d te = mate(r, w);
    const Vector2d ae = maae(r, w);
    one["mate"] = vec2_to_json(te);
    one["maae"] = vec2_to_json(ae);
    if (r.has_network()) {
      one["direct_approx_error"] = vec2_to_json(direct_approx_error(r, w));
      one["weight_convergence"] = vec2_to_json(weight_convergence(r, w));
    }
    all.push_back(std::move(one));
  }
  if (!all.empty()) {
    j["window"] = all[0]["window"];
    j["mate"] = all[0]["mate"];
    j["maae"] = all[0]["maae"];
    if (all[0].contains("direct_approx_error")) {
      j["direct_approx_error"] = all[0]["direct_approx_error"];
      j["weight_convergence"] = all[0]["weight_convergence"];
    }
  }
  j["windows"] = std::move(all);
  return j;
}

json to_json(const SummaryTable& table) {
  json j;
  j["window"] = json::array({table.window.t_begin, table.window.t_end});
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r;
    r["controller"] = row.label;
    if (row.failed) {
      r["failed"] = true;
      r["error"] = row.error;
    } else {
      r["maae"] = vec2_to_json(row.maae);
      r["mate"] = vec2_to_json(row.mate);
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

json to_json(const ExcitationReport& report) {
  json j;
  j["alpha1"] = report.alpha1;
  j["alpha2"] = report.alpha2;
  j["t0"] = report.t0;
  j["T0"] = report.T0;
  j["dt"] = report.dt;
  j["nodes"] = report.gramian.rows();
  if (report.separation)
    j["separation"] = *report.separation;
  else
    j["separation"] = nullptr;
  j["fill"] = report.fill;
  j["threshold"] = report.threshold;
  j["persistent"] = report.persistent;
  return j;
}

void write_gramian_csv(const Eigen::MatrixXd& gramian, const std::string& path) {
  std::string out;
  out.reserve(static_cast<std::size_t>(gramian.size()) * 26);
  char buf[64];
  for (Eigen::Index i = 0; i < gramian.rows(); ++i) {
    for (Eigen::Index c = 0; c < gramian.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g%c", gramian(i, c),
                    c + 1 == gramian.cols() ? '\n' : ',');
      out += buf;
    }
  }
  write_text_file(path, out);
}

}  // namespace arbf
