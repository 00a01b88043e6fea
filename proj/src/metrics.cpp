#include "arbf/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "arbf/serialization.hpp"

namespace arbf {

namespace {

// Recorded indices with t in [t_begin, t_end] (small tolerance on the edges).
std::pair<std::size_t, std::size_t> window_range(const RunResult& result, const Window& window) {
  if (!(window.t_begin < window.t_end))
    throw std::invalid_argument("metrics: window must satisfy begin < end");
  const double eps = 1e-9 * std::max(1.0, std::abs(window.t_end));
  std::size_t lo = result.t.size();
  std::size_t hi = 0;
  for (std::size_t k = 0; k < result.t.size(); ++k) {
    if (result.t[k] >= window.t_begin - eps && result.t[k] <= window.t_end + eps) {
      lo = std::min(lo, k);
      hi = std::max(hi, k + 1);
    }
  }
  if (lo >= hi) throw std::invalid_argument("metrics: window contains no recorded samples");
  return {lo, hi};
}

Vector2d max_abs(const std::vector<Vector2d>& series, std::size_t lo, std::size_t hi) {
  Vector2d m = Vector2d::Zero();
  for (std::size_t k = lo; k < hi; ++k) m = m.cwiseMax(series[k].cwiseAbs());
  return m;
}

}  // namespace

Vector2d mate(const RunResult& result, const Window& window) {
  const auto [lo, hi] = window_range(result, window);
  return max_abs(result.e1, lo, hi);
}

Vector2d maae(const RunResult& result, const Window& window, const Vector2d& k2) {
  const auto [lo, hi] = window_range(result, window);
  Vector2d m = Vector2d::Zero();
  for (std::size_t k = lo; k < hi; ++k) m = m.cwiseMax(k2.cwiseProduct(result.e2[k]).cwiseAbs());
  return m;
}

Vector2d maae(const RunResult& result, const Window& window) {
  return maae(result, window, result.gains.k2);
}

Vector2d direct_approx_error(const RunResult& result, const Window& window) {
  if (!result.has_network())
    throw std::invalid_argument("direct_approx_error: not an RBF run");
  const auto [lo, hi] = window_range(result, window);
  Vector2d m = Vector2d::Zero();
  for (std::size_t k = lo; k < hi; ++k) m = m.cwiseMax((result.nn[k] - result.ff[k]).cwiseAbs());
  return m;
}

Vector2d weight_convergence(const RunResult& result, const Window& window) {
  if (result.dwnorm.empty())
    throw std::invalid_argument("weight_convergence: no weight series recorded");
  const auto [lo, hi] = window_range(result, window);
  return max_abs(result.dwnorm, lo, hi);
}

SummaryTable summary_table(const std::vector<RunOutcome>& outcomes, const Window& window) {
  SummaryTable table;
  table.window = window;
  for (const auto& outcome : outcomes) {
    SummaryRow row;
    row.label = outcome.label;
    if (outcome.ok()) {
      row.maae = maae(*outcome.result, window);
      row.mate = mate(*outcome.result, window);
    } else {
      row.failed = true;
      row.error = outcome.error;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string SummaryTable::to_text() const {
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof(buf), "window: [%s, %s] s\n", format_double(window.t_begin).c_str(),
                format_double(window.t_end).c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-18s%-26s%-26s%-26s%-26s\n", "controller", "MAAE1", "MATE1",
                "MAAE2", "MATE2");
  out += buf;
  for (const auto& row : rows) {
    if (row.failed) {
      std::snprintf(buf, sizeof(buf), "%-18sFAILED: %s\n", row.label.c_str(), row.error.c_str());
    } else {
      std::snprintf(buf, sizeof(buf), "%-18s%-26s%-26s%-26s%-26s\n", row.label.c_str(),
                    format_double(row.maae[0]).c_str(), format_double(row.mate[0]).c_str(),
                    format_double(row.maae[1]).c_str(), format_double(row.mate[1]).c_str());
    }
    out += buf;
  }
  return out;
}

}  // namespace arbf
