#pragma once

#include <string>
#include <vector>

#include "arbf/simulator.hpp"
#include "arbf/types.hpp"

// Performance indices over a stable window of a recorded run.

namespace arbf {

struct Window {
  double t_begin{0.0};
  double t_end{0.0};
};

// Maximum absolute tracking error per joint: max |e1_i(t)| over the window.
Vector2d mate(const RunResult& result, const Window& window);

// Approximation-error proxy per joint: max |K2_i e2_i(t)| over the window.
Vector2d maae(const RunResult& result, const Window& window, const Vector2d& k2);
Vector2d maae(const RunResult& result, const Window& window);  // uses the run's K2

// max |nn_i(t) - ff_i(t)| over the window; requires an RBF run.
Vector2d direct_approx_error(const RunResult& result, const Window& window);

// max per-step weight change norm per joint over the window; requires an RBF run.
Vector2d weight_convergence(const RunResult& result, const Window& window);

struct SummaryRow {
  std::string label;
  Vector2d maae{Vector2d::Zero()};
  Vector2d mate{Vector2d::Zero()};
  bool failed{false};
  std::string error;
};

struct SummaryTable {
  Window window;
  std::vector<SummaryRow> rows;

  std::string to_text() const;
};

// One row per outcome, ordered as given; failed runs are marked, not dropped.
// Throws if the window misses the recorded series of a successful run.
SummaryTable summary_table(const std::vector<RunOutcome>& outcomes, const Window& window);

}  // namespace arbf
