#pragma once

#include <cstdint>
#include <vector>

#include "arbf/types.hpp"

// Lloyd-style K-means over sampled trajectory inputs.  Deterministic given
// (data, config): seeded RNG, index-ordered ties, farthest-point repair for
// empty clusters.

namespace arbf {

enum class KmeansInit {
  kNearZero,         // centers drawn uniformly from [-0.01, 0.01]^p
  kRandomDataPoint,  // centers drawn from distinct data points
};

struct KmeansConfig {
  int clusters{20};
  std::uint64_t seed{1};
  int max_iters{500};
  double tol{1e-9};  // convergence threshold on the max center displacement
  KmeansInit init{KmeansInit::kNearZero};
};

struct KmeansResult {
  Eigen::MatrixXd centers;               // m x p
  std::vector<int> assignments;          // per-sample cluster index
  double objective{0.0};                 // final J
  int iterations{0};
  std::vector<double> objective_history; // J after each Lloyd iteration
};

// Throws std::invalid_argument when N < m, on non-finite data, or on a bad
// config.  Every returned cluster is nonempty and each center is the mean of
// its assigned samples.
KmeansResult kmeans(const Eigen::MatrixXd& data, const KmeansConfig& config);

// J = sum over samples of the squared distance to the nearest center.
double kmeans_objective(const Eigen::Ref<const Eigen::MatrixXd>& centers,
                        const Eigen::Ref<const Eigen::MatrixXd>& data);

}  // namespace arbf
