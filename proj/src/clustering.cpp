#include "arbf/clustering.hpp"

#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace arbf {

namespace {

// Nearest center per sample, ties to the lowest index.
void assign_nearest(const Eigen::MatrixXd& data, const Eigen::MatrixXd& centers,
                    std::vector<int>& assignments) {
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    int best = 0;
    double best_d = (data.row(i) - centers.row(0)).squaredNorm();
    for (Eigen::Index j = 1; j < centers.rows(); ++j) {
      const double d = (data.row(i) - centers.row(j)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    assignments[static_cast<std::size_t>(i)] = best;
  }
}

std::vector<int> cluster_sizes(const std::vector<int>& assignments, int m) {
  std::vector<int> sizes(static_cast<std::size_t>(m), 0);
  for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];
  return sizes;
}

// Reseed each empty cluster at the sample farthest from its nearest center,
// reassigning in between so two repairs never grab the same sample.  A repair
// can steal the only sample of an initial center, so up to 2m rounds happen;
// a repaired cluster keeps its seed sample (distance zero) for the rest of
// the phase.
void repair_empty_clusters(const Eigen::MatrixXd& data, Eigen::MatrixXd& centers,
                           std::vector<int>& assignments) {
  const int m = static_cast<int>(centers.rows());
  for (int round = 0; round < 2 * m + 2; ++round) {
    const auto sizes = cluster_sizes(assignments, m);
    int empty = -1;
    for (int j = 0; j < m; ++j)
      if (sizes[static_cast<std::size_t>(j)] == 0) {
        empty = j;
        break;
      }
    if (empty < 0) return;
    Eigen::Index farthest = 0;
    double farthest_d = -1.0;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      const double d = (centers.rowwise() - data.row(i)).rowwise().squaredNorm().minCoeff();
      if (d > farthest_d) {
        farthest_d = d;
        farthest = i;
      }
    }
    if (!(farthest_d > 0.0))
      throw std::invalid_argument("kmeans: fewer distinct samples than clusters");
    centers.row(empty) = data.row(farthest);
    assign_nearest(data, centers, assignments);
  }
  throw std::logic_error("kmeans: empty-cluster repair did not converge");
}

}  // namespace

double kmeans_objective(const Eigen::Ref<const Eigen::MatrixXd>& centers,
                        const Eigen::Ref<const Eigen::MatrixXd>& data) {
  if (centers.rows() < 1 || data.rows() < 1)
    throw std::invalid_argument("kmeans_objective: empty input");
  double j = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    j += (centers.rowwise() - data.row(i)).rowwise().squaredNorm().minCoeff();
  return j;
}

KmeansResult kmeans(const Eigen::MatrixXd& data, const KmeansConfig& config) {
  if (config.clusters < 1) throw std::invalid_argument("kmeans: clusters must be >= 1");
  if (config.max_iters < 1) throw std::invalid_argument("kmeans: max_iters must be >= 1");
  if (!(config.tol > 0.0)) throw std::invalid_argument("kmeans: tol must be > 0");
  if (!data.allFinite()) throw std::invalid_argument("kmeans: data must be finite");
  const Eigen::Index n = data.rows();
  const Eigen::Index p = data.cols();
  const int m = config.clusters;
  if (n < m) throw std::invalid_argument("kmeans: insufficient data (need at least one sample per cluster)");

  std::mt19937_64 rng(config.seed);
  Eigen::MatrixXd centers(m, p);
  if (config.init == KmeansInit::kNearZero) {
    std::uniform_real_distribution<double> u(-0.01, 0.01);
    for (Eigen::Index j = 0; j < centers.rows(); ++j)
      for (Eigen::Index d = 0; d < p; ++d) centers(j, d) = u(rng);
  } else {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    for (int j = 0; j < m; ++j) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(j),
                                                      idx.size() - 1);
      std::swap(idx[static_cast<std::size_t>(j)], idx[pick(rng)]);
      centers.row(j) = data.row(idx[static_cast<std::size_t>(j)]);
    }
  }

  KmeansResult result;
  std::vector<int> assignments(static_cast<std::size_t>(n), 0);
  double prev_j = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < config.max_iters; ++iter) {
    assign_nearest(data, centers, assignments);
    repair_empty_clusters(data, centers, assignments);

    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(m, p);
    const auto sizes = cluster_sizes(assignments, m);
    for (Eigen::Index i = 0; i < n; ++i)
      next.row(assignments[static_cast<std::size_t>(i)]) += data.row(i);
    for (int j = 0; j < m; ++j) next.row(j) /= static_cast<double>(sizes[static_cast<std::size_t>(j)]);

    const double shift = (next - centers).rowwise().norm().maxCoeff();
    centers = next;

    const double j_now = kmeans_objective(centers, data);
    if (j_now > prev_j + 1e-9 * std::max(1.0, prev_j))
      throw std::logic_error("kmeans: objective increased across an iteration");
    result.objective_history.push_back(j_now);
    prev_j = j_now;

    if (shift < config.tol) {
      ++iter;
      break;
    }
  }

  result.centers = std::move(centers);
  result.assignments = std::move(assignments);
  result.objective = prev_j;
  result.iterations = iter;
  return result;
}

}  // namespace arbf
