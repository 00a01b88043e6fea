#include "arbf/rbf_network.hpp"

#include <cmath>
#include <stdexcept>

namespace arbf {

void RbfNetwork::validate() const {
  if (centers.rows() < 1) throw std::invalid_argument("network: at least one center required");
  if (!(sigma > 0.0)) throw std::invalid_argument("network.sigma must be > 0");
  if (!centers.allFinite()) throw std::invalid_argument("network.centers must be finite");
  if (weights.size() > 0) {
    if (weights.rows() != centers.rows())
      throw std::invalid_argument("network.weights row count must match the centers");
    if (!weights.allFinite()) throw std::invalid_argument("network.weights must be finite");
  }
  if (centers.rows() >= 2 && !(separation_distance(centers) > 0.0))
    throw std::invalid_argument("network: duplicate centers");
}

Eigen::VectorXd activations(const RbfNetwork& net, const Eigen::Ref<const Eigen::VectorXd>& z) {
  const Eigen::VectorXd sq = (net.centers.rowwise() - z.transpose()).rowwise().squaredNorm();
  return (-sq / (net.sigma * net.sigma)).array().exp();
}

Vector2d output(const RbfNetwork& net, const Eigen::Ref<const Eigen::VectorXd>& z) {
  return net.weights.transpose() * activations(net, z);
}

Eigen::MatrixXd lattice_centers(const std::vector<std::vector<double>>& levels_per_dim) {
  if (levels_per_dim.empty()) throw std::invalid_argument("lattice: no dimensions given");
  Eigen::Index count = 1;
  for (const auto& levels : levels_per_dim) {
    if (levels.empty()) throw std::invalid_argument("lattice: a dimension has no levels");
    count *= static_cast<Eigen::Index>(levels.size());
  }
  const auto p = static_cast<Eigen::Index>(levels_per_dim.size());
  Eigen::MatrixXd centers(count, p);
  for (Eigen::Index row = 0; row < count; ++row) {
    Eigen::Index rem = row;
    for (Eigen::Index d = p - 1; d >= 0; --d) {
      const auto& levels = levels_per_dim[static_cast<std::size_t>(d)];
      const auto n = static_cast<Eigen::Index>(levels.size());
      centers(row, d) = levels[static_cast<std::size_t>(rem % n)];
      rem /= n;
    }
  }
  return centers;
}

Eigen::MatrixXd adapt_step(const RbfNetwork& net, const AdaptConfig& cfg,
                           const Eigen::Ref<const Eigen::VectorXd>& s, const Vector2d& e2,
                           double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("adapt_step: dt must be > 0");
  Eigen::MatrixXd w = net.weights;
  for (Eigen::Index i = 0; i < w.cols(); ++i) {
    // The boundary ||W_i|| == w0 engages the leakage.
    const double delta = (w.col(i).norm() < cfg.w0) ? 0.0 : cfg.delta0;
    for (Eigen::Index j = 0; j < w.rows(); ++j) {
      const double grad = s[j] * e2[static_cast<int>(i)] - delta * w(j, i);
      w(j, i) += (cfg.gamma * grad) * dt;
    }
  }
  return w;
}

double separation_distance(const Eigen::Ref<const Eigen::MatrixXd>& centers) {
  if (centers.rows() < 2)
    throw std::invalid_argument("separation_distance: needs at least two centers");
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < centers.rows(); ++j)
    for (Eigen::Index k = j + 1; k < centers.rows(); ++k)
      best = std::min(best, (centers.row(j) - centers.row(k)).norm());
  return best;
}

double fill_distance(const Eigen::Ref<const Eigen::MatrixXd>& centers,
                     const Eigen::Ref<const Eigen::MatrixXd>& samples) {
  if (centers.rows() < 1 || samples.rows() < 1)
    throw std::invalid_argument("fill_distance: centers and samples must be nonempty");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    const double nearest =
        (centers.rowwise() - samples.row(i)).rowwise().squaredNorm().minCoeff();
    worst = std::max(worst, nearest);
  }
  return std::sqrt(worst);
}

}  // namespace arbf
