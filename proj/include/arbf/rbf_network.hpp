#pragma once

#include <vector>

#include "arbf/types.hpp"

// Gaussian RBF network with fixed centers and a shared width.  The weights
// are the only learned quantity; adapt_step is the explicit-Euler
// discretization of the gradient law with a switching delta-modification.

namespace arbf {

struct RbfNetwork {
  Eigen::MatrixXd centers;  // m x p node positions
  double sigma{1.0};        // shared Gaussian width
  Eigen::MatrixXd weights;  // m x n, one column per joint

  Eigen::Index node_count() const { return centers.rows(); }
  Eigen::Index input_dim() const { return centers.cols(); }

  // Throws std::invalid_argument on empty centers, non-positive sigma,
  // duplicate centers, or a weight matrix that does not match the centers.
  void validate() const;
};

struct AdaptConfig {
  double gamma{6.0};    // learning rate
  double delta0{0.0};   // leakage coefficient once engaged
  double w0{10.0};      // per-joint weight-norm threshold for the leakage switch
};

// S_j(z) = exp(-||z - mu_j||^2 / sigma^2); every entry in (0, 1].
Eigen::VectorXd activations(const RbfNetwork& net, const Eigen::Ref<const Eigen::VectorXd>& z);

// W^T S(z).
Vector2d output(const RbfNetwork& net, const Eigen::Ref<const Eigen::VectorXd>& z);

// Cartesian product of per-dimension level lists, row-major (last dimension
// varies fastest).  Throws on an empty dimension list.
Eigen::MatrixXd lattice_centers(const std::vector<std::vector<double>>& levels_per_dim);

// One explicit-Euler update of the weights: per joint i,
//   delta_i = 0 if ||W_i|| < w0, else delta0
//   W_i    += gamma * (S e2_i - delta_i W_i) * dt
// Returns the new weight matrix; the network is not modified.
Eigen::MatrixXd adapt_step(const RbfNetwork& net, const AdaptConfig& cfg,
                           const Eigen::Ref<const Eigen::VectorXd>& s, const Vector2d& e2,
                           double dt);

// min_{j != k} ||mu_j - mu_k||; throws std::invalid_argument for m < 2.
double separation_distance(const Eigen::Ref<const Eigen::MatrixXd>& centers);

// max over samples of the distance to the nearest center; throws on empty input.
double fill_distance(const Eigen::Ref<const Eigen::MatrixXd>& centers,
                     const Eigen::Ref<const Eigen::MatrixXd>& samples);

}  // namespace arbf
