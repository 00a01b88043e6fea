#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "arbf/clustering.hpp"
#include "arbf/rbf_network.hpp"
#include "arbf/trajectory.hpp"
#include "test_util.hpp"

using namespace arbf;

TEST_CASE("a single cluster is the sample mean") {
  std::mt19937_64 rng(21);
  const Eigen::MatrixXd data = test::random_matrix(rng, 40, 3, -2.0, 5.0);
  KmeansConfig cfg;
  cfg.clusters = 1;
  const KmeansResult result = kmeans(data, cfg);

  const Eigen::RowVectorXd mean = data.colwise().mean();
  CHECK((result.centers.row(0) - mean).norm() <= 1e-12);

  double variance_sum = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    variance_sum += (data.row(i) - mean).squaredNorm();
  CHECK(result.objective == doctest::Approx(variance_sum).epsilon(1e-12));
  for (int a : result.assignments) CHECK(a == 0);
}

TEST_CASE("two separated clouds are recovered") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  Eigen::MatrixXd data(60, 4);
  Eigen::RowVector4d lo{-10.0, 0.0, 0.0, 0.0};
  Eigen::RowVector4d hi{10.0, 0.0, 0.0, 0.0};
  Eigen::RowVector4d mean_lo = Eigen::RowVector4d::Zero();
  Eigen::RowVector4d mean_hi = Eigen::RowVector4d::Zero();
  for (Eigen::Index i = 0; i < 60; ++i) {
    Eigen::RowVector4d noise{jitter(rng), jitter(rng), jitter(rng), jitter(rng)};
    data.row(i) = (i % 2 == 0 ? lo : hi) + noise;
    (i % 2 == 0 ? mean_lo : mean_hi) += data.row(i) / 30.0;
  }

  KmeansConfig cfg;
  cfg.clusters = 2;
  const KmeansResult result = kmeans(data, cfg);

  // The best assignment is the cloud split itself; its centers are the cloud
  // means, compared up to the label swap.
  const bool first_is_lo = result.centers(0, 0) < 0.0;
  const Eigen::RowVector4d c_lo = result.centers.row(first_is_lo ? 0 : 1);
  const Eigen::RowVector4d c_hi = result.centers.row(first_is_lo ? 1 : 0);
  CHECK((c_lo - mean_lo).norm() <= 1e-9);
  CHECK((c_hi - mean_hi).norm() <= 1e-9);
  CHECK((c_lo - lo).norm() <= 0.2);
  CHECK((c_hi - hi).norm() <= 0.2);
}

TEST_CASE("clusters distribute along a periodic curve") {
  // 1000 samples of (sin t, cos t, -sin t) over one period.
  const int n = 1000;
  Eigen::MatrixXd data(n, 3);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * i / n;
    data.row(i) << std::sin(t), std::cos(t), -std::sin(t);
  }

  KmeansConfig cfg;
  cfg.clusters = 20;
  cfg.seed = 3;
  const KmeansResult result = kmeans(data, cfg);

  // Every center within 0.15 of the sampled curve.
  for (Eigen::Index j = 0; j < 20; ++j) {
    const double nearest =
        (data.rowwise() - result.centers.row(j)).rowwise().norm().minCoeff();
    CHECK(nearest < 0.15);
  }

  // Quadrature arc length of the curve; expected adjacent spacing is L/20.
  double arc = 0.0;
  const int quad = 200000;
  for (int i = 0; i < quad; ++i) {
    const double t = 2.0 * std::numbers::pi * (i + 0.5) / quad;
    arc += std::sqrt(1.0 + std::cos(t) * std::cos(t)) * (2.0 * std::numbers::pi / quad);
  }
  const double expected = arc / 20.0;
  CHECK(expected == doctest::Approx(0.382).epsilon(0.01));

  // Order the centers along the curve by their nearest sample.
  std::vector<std::pair<int, Eigen::Index>> order;
  for (Eigen::Index j = 0; j < 20; ++j) {
    Eigen::Index best = 0;
    (data.rowwise() - result.centers.row(j)).rowwise().squaredNorm().minCoeff(&best);
    order.emplace_back(static_cast<int>(best), j);
  }
  std::sort(order.begin(), order.end());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Eigen::Index a = order[k].second;
    const Eigen::Index b = order[(k + 1) % order.size()].second;
    const double spacing = (result.centers.row(a) - result.centers.row(b)).norm();
    CHECK(spacing > 0.5 * expected);
    CHECK(spacing < 1.5 * expected);
  }
}

TEST_CASE("objective function") {
  std::mt19937_64 rng(23);
  const Eigen::MatrixXd data = test::random_matrix(rng, 50, 4, -3.0, 3.0);
  CHECK(kmeans_objective(data, data) == 0.0);

  Eigen::MatrixXd line(2, 1);
  line << 0.0, 2.0;
  Eigen::MatrixXd center(1, 1);
  center << 1.0;
  CHECK(kmeans_objective(center, line) == doctest::Approx(2.0).epsilon(1e-15));

  // Naive double-loop oracle.
  const Eigen::MatrixXd centers = test::random_matrix(rng, 7, 4, -3.0, 3.0);
  double naive = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < centers.rows(); ++j)
      best = std::min(best, (data.row(i) - centers.row(j)).squaredNorm());
    naive += best;
  }
  CHECK(kmeans_objective(centers, data) == doctest::Approx(naive).epsilon(1e-13));
}

TEST_CASE("objective history is monotonically non-increasing") {
  std::mt19937_64 rng(24);
  for (auto init : {KmeansInit::kNearZero, KmeansInit::kRandomDataPoint}) {
    const Eigen::MatrixXd data = test::random_matrix(rng, 300, 5, -4.0, 4.0);
    KmeansConfig cfg;
    cfg.clusters = 12;
    cfg.seed = 77;
    cfg.init = init;
    const KmeansResult result = kmeans(data, cfg);
    REQUIRE(!result.objective_history.empty());
    for (std::size_t i = 1; i < result.objective_history.size(); ++i)
      CHECK(result.objective_history[i] <=
            result.objective_history[i - 1] * (1.0 + 1e-12) + 1e-12);
    // Every cluster ends nonempty.
    std::vector<int> counts(12, 0);
    for (int a : result.assignments) ++counts[static_cast<std::size_t>(a)];
    for (int c : counts) CHECK(c > 0);
  }
}

TEST_CASE("deterministic given data and seed") {
  const TrajectorySpec spec = TrajectorySpec::sinusoid_default();
  const Eigen::MatrixXd data = input_samples(spec, 0.0, spec.period, 0.01);
  KmeansConfig cfg;
  cfg.clusters = 20;
  cfg.seed = 99;
  const KmeansResult a = kmeans(data, cfg);
  const KmeansResult b = kmeans(data, cfg);
  CHECK(a.centers == b.centers);  // bit-for-bit
  CHECK(a.assignments == b.assignments);
  CHECK(a.objective == b.objective);
}

TEST_CASE("clustered nodes stay close to the trajectory samples") {
  const TrajectorySpec spec = TrajectorySpec::sinusoid_default();
  const Eigen::MatrixXd data = input_samples(spec, 0.0, spec.period, 0.01);
  KmeansConfig cfg;
  cfg.clusters = 20;
  cfg.seed = 1;
  const KmeansResult result = kmeans(data, cfg);
  CHECK(fill_distance(result.centers, data) <= 0.5);
  CHECK(separation_distance(result.centers) > 0.0);
}

TEST_CASE("input validation") {
  std::mt19937_64 rng(25);
  const Eigen::MatrixXd data = test::random_matrix(rng, 5, 2, -1.0, 1.0);
  KmeansConfig cfg;
  cfg.clusters = 6;
  CHECK_THROWS_AS(kmeans(data, cfg), std::invalid_argument);  // N < m
  cfg.clusters = 0;
  CHECK_THROWS_AS(kmeans(data, cfg), std::invalid_argument);
  cfg.clusters = 2;
  cfg.tol = 0.0;
  CHECK_THROWS_AS(kmeans(data, cfg), std::invalid_argument);
}
