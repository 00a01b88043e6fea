#pragma once

#include <optional>

#include "arbf/rbf_network.hpp"
#include "arbf/trajectory.hpp"
#include "arbf/types.hpp"

// Excitation Gramian int_{t0}^{t0+T0} S(Z_d(tau)) S(Z_d(tau))^T dtau and the
// excitation levels alpha1/alpha2 (largest/smallest Gramian eigenvalues) used
// to compare hidden-node distributions.

namespace arbf {

struct ExcitationReport {
  Eigen::MatrixXd gramian;            // symmetric m x m
  double alpha1{0.0};                 // largest eigenvalue
  double alpha2{0.0};                 // smallest eigenvalue
  double t0{0.0};
  double T0{0.0};                     // window length [s]
  double dt{0.0};                     // quadrature step actually used [s]
  std::optional<double> separation;   // node separation distance (m >= 2)
  double fill{0.0};                   // fill distance vs the window's samples
  double threshold{0.0};              // alpha2 cutoff for the verdict
  bool persistent{false};             // alpha2 > threshold
};

// Trapezoidal quadrature of S S^T over [t0, t0+T0]; the step is snapped to an
// integer subdivision of T0 and the result is exactly symmetric.  Throws on
// non-positive T0/dt or dt >= T0.
Eigen::MatrixXd excitation_gramian(const RbfNetwork& net, const TrajectorySpec& spec, double t0,
                                   double T0, double dt);

// All eigenvalues of a symmetric matrix, ascending, via cyclic Jacobi
// rotations (off-diagonal norm driven below 1e-11 relative to the matrix
// scale).  Throws std::invalid_argument if the input is not symmetric to 1e-9.
Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a);

// (alpha1, alpha2) = extreme eigenvalues of the Gramian.
std::pair<double, double> pe_levels(const Eigen::Ref<const Eigen::MatrixXd>& gramian);

// Gramian + levels + node-distribution distances for one window; the PE
// verdict uses the threshold 1e-8 * T0.
ExcitationReport analyze_excitation(const RbfNetwork& net, const TrajectorySpec& spec, double t0,
                                    double T0, double dt);

struct DistributionComparison {
  ExcitationReport a;
  ExcitationReport b;
  double alpha2_ratio{0.0};  // alpha2(a) / alpha2(b)
};

DistributionComparison compare_distributions(const RbfNetwork& net_a, const RbfNetwork& net_b,
                                             const TrajectorySpec& spec, double T0, double dt);

}  // namespace arbf
