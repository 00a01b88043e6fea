#include "arbf/excitation.hpp"

#include <cmath>
#include <stdexcept>

namespace arbf {

Eigen::MatrixXd excitation_gramian(const RbfNetwork& net, const TrajectorySpec& spec, double t0,
                                   double T0, double dt) {
  if (!(T0 > 0.0)) throw std::invalid_argument("excitation_gramian: T0 must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("excitation_gramian: dt must be > 0");
  if (dt >= T0) throw std::invalid_argument("excitation_gramian: dt must be smaller than T0");
  // Snap to an integer subdivision so the window endpoint is hit exactly.
  const auto n = static_cast<long>(std::llround(T0 / dt));
  const double h = T0 / static_cast<double>(std::max(1L, n));
  const Eigen::Index m = net.node_count();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
  for (long k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? h / 2.0 : h;
    const Eigen::VectorXd s = activations(net, sample(spec, t0 + h * static_cast<double>(k)).as_input());
    g.selfadjointView<Eigen::Lower>().rankUpdate(s, w);
  }
  Eigen::MatrixXd sym = g.selfadjointView<Eigen::Lower>();
  return sym;
}

Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("jacobi_eigenvalues: matrix must be square");
  const Eigen::Index n = a.rows();
  double asym = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
  if (asym > 1e-9) throw std::invalid_argument("jacobi_eigenvalues: matrix is not symmetric");

  if (n == 1) return a.diagonal();

  const double scale = a.norm();
  const double target = 1e-11 * std::max(1.0, scale);
  const auto off_norm = [&a, n]() {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  const int max_sweeps = 64;
  int sweep = 0;
  for (; sweep < max_sweeps && off_norm() > target; ++sweep) {
    // Rotations below this size cannot move the off-norm meaningfully this sweep.
    const double skip = target / (static_cast<double>(n) * static_cast<double>(n));
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= skip) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = arp - s * (arq + tau * arp);
          a(p, r) = a(r, p);
          a(r, q) = arq + s * (arp - tau * arq);
          a(q, r) = a(r, q);
        }
      }
    }
  }
  if (sweep == max_sweeps && off_norm() > target)
    throw std::runtime_error("jacobi_eigenvalues: no convergence");

  Eigen::VectorXd eig = a.diagonal();
  std::sort(eig.data(), eig.data() + n);
  return eig;
}

std::pair<double, double> pe_levels(const Eigen::Ref<const Eigen::MatrixXd>& gramian) {
  const Eigen::VectorXd eig = jacobi_eigenvalues(gramian);
  return {eig[eig.size() - 1], eig[0]};
}

ExcitationReport analyze_excitation(const RbfNetwork& net, const TrajectorySpec& spec, double t0,
                                    double T0, double dt) {
  ExcitationReport report;
  report.gramian = excitation_gramian(net, spec, t0, T0, dt);
  std::tie(report.alpha1, report.alpha2) = pe_levels(report.gramian);
  report.t0 = t0;
  report.T0 = T0;
  const auto n = std::max(1L, static_cast<long>(std::llround(T0 / dt)));
  report.dt = T0 / static_cast<double>(n);
  if (net.node_count() >= 2) report.separation = separation_distance(net.centers);
  report.fill = fill_distance(net.centers, input_samples(spec, t0, t0 + T0, report.dt));
  report.threshold = 1e-8 * T0;
  report.persistent = report.alpha2 > report.threshold;
  return report;
}

DistributionComparison compare_distributions(const RbfNetwork& net_a, const RbfNetwork& net_b,
                                             const TrajectorySpec& spec, double T0, double dt) {
  DistributionComparison cmp;
  cmp.a = analyze_excitation(net_a, spec, 0.0, T0, dt);
  cmp.b = analyze_excitation(net_b, spec, 0.0, T0, dt);
  cmp.alpha2_ratio = cmp.a.alpha2 / cmp.b.alpha2;
  return cmp;
}

}  // namespace arbf
