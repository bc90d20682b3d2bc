#include "hetsync/network.hpp"

#include "hetsync/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace hetsync {
namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kConnectivityTol = 1e-9;
constexpr double kDeltaTol = 1e-6;

void normalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

void validate_adjacency(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InvalidInput("adjacency must be square");
  if (a.rows() < 2) throw InvalidInput("network needs at least two nodes");
  if (!a.allFinite()) throw InvalidInput("adjacency has non-finite entries");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (a(i, i) != 0.0) throw InvalidInput("adjacency must have a zero diagonal");
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) < 0.0) throw InvalidInput("adjacency weights must be nonnegative");
      if (std::abs(a(i, j) - a(j, i)) > kSymmetryTol * scale) {
        std::ostringstream os;
        os << "adjacency is not symmetric at (" << i << ", " << j << ")";
        throw InvalidInput(os.str());
      }
    }
  }
}

}  // namespace

std::vector<std::vector<int>> Network::eigenvalue_clusters(double rel_tol) const {
  std::vector<std::vector<int>> clusters;
  if (gamma.size() == 0) return clusters;
  const double tol = rel_tol * gamma.cwiseAbs().maxCoeff();
  clusters.push_back({0});
  for (int i = 1; i < gamma.size(); ++i) {
    if (gamma(i) - gamma(clusters.back().back()) <= tol) {
      clusters.back().push_back(i);
    } else {
      clusters.push_back({i});
    }
  }
  return clusters;
}

Network build_network(const Eigen::MatrixXd& adjacency) {
  validate_adjacency(adjacency);
  const Eigen::Index n = adjacency.rows();

  Network net;
  // Symmetrize exactly so the eigensolver sees a self-adjoint matrix.
  net.adjacency = 0.5 * (adjacency + adjacency.transpose());
  net.laplacian = -net.adjacency;
  net.laplacian.diagonal() += net.adjacency.rowwise().sum();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(net.laplacian);
  if (solver.info() != Eigen::Success) throw NumericalError("Laplacian eigensolve failed");

  const Eigen::VectorXd& values = solver.eigenvalues();
  const double max_gamma = values.maxCoeff();
  if (!(max_gamma > 0.0) || values(1) < kConnectivityTol * max_gamma) {
    throw InvalidInput("network is disconnected (second Laplacian eigenvalue is zero)");
  }

  net.gamma = values.tail(n - 1);
  net.basis = solver.eigenvectors().rightCols(n - 1);

  // The solver returns the zero mode first; re-orthogonalize the transverse
  // columns against the exact uniform vector to remove O(eps) leakage.
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < net.basis.cols(); ++j) {
    net.basis.col(j) -= ones * ones.dot(net.basis.col(j));
    net.basis.col(j).normalize();
    normalize_sign(net.basis.col(j));
  }
  return net;
}

MismatchVector reproject(const Network& net, const MismatchVector& mism) {
  MismatchVector out = mism;
  out.projected = net.basis.transpose() * mism.delta.asDiagonal() * net.basis;
  out.projected = 0.5 * (out.projected + out.projected.transpose()).eval();
  return out;
}

MismatchVector project_mismatch(const Network& net, const Eigen::VectorXd& delta) {
  if (delta.size() != net.size()) {
    std::ostringstream os;
    os << "delta has length " << delta.size() << ", network has " << net.size() << " nodes";
    throw InvalidInput(os.str());
  }
  if (!delta.allFinite()) throw InvalidInput("delta has non-finite entries");

  MismatchVector mism;
  mism.delta = delta;
  const double sum = delta.sum();
  const double norm = delta.norm();
  if (std::abs(sum) > kDeltaTol || std::abs(norm - 1.0) > kDeltaTol) {
    Eigen::VectorXd centered = delta.array() - delta.mean();
    const double centered_norm = centered.norm();
    if (!(centered_norm > 1e-12 * std::max(1.0, norm))) {
      throw InvalidInput("delta is zero or uniform and cannot be normalized to a mismatch direction");
    }
    mism.delta = centered / centered_norm;
    mism.renormalized = true;
    std::ostringstream os;
    os << "delta renormalized (sum " << sum << ", norm " << norm << ")";
    mism.warnings.push_back(os.str());
  }
  return reproject(net, mism);
}

MismatchVector project_mismatch_strict(const Network& net, const Eigen::VectorXd& delta) {
  MismatchVector mism = project_mismatch(net, delta);
  if (mism.renormalized) throw InvalidInput("delta must be zero-sum and unit-norm");
  return mism;
}

Eigen::MatrixXd delta_rank_one(const Eigen::VectorXd& delta) {
  const auto n = delta.size();
  return -Eigen::VectorXd::Ones(n) * delta.transpose() / static_cast<double>(n);
}

Eigen::MatrixXd coupling_rank_one(const Network& net, const Eigen::VectorXd& delta) {
  const Eigen::VectorXd d = net.laplacian.transpose() * delta;
  return delta_rank_one(d);
}

bool verify_annihilation(const Network& net, const Eigen::VectorXd& delta, double tol) {
  if (delta.size() != net.size()) throw InvalidInput("delta length does not match the network");
  const Eigen::MatrixXd& v = net.basis;
  const double a = (v.transpose() * delta_rank_one(delta) * v).cwiseAbs().maxCoeff();
  const double b = (v.transpose() * coupling_rank_one(net, delta) * v).cwiseAbs().maxCoeff();
  return a <= tol && b <= tol;
}

AdaptedModes adapt_to_mismatch(const Network& net, const MismatchVector& mism) {
  AdaptedModes out{net, mism, false};
  for (const auto& cluster : net.eigenvalue_clusters()) {
    if (cluster.size() < 2) continue;
    const auto k = static_cast<Eigen::Index>(cluster.size());
    Eigen::MatrixXd sub(k, k);
    Eigen::MatrixXd cols(net.size(), k);
    for (Eigen::Index a = 0; a < k; ++a) {
      cols.col(a) = net.basis.col(cluster[a]);
      for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = mism.projected(cluster[a], cluster[b]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sub);
    const Eigen::MatrixXd rotated = cols * solver.eigenvectors();
    // All members share one eigenvalue; use their mean to drop the jitter.
    double mean_gamma = 0.0;
    for (int idx : cluster) mean_gamma += net.gamma(idx);
    mean_gamma /= static_cast<double>(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      Eigen::VectorXd col = rotated.col(a);
      normalize_sign(col);
      out.network.basis.col(cluster[a]) = col;
      out.network.gamma(cluster[a]) = mean_gamma;
    }
    out.rotated = true;
  }
  if (out.rotated) out.mismatch = reproject(out.network, mism);
  return out;
}

}  // namespace hetsync
