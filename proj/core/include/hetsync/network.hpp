#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace hetsync {

/// Undirected weighted network together with the spectral data of its
/// symmetric Laplacian L = G - A.
///
/// The zero mode (the uniform vector) is split off: `gamma` holds the N-1
/// transverse eigenvalues in ascending order and `basis` the matching
/// orthonormal eigenvectors, each orthogonal to the all-ones vector.
struct Network {
  Eigen::MatrixXd adjacency;
  Eigen::MatrixXd laplacian;
  Eigen::VectorXd gamma;
  Eigen::MatrixXd basis;

  int size() const { return static_cast<int>(adjacency.rows()); }
  int modes() const { return static_cast<int>(gamma.size()); }
  Eigen::MatrixXd gamma_matrix() const { return gamma.asDiagonal(); }

  /// Groups of transverse indices whose eigenvalues coincide within
  /// `rel_tol * max(gamma)`. Singletons are included.
  std::vector<std::vector<int>> eigenvalue_clusters(double rel_tol = 1e-8) const;
};

/// Builds the Laplacian and its transverse eigenbasis.
///
/// Throws InvalidInput for non-square, asymmetric, negative-weight or
/// self-loop input, and for disconnected graphs (gamma_1 < 1e-9 max gamma).
/// Eigenvectors are sign-normalized so their first nonzero entry is positive.
Network build_network(const Eigen::MatrixXd& adjacency);

/// Mismatch direction delta (zero-sum, unit-norm) and its transverse
/// projection Vt^T diag(delta) Vt.
struct MismatchVector {
  Eigen::VectorXd delta;
  Eigen::MatrixXd projected;
  /// True when the input had to be re-centered or re-scaled.
  bool renormalized = false;
  std::vector<std::string> warnings;

  int size() const { return static_cast<int>(delta.size()); }
};

/// Validates, renormalizes if needed (with a warning), and projects delta.
/// An input that is (numerically) uniform or zero cannot be renormalized and
/// throws InvalidInput.
MismatchVector project_mismatch(const Network& net, const Eigen::VectorXd& delta);

/// Same as project_mismatch for an already valid delta, but rejects any
/// input that would need renormalization.
MismatchVector project_mismatch_strict(const Network& net, const Eigen::VectorXd& delta);

/// Rank-one matrices of the frequency-mismatch linearization: every row of
/// the first equals -delta^T / N, every row of the second -d^T / N with
/// d_j = sum_i delta_i L_ij.
Eigen::MatrixXd delta_rank_one(const Eigen::VectorXd& delta);
Eigen::MatrixXd coupling_rank_one(const Network& net, const Eigen::VectorXd& delta);

/// True iff Vt^T Delta_2 Vt and Vt^T D Vt both vanish (max-abs <= tol).
bool verify_annihilation(const Network& net, const Eigen::VectorXd& delta, double tol = 1e-10);

/// Network and mismatch re-expressed in a transverse basis that diagonalizes
/// the projected mismatch inside every degenerate Laplacian eigenspace.
///
/// Within a degenerate eigenspace any orthonormal basis is valid for the
/// network alone; the mismatch selects the one in which the coupling between
/// equal eigencouplings vanishes, which is what the nondegenerate expansion
/// needs. For a simple spectrum the inputs are returned unchanged.
struct AdaptedModes {
  Network network;
  MismatchVector mismatch;
  bool rotated = false;
};
AdaptedModes adapt_to_mismatch(const Network& net, const MismatchVector& mism);

/// Re-projects an existing mismatch onto a (possibly rotated) network.
MismatchVector reproject(const Network& net, const MismatchVector& mism);

}  // namespace hetsync
