#pragma once

#include "hetsync/models.hpp"
#include "hetsync/network.hpp"

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace hetsync {

/// Which end of the stable coupling range is being studied: the
/// asynchrony-to-synchrony transition (lower) or synchrony-to-asynchrony (upper).
enum class Transition { lower, upper };

/// Transverse stability matrix M(eps) = M0 + eps M1 for a given coupling.
///
/// M0 is block diagonal with blocks F - sigma gamma_i H. M1 is
/// Dt (x) B (local mismatch) or (Dt (x) I) M0 (frequency mismatch), where Dt
/// is the projected mismatch in the transverse basis stored here.
struct StabilityMatrices {
  Eigen::MatrixXd m0;
  Eigen::MatrixXd m1;
  double sigma = 0.0;
  int state_dim = 0;
  TimeKind time = TimeKind::continuous;
  MismatchMode mode = MismatchMode::local_parameter;
  Eigen::MatrixXd B;
  /// Transverse Laplacian eigenvalues and projected mismatch, in the basis
  /// used to build m0/m1.
  Eigen::VectorXd gamma;
  Eigen::MatrixXd projected;

  int modes() const { return static_cast<int>(gamma.size()); }
  Eigen::MatrixXd block(int i) const {
    return m0.block(i * state_dim, i * state_dim, state_dim, state_dim);
  }
  Eigen::MatrixXd at(double eps) const { return m0 + eps * m1; }
};

/// How assemble() treats degenerate Laplacian eigenspaces.
enum class BasisPolicy {
  /// Rotate inside degenerate eigenspaces so the projected mismatch is
  /// diagonal there (required by the nondegenerate expansion).
  adapt_to_mismatch,
  /// Use the network's basis as given.
  as_given,
};

/// Throws InvalidInput for sigma <= 0 or inconsistent sizes.
StabilityMatrices assemble(const Network& net, const MismatchVector& mism, const ModelSpec& model,
                           double sigma, BasisPolicy policy = BasisPolicy::adapt_to_mismatch);

/// Node-space matrices M0, M1 of the homogeneous deviation dynamics before
/// projection (N n x N n). In frequency mode M1 includes the rank-one terms
/// that the transverse projection annihilates.
struct NodeSpaceMatrices {
  Eigen::MatrixXd m0;
  Eigen::MatrixXd m1;
};
NodeSpaceMatrices node_space_matrices(const Network& net, const Eigen::VectorXd& delta,
                                      const ModelSpec& model, double sigma);

/// Eigen-decomposition of one block with left eigenvectors normalized so
/// left^* right = I.
///
/// Eigenvalues are ordered by decreasing real part (continuous) or modulus
/// (discrete); a complex-conjugate pair is kept adjacent with the positive
/// imaginary part first.
struct BlockEigen {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd right;
  Eigen::MatrixXcd left;
};
BlockEigen block_eigen(const Eigen::MatrixXd& block, TimeKind order);

/// One eigenvalue branch lambda(eps) ~ lambda0 + eps lambda1 + eps^2 lambda2
/// that attains the critical value at eps = 0.
struct CriticalEntry {
  int block = 0;
  int index = 0;
  std::complex<double> lambda0;
  std::complex<double> lambda1;
  std::complex<double> lambda2;

  double c0() const { return lambda0.real(); }
  double c1() const { return lambda1.real(); }
  double c2() const { return lambda2.real(); }
  std::complex<double> predict(double eps) const { return lambda0 + eps * lambda1 + eps * eps * lambda2; }
};

/// Second-order expansion of every eigenvalue of M(eps), flattened as
/// block * state_dim + index.
struct SpectralExpansion {
  Eigen::VectorXcd lambda0;
  Eigen::VectorXcd lambda1;
  Eigen::VectorXcd lambda2;
  std::vector<BlockEigen> blocks;
  /// Entries tied (within 1e-9) for the largest real part (continuous) or
  /// modulus (discrete). Conjugate pairs and tied blocks all appear.
  std::vector<CriticalEntry> critical;
  TimeKind time = TimeKind::continuous;
  int state_dim = 0;

  Eigen::VectorXcd predict(double eps) const { return lambda0 + eps * lambda1 + eps * eps * lambda2; }
  /// max Re (continuous) or max |.| (discrete) of the critical branches.
  double critical_value(double eps) const;
  std::vector<int> critical_blocks() const;
};

/// Relative degeneracy floor: pairs closer than this times ||M0|| with
/// nonzero coupling abort the expansion.
inline constexpr double kGapFloor = 1e-8;
inline constexpr double kCouplingFloor = 1e-12;

/// Throws DegenerateGap or NotDiagonalizable.
SpectralExpansion expand_eigenvalues(const StabilityMatrices& mats);

/// Curvature contribution block U_ik for eigencouplings (zeta_i, zeta_k).
/// `same_block` selects the i == k convention (diagonal of Pi excluded).
/// `block_id_i`/`block_id_k` only label a DegenerateGap error.
Eigen::MatrixXd curvature_block(const ModelSpec& model, const BlockEigen& block_i,
                                const BlockEigen& block_k, bool same_block, double gap_floor,
                                int block_id_i = 0, int block_id_k = 0);

/// Curvature contribution function sampled along zeta_k for fixed zeta_i.
struct CurvatureProfile {
  double zeta_i = 0.0;
  std::vector<double> zeta_k;
  /// Critical indices s of F - zeta_i H (0-based).
  std::vector<int> critical_indices;
  /// values[j][g] = [U_ik]_ss for s = critical_indices[j] at zeta_k[g].
  std::vector<std::vector<double>> values;
};

/// Throws InvalidInput for a non-increasing grid and DegenerateGap when a
/// grid point sits on a degenerate pair (the message names zeta_k).
CurvatureProfile curvature_contribution(const ModelSpec& model, double zeta_i,
                                        std::span<const double> zeta_k_grid);

/// Per-mode contribution Dt_ik^2 [U_ik]_ss to the curvature coefficient.
struct PairContribution {
  int k = 0;
  double zeta_k = 0.0;
  double weight = 0.0;
  double u_ss = 0.0;
  double contribution = 0.0;
};

struct CurvatureBreakdown {
  int block = 0;
  int index = 0;
  double zeta_i = 0.0;
  double c2 = 0.0;
  std::vector<PairContribution> pairs;
};

/// c2 of each critical branch assembled pairwise from curvature blocks.
std::vector<CurvatureBreakdown> curvature_from_network(const Network& net, const MismatchVector& mism,
                                                       const ModelSpec& model, double sigma);

}  // namespace hetsync
