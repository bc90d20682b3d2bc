#include "hetsync/perturb.hpp"

#include "hetsync/errors.hpp"
#include "hetsync/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hetsync {
namespace {

constexpr double kCriticalTieTol = 1e-9;

double order_key(const std::complex<double>& z, TimeKind time) {
  return time == TimeKind::continuous ? z.real() : std::abs(z);
}

struct FlatIndex {
  int block;
  int index;
};

std::vector<FlatIndex> select_critical(const std::vector<BlockEigen>& blocks, TimeKind time) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& b : blocks) {
    for (const auto& z : b.values) best = std::max(best, order_key(z, time));
  }
  std::vector<FlatIndex> out;
  for (int i = 0; i < static_cast<int>(blocks.size()); ++i) {
    for (int s = 0; s < blocks[i].values.size(); ++s) {
      if (order_key(blocks[i].values(s), time) >= best - kCriticalTieTol) out.push_back({i, s});
    }
  }
  return out;
}

void validate_inputs(const Network& net, const MismatchVector& mism, const ModelSpec& model, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("coupling strength sigma must be positive");
  if (mism.size() != net.size() || mism.projected.rows() != net.modes()) {
    throw InvalidInput("mismatch vector does not match the network size");
  }
  const auto n = model.state_dim;
  if (n <= 0 || model.F.rows() != n || model.F.cols() != n || model.H.rows() != n || model.H.cols() != n ||
      model.B.rows() != n || model.B.cols() != n) {
    throw InvalidInput("model " + model.name + " has inconsistent Jacobian dimensions");
  }
}

}  // namespace

StabilityMatrices assemble(const Network& net, const MismatchVector& mism, const ModelSpec& model,
                           double sigma, BasisPolicy policy) {
  validate_inputs(net, mism, model, sigma);

  Eigen::VectorXd gamma = net.gamma;
  Eigen::MatrixXd projected = mism.projected;
  if (policy == BasisPolicy::adapt_to_mismatch) {
    const AdaptedModes adapted = adapt_to_mismatch(net, mism);
    gamma = adapted.network.gamma;
    projected = adapted.mismatch.projected;
  }

  const auto m = gamma.size();
  const auto n = model.state_dim;
  StabilityMatrices out;
  out.sigma = sigma;
  out.state_dim = n;
  out.time = model.time;
  out.mode = model.mode;
  out.B = model.B;
  out.gamma = gamma;
  out.projected = projected;
  out.m0 = Eigen::MatrixXd::Zero(m * n, m * n);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.m0.block(i * n, i * n, n, n) = model.F - sigma * gamma(i) * model.H;
  }
  if (model.mode == MismatchMode::local_parameter) {
    out.m1 = kron(projected, model.B);
  } else {
    out.m1 = kron(projected, Eigen::MatrixXd::Identity(n, n)) * out.m0;
  }
  return out;
}

NodeSpaceMatrices node_space_matrices(const Network& net, const Eigen::VectorXd& delta,
                                      const ModelSpec& model, double sigma) {
  if (delta.size() != net.size()) throw InvalidInput("delta length does not match the network");
  const auto big_n = net.size();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(big_n, big_n);
  const Eigen::MatrixXd diag = delta.asDiagonal();
  NodeSpaceMatrices out;
  out.m0 = kron(eye, model.F) - sigma * kron(net.laplacian, model.H);
  if (model.mode == MismatchMode::local_parameter) {
    out.m1 = kron(diag, model.B);
  } else {
    out.m1 = kron(Eigen::MatrixXd(diag + delta_rank_one(delta)), model.F) -
             sigma * kron(Eigen::MatrixXd(diag * net.laplacian + coupling_rank_one(net, delta)), model.H);
  }
  return out;
}

BlockEigen block_eigen(const Eigen::MatrixXd& block, TimeKind order) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(block);
  if (es.info() != Eigen::Success) throw NotDiagonalizable("block eigensolve did not converge");

  const auto n = block.rows();
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  const Eigen::VectorXcd raw = es.eigenvalues();
  std::stable_sort(perm.begin(), perm.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ka = order_key(raw(a), order);
    const double kb = order_key(raw(b), order);
    if (ka != kb) return ka > kb;
    return raw(a).imag() > raw(b).imag();
  });

  BlockEigen out;
  out.values.resize(n);
  out.right.resize(n, n);
  const Eigen::MatrixXcd vectors = es.eigenvectors();
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values(j) = raw(perm[static_cast<std::size_t>(j)]);
    out.right.col(j) = vectors.col(perm[static_cast<std::size_t>(j)]).normalized();
  }

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(out.right);
  if (!(lu.rcond() > 1e-12)) throw NotDiagonalizable("block has a defective (non-diagonalizable) eigenbasis");
  out.left = lu.inverse().adjoint();

  const double scale = std::max(1.0, block.norm());
  const Eigen::MatrixXcd residual =
      block.cast<std::complex<double>>() * out.right - out.right * out.values.asDiagonal();
  if (residual.norm() > 1e-8 * scale) throw NotDiagonalizable("block eigenpairs fail the residual check");
  return out;
}

double SpectralExpansion::critical_value(double eps) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : critical) {
    const auto z = c.predict(eps);
    best = std::max(best, time == TimeKind::continuous ? z.real() : std::abs(z));
  }
  return best;
}

std::vector<int> SpectralExpansion::critical_blocks() const {
  std::vector<int> out;
  for (const auto& c : critical) {
    if (std::find(out.begin(), out.end(), c.block) == out.end()) out.push_back(c.block);
  }
  return out;
}

SpectralExpansion expand_eigenvalues(const StabilityMatrices& mats) {
  const int m = mats.modes();
  const int n = mats.state_dim;
  const int total = m * n;

  SpectralExpansion out;
  out.time = mats.time;
  out.state_dim = n;
  out.blocks.reserve(static_cast<std::size_t>(m));
  out.lambda0.resize(total);
  for (int i = 0; i < m; ++i) {
    out.blocks.push_back(block_eigen(mats.block(i), mats.time));
    out.lambda0.segment(i * n, n) = out.blocks.back().values;
  }

  // Q = W0^* M1 V0, evaluated block by block from the dense perturbation.
  Eigen::MatrixXcd q(total, total);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      const Eigen::MatrixXcd m1_ik = mats.m1.block(i * n, k * n, n, n).cast<std::complex<double>>();
      q.block(i * n, k * n, n, n) = out.blocks[i].left.adjoint() * m1_ik * out.blocks[k].right;
    }
  }
  out.lambda1 = q.diagonal();

  const double floor = kGapFloor * mats.m0.norm();
  out.lambda2 = Eigen::VectorXcd::Zero(total);
  for (int a = 0; a < total; ++a) {
    std::complex<double> acc = 0.0;
    for (int b = 0; b < total; ++b) {
      if (a == b) continue;
      const std::complex<double> weight = q(a, b) * q(b, a);
      const std::complex<double> gap = out.lambda0(b) - out.lambda0(a);
      if (std::abs(gap) < floor) {
        if (std::abs(weight) > kCouplingFloor) throw DegenerateGap(a / n, a % n, b / n, b % n, std::abs(gap));
        continue;
      }
      acc += weight / gap;
    }
    out.lambda2(a) = -acc;
  }

  for (const auto& idx : select_critical(out.blocks, mats.time)) {
    const int flat = idx.block * n + idx.index;
    out.critical.push_back(
        {idx.block, idx.index, out.lambda0(flat), out.lambda1(flat), out.lambda2(flat)});
  }
  return out;
}

Eigen::MatrixXd curvature_block(const ModelSpec& model, const BlockEigen& block_i, const BlockEigen& block_k,
                                bool same_block, double gap_floor, int block_id_i, int block_id_k) {
  using Cmat = Eigen::MatrixXcd;
  Cmat a;
  Cmat c;
  if (model.mode == MismatchMode::local_parameter) {
    const Cmat b = model.B.cast<std::complex<double>>();
    a = block_i.left.adjoint() * b * block_k.right;
    c = block_k.left.adjoint() * b * block_i.right;
  } else {
    a = block_i.left.adjoint() * block_k.right * block_k.values.asDiagonal();
    c = block_k.left.adjoint() * block_i.right * block_i.values.asDiagonal();
  }

  const auto n = block_i.values.size();
  // pi_ki(q, s) = 1 / (lambda_k^q - lambda_i^s), zero on the diagonal of a block with itself.
  Cmat pi_ki = Cmat::Zero(n, n);
  for (Eigen::Index q = 0; q < n; ++q) {
    for (Eigen::Index s = 0; s < n; ++s) {
      if (same_block && q == s) continue;
      const std::complex<double> gap = block_k.values(q) - block_i.values(s);
      if (std::abs(gap) < gap_floor) {
        if (std::abs(a(s, q) * c(q, s)) > kCouplingFloor) {
          throw DegenerateGap(block_id_i, static_cast<int>(s), block_id_k, static_cast<int>(q), std::abs(gap));
        }
        continue;
      }
      pi_ki(q, s) = 1.0 / gap;
    }
  }
  return -(a * c.cwiseProduct(pi_ki)).real();
}

CurvatureProfile curvature_contribution(const ModelSpec& model, double zeta_i, std::span<const double> zeta_k_grid) {
  if (!std::isfinite(zeta_i)) throw InvalidInput("zeta_i must be finite");
  for (std::size_t g = 0; g < zeta_k_grid.size(); ++g) {
    if (!std::isfinite(zeta_k_grid[g])) throw InvalidInput("zeta_k grid has non-finite values");
    if (g > 0 && !(zeta_k_grid[g] > zeta_k_grid[g - 1])) throw InvalidInput("zeta_k grid must be strictly increasing");
  }

  const Eigen::MatrixXd block_i_mat = model.F - zeta_i * model.H;
  const BlockEigen block_i = block_eigen(block_i_mat, model.time);

  CurvatureProfile out;
  out.zeta_i = zeta_i;
  out.zeta_k.assign(zeta_k_grid.begin(), zeta_k_grid.end());
  for (const auto& idx : select_critical({block_i}, model.time)) out.critical_indices.push_back(idx.index);
  out.values.assign(out.critical_indices.size(), std::vector<double>(zeta_k_grid.size(), 0.0));

  for (std::size_t g = 0; g < zeta_k_grid.size(); ++g) {
    const double zeta_k = zeta_k_grid[g];
    const bool same = std::abs(zeta_k - zeta_i) <= 1e-12 * std::max(1.0, std::abs(zeta_i));
    const Eigen::MatrixXd block_k_mat = model.F - zeta_k * model.H;
    const BlockEigen block_k = same ? block_i : block_eigen(block_k_mat, model.time);
    const double floor = kGapFloor * std::max(block_i_mat.norm(), block_k_mat.norm());
    Eigen::MatrixXd u;
    try {
      u = curvature_block(model, block_i, block_k, same, floor, 0, 1);
    } catch (const DegenerateGap& e) {
      std::ostringstream os;
      os << "curvature profile at zeta_k = " << zeta_k;
      throw DegenerateGap(e.block_a(), e.index_a(), e.block_b(), e.index_b(), e.gap(), os.str());
    }
    for (std::size_t j = 0; j < out.critical_indices.size(); ++j) {
      const int s = out.critical_indices[j];
      out.values[j][g] = u(s, s);
    }
  }
  return out;
}

std::vector<CurvatureBreakdown> curvature_from_network(const Network& net, const MismatchVector& mism,
                                                       const ModelSpec& model, double sigma) {
  const StabilityMatrices mats = assemble(net, mism, model, sigma);
  const int m = mats.modes();
  std::vector<BlockEigen> blocks;
  blocks.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) blocks.push_back(block_eigen(mats.block(i), mats.time));
  const double floor = kGapFloor * mats.m0.norm();

  std::vector<CurvatureBreakdown> out;
  for (const auto& idx : select_critical(blocks, mats.time)) {
    CurvatureBreakdown bd;
    bd.block = idx.block;
    bd.index = idx.index;
    bd.zeta_i = sigma * mats.gamma(idx.block);
    for (int k = 0; k < m; ++k) {
      PairContribution pc;
      pc.k = k;
      pc.zeta_k = sigma * mats.gamma(k);
      pc.weight = mats.projected(idx.block, k) * mats.projected(idx.block, k);
      if (k != idx.block && std::abs(mats.projected(idx.block, k)) <= kCouplingFloor) {
        // Uncoupled mode; for an equal eigencoupling U would be singular.
        bd.pairs.push_back(pc);
        continue;
      }
      const Eigen::MatrixXd u = curvature_block(model, blocks[idx.block], blocks[k], k == idx.block, floor,
                                                idx.block, k);
      pc.u_ss = u(idx.index, idx.index);
      pc.contribution = pc.weight * pc.u_ss;
      bd.c2 += pc.contribution;
      bd.pairs.push_back(pc);
    }
    out.push_back(std::move(bd));
  }
  return out;
}

}  // namespace hetsync
