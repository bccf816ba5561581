#include "chaoscoupler/gramian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chaoscoupler {

Gramian Gramian::identity(int n) { return diagonal(Eigen::VectorXd::Ones(n)); }

Gramian Gramian::diagonal(const Eigen::VectorXd& d) {
  if ((d.array() <= 0.0).any()) throw std::invalid_argument("Gramian: diagonal must be positive");
  Gramian g;
  g.n_ = static_cast<int>(d.size());
  Block b;
  b.size = g.n_;
  b.d = d;
  g.blocks_.push_back(std::move(b));
  return g;
}

Gramian Gramian::dense(const Eigen::MatrixXd& G) {
  if (G.rows() != G.cols()) throw std::invalid_argument("Gramian: matrix must be square");
  Gramian g;
  g.n_ = static_cast<int>(G.rows());
  Block b;
  b.size = g.n_;
  b.diagonal = false;
  b.G = 0.5 * (G + G.transpose());
  if (b.G.llt().info() != Eigen::Success) throw std::invalid_argument("Gramian: matrix must be symmetric positive definite");
  b.eig = std::make_shared<Block::Eig>();
  g.blocks_.push_back(std::move(b));
  return g;
}

Gramian Gramian::block_diag(const Gramian& a, const Gramian& b) {
  Gramian g;
  g.n_ = a.n_ + b.n_;
  g.blocks_ = a.blocks_;
  for (Block blk : b.blocks_) {
    blk.offset += a.n_;
    g.blocks_.push_back(std::move(blk));
  }
  return g;
}

const Gramian::Block::Eig& Gramian::eigen(const Block& b) {
  std::call_once(b.eig->once, [&] {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.G);
    b.eig->V = es.eigenvectors();
    b.eig->lam = es.eigenvalues();
  });
  return *b.eig;
}

Eigen::MatrixXd Gramian::to_dense() const {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& b : blocks_) {
    if (b.diagonal)
      D.block(b.offset, b.offset, b.size, b.size) = b.d.asDiagonal();
    else
      D.block(b.offset, b.offset, b.size, b.size) = b.G;
  }
  return D;
}

Eigen::MatrixXd Gramian::apply_power(const Eigen::MatrixXd& X, Power pw) const {
  if (X.rows() != n_) throw std::invalid_argument("Gramian: row count mismatch");
  Eigen::MatrixXd Y(X.rows(), X.cols());
  for (const auto& b : blocks_) {
    auto xb = X.middleRows(b.offset, b.size);
    auto yb = Y.middleRows(b.offset, b.size);
    if (b.diagonal) {
      Eigen::VectorXd s = b.d;
      if (pw == Power::Half) s = s.cwiseSqrt();
      if (pw == Power::MinusHalf) s = s.cwiseSqrt().cwiseInverse();
      yb = s.asDiagonal() * xb;
    } else if (pw == Power::One) {
      yb.noalias() = b.G * xb;
    } else {
      const auto& e = eigen(b);
      const Eigen::MatrixXd& V = e.V;
      const Eigen::VectorXd& lam = e.lam;
      Eigen::VectorXd s = lam.cwiseSqrt();
      if (pw == Power::MinusHalf) s = s.cwiseInverse();
      yb.noalias() = V * (s.asDiagonal() * (V.transpose() * xb));
    }
  }
  return Y;
}

Eigen::MatrixXd Gramian::apply(const Eigen::MatrixXd& X) const { return apply_power(X, Power::One); }
Eigen::MatrixXd Gramian::apply_sqrt(const Eigen::MatrixXd& X) const { return apply_power(X, Power::Half); }
Eigen::MatrixXd Gramian::apply_invsqrt(const Eigen::MatrixXd& X) const { return apply_power(X, Power::MinusHalf); }

double Gramian::inner(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) const {
  return (A.array() * apply(B).array()).sum();
}

double Gramian::norm(const Eigen::MatrixXd& U) const { return std::sqrt(std::max(0.0, inner(U, U))); }

Eigen::VectorXd Gramian::column_norms2(const Eigen::MatrixXd& U) const {
  return (U.array() * apply(U).array()).colwise().sum().transpose();
}

}  // namespace chaoscoupler
