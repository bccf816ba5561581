#pragma once

#include <Eigen/Dense>

#include <memory>
#include <mutex>
#include <vector>

namespace chaoscoupler {

/// Symmetric positive definite weight matrix for state norms, stored as a
/// block diagonal of diagonal or dense blocks.
class Gramian {
 public:
  Gramian() = default;
  static Gramian identity(int n);
  static Gramian diagonal(const Eigen::VectorXd& d);
  static Gramian dense(const Eigen::MatrixXd& G);
  static Gramian block_diag(const Gramian& a, const Gramian& b);

  int size() const { return n_; }
  Eigen::MatrixXd to_dense() const;

  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
  Eigen::MatrixXd apply_sqrt(const Eigen::MatrixXd& X) const;
  Eigen::MatrixXd apply_invsqrt(const Eigen::MatrixXd& X) const;

  /// sqrt(trace(U^T G U))
  double norm(const Eigen::MatrixXd& U) const;
  /// trace(A^T G B)
  double inner(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) const;
  /// Column-wise G-norms squared.
  Eigen::VectorXd column_norms2(const Eigen::MatrixXd& U) const;

 private:
  struct Block {
    int offset = 0;
    int size = 0;
    bool diagonal = true;
    Eigen::VectorXd d;
    Eigen::MatrixXd G;
    // Eigen-decomposition for the dense square root, built on first use and shared between copies.
    struct Eig {
      std::once_flag once;
      Eigen::MatrixXd V;
      Eigen::VectorXd lam;
    };
    std::shared_ptr<Eig> eig;
  };
  enum class Power { One, Half, MinusHalf };
  Eigen::MatrixXd apply_power(const Eigen::MatrixXd& X, Power pw) const;
  static const Block::Eig& eigen(const Block& b);

  int n_ = 0;
  std::vector<Block> blocks_;
};

}  // namespace chaoscoupler
