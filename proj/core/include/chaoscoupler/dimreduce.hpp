#pragma once

#include "chaoscoupler/basis.hpp"
#include "chaoscoupler/gramian.hpp"

#include <Eigen/Dense>

#include <vector>

namespace chaoscoupler::dimreduce {

/// Input data of module i: Y = [own state; other state] on the global basis,
/// Gamma = blkdiag(G_own, G_other).
struct StackedInput {
  int module = 1;
  int n_own = 0;
  Eigen::MatrixXd Y;
  Gramian gamma;
};

/// Row count P'+1 of own-basis blocks in Z: functions of degree <= p-1.
int own_block_count(int s_own, int p);

/// (P'+1) n x P_c matrix of whitened coefficient blocks with complementary index >= 1.
Eigen::MatrixXd assemble_z(const StackedInput& in, const basis::BasisSplit& split);

/// Separable expansion y(xi) = Ybar(xi_own) + sum_j sigma_j Y_j(xi_own) theta_j(xi_c).
struct ReducedExpansion {
  int module = 1;
  int n = 0;
  int n_own = 0;
  int d = 0;
  Eigen::VectorXd sigma;              // full spectrum, nonincreasing
  Eigen::MatrixXd mean_block;         // n x (P_i+1)
  std::vector<Eigen::MatrixXd> modes; // one n x (P_i+1) block per singular value
  Eigen::MatrixXd theta_hat;          // rank x (P_c+1), column 0 is zero

  int rank() const { return static_cast<int>(sigma.size()); }
  /// sqrt(sum_{j>k} sigma_j^2)
  double truncation_error(int k) const;
  double total() const { return truncation_error(0); }
  /// theta_1..theta_d at a complementary point.
  Eigen::VectorXd eval_theta(const basis::MultiIndexSet& comp_set, const orthopoly::PolyFamily& family,
                             const double* xi_c) const;
  /// Ybar + sum_{j<d} sigma_j Y_j theta_j on the own modular basis.
  Eigen::MatrixXd affine_map(const Eigen::VectorXd& theta) const;
  /// Rows of the module's own state and of the coupled state.
  Eigen::MatrixXd own_rows(const Eigen::MatrixXd& M) const { return M.topRows(n_own); }
  Eigen::MatrixXd coupled_rows(const Eigen::MatrixXd& M) const { return M.bottomRows(n - n_own); }
};

/// Smallest k with sqrt(sum_{j>k} sigma_j^2) <= eps * sqrt(sum sigma_j^2).
int select_dimension(const Eigen::VectorXd& sigma, double eps);

ReducedExpansion reduce(const StackedInput& in, const basis::BasisSplit& split, double eps_dim);

}  // namespace chaoscoupler::dimreduce
