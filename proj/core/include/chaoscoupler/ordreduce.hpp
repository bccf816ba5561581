#pragma once

#include "chaoscoupler/basis.hpp"
#include "chaoscoupler/gramian.hpp"
#include "chaoscoupler/quadrature.hpp"

#include <Eigen/Dense>

#include <vector>

namespace chaoscoupler::ordreduce {

/// Eigenvalues of the moment matrix below this fraction of the largest are dropped.
inline constexpr double kMomentRankThreshold = 1.0e-12;

/// Orthonormal basis phi(theta) = Sigma^{-1/2} V^T m(theta) on the reduced variables.
struct ReducedBasis {
  int d = 0;
  int order = 0;
  basis::MultiIndexSet monomials;
  Eigen::MatrixXd transform;   // r x (Ptilde+1)
  Eigen::VectorXd signature;   // r entries of +-1
  Eigen::MatrixXd table;       // r x Q, phi at the parent nodes
  bool rank_deficient = false;

  int size() const { return static_cast<int>(signature.size()); }
  Eigen::VectorXd eval(const Eigen::VectorXd& theta) const;
};

/// thetas: d x Q values at the parent nodes; weights: parent weights.
ReducedBasis build_reduced_basis(const Eigen::MatrixXd& thetas, const Eigen::VectorXd& weights, int order);

/// Test oracle for positive definite moment matrices: phi = L^{-1} m with H = L L^T.
Eigen::MatrixXd cholesky_basis_table(const Eigen::MatrixXd& thetas, const Eigen::VectorXd& weights, int order);

/// Sum over the support of w u phi^T S. samples: n x |support| in support order.
Eigen::MatrixXd reduced_project(const Eigen::MatrixXd& samples, const ReducedBasis& rb,
                                const quadrature::SparseRule& rule);

/// Two-stage lift of modular solutions at the support nodes to the global basis of module i.
/// parent_weights and pis are indexed by parent node; solutions follow the support order.
Eigen::MatrixXd lift_to_global(const std::vector<Eigen::MatrixXd>& solutions, const ReducedBasis& rb,
                               const quadrature::SparseRule& rule, const Eigen::VectorXd& parent_weights,
                               const std::vector<basis::PiMatrix>& pis);

/// prev+1 when ||U1 - U0||_G > eps ||U1||_G, else prev.
int select_order(int prev, const Eigen::MatrixXd& U0, const Eigen::MatrixXd& U1, const Gramian& G, double eps);

}  // namespace chaoscoupler::ordreduce
