#pragma once

#include "chaoscoupler/orthopoly.hpp"

#include <Eigen/Dense>

#include <vector>

namespace chaoscoupler::quadrature {

inline constexpr double kDefaultRuleCap = 1.0e6;
/// Diagonal entries of R below this fraction of |R_00| are treated as zero.
inline constexpr double kRankThreshold = 1.0e-12;

struct TensorRule {
  int dim = 0;
  int level = 0;
  Eigen::MatrixXd nodes;    // dim x Q, last dimension varies fastest
  Eigen::VectorXd weights;  // Q

  int size() const { return static_cast<int>(weights.size()); }
};

TensorRule tensor_rule(const orthopoly::PolyFamily& family, int s, int q, double cap = kDefaultRuleCap);

/// Rows follow the canonical graded order of basis::MultiIndexSet(d, D); one column per point.
Eigen::MatrixXd monomial_vandermonde(const Eigen::MatrixXd& points, int degree);

struct SparseRule {
  int degree = 0;           // moments matched up to this total degree
  int rank = 0;             // numerical rank of the Vandermonde matrix
  bool degenerate = false;  // fell back to a one-point rule
  Eigen::VectorXd weights;  // full length, zero off the support
  std::vector<int> support; // ascending node indices with nonzero weight

  int size() const { return static_cast<int>(support.size()); }
};

/// Weakly optimal compressed rule via two pivoted QR factorizations.
SparseRule compress_rule(const Eigen::MatrixXd& points, const Eigen::VectorXd& weights, int degree);

}  // namespace chaoscoupler::quadrature
