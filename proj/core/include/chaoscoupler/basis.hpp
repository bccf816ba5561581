#pragma once

#include "chaoscoupler/orthopoly.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace chaoscoupler::basis {

/// Version tag of the canonical basis ordering, written into artifact headers.
inline constexpr const char* kOrderingVersion = "graded-revlex-1";

using MultiIndex = std::vector<int>;

/// Total-degree multi-index set in graded order; ties within a degree are
/// broken by reverse-lexicographic order, e.g. (2,0),(1,1),(0,2).
class MultiIndexSet {
 public:
  MultiIndexSet() = default;
  MultiIndexSet(int s, int p);

  int dim() const { return s_; }
  int order() const { return p_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const MultiIndex& operator[](int j) const { return indices_[j]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  int degree(int j) const { return degree_[j]; }
  /// Position of alpha in the set, or -1.
  int find(const MultiIndex& alpha) const;

 private:
  int s_ = 0;
  int p_ = 0;
  std::vector<MultiIndex> indices_;
  std::vector<int> degree_;
};

MultiIndexSet total_degree_set(int s, int p);
/// (p+s)! / (p! s!)
std::int64_t count_total_degree(int s, int p);

/// Evaluate the multivariate orthonormal basis at a point (size = set.dim()).
Eigen::VectorXd eval_basis(const MultiIndexSet& set, const orthopoly::PolyFamily& family, const double* point);
inline Eigen::VectorXd eval_basis(const MultiIndexSet& set, const orthopoly::PolyFamily& family,
                                  const Eigen::VectorXd& point) {
  return eval_basis(set, family, point.data());
}
/// Rows = points (columns of `points`), columns = basis functions.
Eigen::MatrixXd eval_basis_table(const MultiIndexSet& set, const orthopoly::PolyFamily& family,
                                 const Eigen::MatrixXd& points);

/// Global set over (xi_1, xi_2) with the two modular sets and the index maps.
class BasisSplit {
 public:
  BasisSplit() = default;
  BasisSplit(int s1, int s2, int p);

  int s1() const { return s1_; }
  int s2() const { return s2_; }
  int order() const { return p_; }
  const MultiIndexSet& global() const { return global_; }
  const MultiIndexSet& modular(int i) const { return i == 1 ? mod1_ : mod2_; }
  /// Modular position of global index j in block i.
  int jmap(int i, int j) const { return i == 1 ? j1_[j] : j2_[j]; }
  const std::vector<int>& jmap(int i) const { return i == 1 ? j1_ : j2_; }
  /// Global index of the pair (k1, k2), or -1 when the total degree exceeds p.
  int global_index(int k1, int k2) const { return pair_to_global_[k1 * mod2_.size() + k2]; }

 private:
  int s1_ = 0, s2_ = 0, p_ = 0;
  MultiIndexSet global_, mod1_, mod2_;
  std::vector<int> j1_, j2_;
  std::vector<int> pair_to_global_;
};

BasisSplit split_basis(int s1, int s2, int p);

/// Sparse (P+1) x (P_i+1) matrix, one nonzero per row.
struct PiMatrix {
  int module = 1;
  int cols = 0;
  std::vector<int> col;
  std::vector<double> val;

  int rows() const { return static_cast<int>(col.size()); }
  Eigen::MatrixXd dense() const;
  /// U (n x (P+1)) * Pi  ->  n x (P_i+1)
  Eigen::MatrixXd right_apply(const Eigen::MatrixXd& U) const;
  /// Ut (n x (P_i+1)) * Pi^T  ->  n x (P+1)
  Eigen::MatrixXd right_apply_transpose(const Eigen::MatrixXd& Ut) const;
  /// acc += w * Ut * Pi^T
  void accumulate_transpose(const Eigen::MatrixXd& Ut, double w, Eigen::MatrixXd& acc) const;
};

/// Pi_i evaluated at a point of the complementary block (xi_2 for i = 1, xi_1 for i = 2).
PiMatrix eval_pi(const BasisSplit& split, int module, const orthopoly::PolyFamily& family,
                 const double* complementary_point);
inline PiMatrix eval_pi(const BasisSplit& split, int module, const orthopoly::PolyFamily& family,
                        const Eigen::VectorXd& complementary_point) {
  return eval_pi(split, module, family, complementary_point.data());
}

}  // namespace chaoscoupler::basis
