#pragma once

#include "chaoscoupler/galerkin.hpp"

#include <cstdint>
#include <memory>

namespace chaoscoupler::models {

struct LinearModelParams {
  int n1 = 5;
  int n2 = 5;
  int s1 = 2;
  int s2 = 2;
  double coupling = 0.3;  // scale of the cross-module blocks
  double spread = 0.3;    // scale of the parameter-dependent blocks
  std::uint64_t seed = 7;
  bool identity_gramian = true;
};

/// Synthetic two-module model f_i = A_i(xi_i) u_i - B_i u_c - b_i(xi_i), with
/// A_i(xi) = A_i0 + sum_k xi_k A_ik and b_i(xi) = b_i0 + sum_k xi_k b_ik.
class LinearCoupledModel : public galerkin::CoupledModel {
 public:
  explicit LinearCoupledModel(const LinearModelParams& params);
  ~LinearCoupledModel() override;

  std::string name() const override { return "linear"; }
  const galerkin::ModuleProblem& module(int i) const override;
  const Gramian& gramian(int i) const override;
  const LinearModelParams& params() const { return params_; }

  Eigen::MatrixXd A(int i, const double* xi) const;
  Eigen::VectorXd b(int i, const double* xi) const;
  const Eigen::MatrixXd& B(int i) const { return B_[i - 1]; }

  /// Monolithic solve of the coupled system at (xi1, xi2).
  void solve(const double* xi1, const double* xi2, Eigen::VectorXd& u1, Eigen::VectorXd& u2) const;

 private:
  class Problem;
  LinearModelParams params_;
  std::vector<Eigen::MatrixXd> A_[2];
  std::vector<Eigen::VectorXd> b_[2];
  Eigen::MatrixXd B_[2];
  Gramian gram_[2];
  std::unique_ptr<Problem> prob_[2];
};

}  // namespace chaoscoupler::models
