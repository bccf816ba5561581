#include "chaoscoupler/models/linear_model.hpp"

#include "chaoscoupler/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace chaoscoupler::models {

using Eigen::MatrixXd;
using Eigen::VectorXd;

class LinearCoupledModel::Problem : public galerkin::ModuleProblem {
 public:
  Problem(const LinearCoupledModel& m, int i) : m_(m), i_(i) {}
  int size() const override { return i_ == 1 ? m_.params_.n1 : m_.params_.n2; }
  int coupled_size() const override { return i_ == 1 ? m_.params_.n2 : m_.params_.n1; }
  int param_dim() const override { return i_ == 1 ? m_.params_.s1 : m_.params_.s2; }

  void residual(const VectorXd& own, const VectorXd& cpl, const double* xi, VectorXd& r,
                const double*) const override {
    r = m_.A(i_, xi) * own - m_.B_[i_ - 1] * cpl - m_.b(i_, xi);
  }
  void step_matrix(const VectorXd&, const VectorXd&, const double* xi, galerkin::SpMat& J) const override {
    J = m_.A(i_, xi).sparseView();
  }

 private:
  const LinearCoupledModel& m_;
  int i_;
};

LinearCoupledModel::LinearCoupledModel(const LinearModelParams& params) : params_(params) {
  const int n[2] = {params_.n1, params_.n2};
  const int s[2] = {params_.s1, params_.s2};
  std::uint64_t stream = 0;
  auto random = [&](int rows, int cols) {
    MatrixXd M(rows, cols);
    const std::uint64_t st = stream++;
    for (int c = 0; c < cols; ++c)
      for (int r = 0; r < rows; ++r) M(r, c) = rng::symmetric(params_.seed, st, static_cast<std::uint64_t>(r + rows * c));
    return M;
  };
  for (int i = 0; i < 2; ++i) {
    const double ni = n[i];
    A_[i].push_back(MatrixXd::Identity(n[i], n[i]) * 2.0 + random(n[i], n[i]) / ni);
    b_[i].push_back(random(n[i], 1).col(0) + VectorXd::Ones(n[i]));
    for (int k = 0; k < s[i]; ++k) {
      A_[i].push_back(random(n[i], n[i]) * (params_.spread / (ni * (k + 1))));
      b_[i].push_back(random(n[i], 1).col(0) * (params_.spread / (k + 1)));
    }
    B_[i] = random(n[i], n[1 - i]) * (params_.coupling / std::sqrt(static_cast<double>(n[1 - i])));
  }
  for (int i = 0; i < 2; ++i) {
    if (params_.identity_gramian) {
      gram_[i] = Gramian::identity(n[i]);
    } else {
      VectorXd d(n[i]);
      for (int r = 0; r < n[i]; ++r) d[r] = 1.0 + 0.5 * rng::unit(params_.seed, stream, r);
      ++stream;
      gram_[i] = Gramian::diagonal(d);
    }
    prob_[i] = std::make_unique<Problem>(*this, i + 1);
  }
}

LinearCoupledModel::~LinearCoupledModel() = default;

const galerkin::ModuleProblem& LinearCoupledModel::module(int i) const {
  if (i != 1 && i != 2) throw std::out_of_range("linear: module index");
  return *prob_[i - 1];
}

const Gramian& LinearCoupledModel::gramian(int i) const {
  if (i != 1 && i != 2) throw std::out_of_range("linear: module index");
  return gram_[i - 1];
}

MatrixXd LinearCoupledModel::A(int i, const double* xi) const {
  const auto& As = A_[i - 1];
  MatrixXd out = As[0];
  for (std::size_t k = 1; k < As.size(); ++k) out += xi[k - 1] * As[k];
  return out;
}

VectorXd LinearCoupledModel::b(int i, const double* xi) const {
  const auto& bs = b_[i - 1];
  VectorXd out = bs[0];
  for (std::size_t k = 1; k < bs.size(); ++k) out += xi[k - 1] * bs[k];
  return out;
}

void LinearCoupledModel::solve(const double* xi1, const double* xi2, VectorXd& u1, VectorXd& u2) const {
  const int n1 = params_.n1, n2 = params_.n2;
  MatrixXd K(n1 + n2, n1 + n2);
  K << A(1, xi1), -B_[0], -B_[1], A(2, xi2);
  VectorXd rhs(n1 + n2);
  rhs << b(1, xi1), b(2, xi2);
  const VectorXd u = K.partialPivLu().solve(rhs);
  u1 = u.head(n1);
  u2 = u.tail(n2);
}

}  // namespace chaoscoupler::models
