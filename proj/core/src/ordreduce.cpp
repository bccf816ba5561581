#include "chaoscoupler/ordreduce.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chaoscoupler::ordreduce {

Eigen::VectorXd ReducedBasis::eval(const Eigen::VectorXd& theta) const {
  if (theta.size() != d) throw std::invalid_argument("ReducedBasis::eval: dimension mismatch");
  const Eigen::MatrixXd m = quadrature::monomial_vandermonde(theta, order);
  return transform * m.col(0);
}

ReducedBasis build_reduced_basis(const Eigen::MatrixXd& thetas, const Eigen::VectorXd& weights, int order) {
  if (thetas.rows() < 1 || order < 0) throw std::invalid_argument("build_reduced_basis: need d >= 1 and order >= 0");
  if (thetas.cols() != weights.size()) throw std::invalid_argument("build_reduced_basis: node/weight mismatch");
  ReducedBasis rb;
  rb.d = static_cast<int>(thetas.rows());
  rb.order = order;
  rb.monomials = basis::MultiIndexSet(rb.d, order);
  const Eigen::MatrixXd M = quadrature::monomial_vandermonde(thetas, order);
  const Eigen::MatrixXd H = M * weights.asDiagonal() * M.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
  if (es.info() != Eigen::Success) throw std::runtime_error("build_reduced_basis: eigen-decomposition failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  Eigen::MatrixXd V = es.eigenvectors();

  std::vector<int> idx(lam.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return std::abs(lam(a)) > std::abs(lam(b)); });
  const double top = lam.size() ? std::abs(lam(idx[0])) : 0.0;
  int r = 0;
  while (r < static_cast<int>(idx.size()) && std::abs(lam(idx[r])) > kMomentRankThreshold * top) ++r;
  rb.rank_deficient = r < static_cast<int>(idx.size());

  rb.transform.resize(r, M.rows());
  rb.signature.resize(r);
  for (int k = 0; k < r; ++k) {
    Eigen::VectorXd v = V.col(idx[k]);
    Eigen::Index imax;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    const double l = lam(idx[k]);
    rb.signature(k) = l > 0.0 ? 1.0 : -1.0;
    rb.transform.row(k) = v.transpose() / std::sqrt(std::abs(l));
  }
  rb.table = rb.transform * M;
  return rb;
}

Eigen::MatrixXd cholesky_basis_table(const Eigen::MatrixXd& thetas, const Eigen::VectorXd& weights, int order) {
  const Eigen::MatrixXd M = quadrature::monomial_vandermonde(thetas, order);
  const Eigen::MatrixXd H = M * weights.asDiagonal() * M.transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(H);
  if (llt.info() != Eigen::Success) throw std::runtime_error("cholesky_basis_table: moment matrix not positive definite");
  return llt.matrixL().solve(M);
}

Eigen::MatrixXd reduced_project(const Eigen::MatrixXd& samples, const ReducedBasis& rb,
                                const quadrature::SparseRule& rule) {
  if (samples.cols() != rule.size()) throw std::invalid_argument("reduced_project: sample count must match support");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(samples.rows(), rb.size());
  for (int z = 0; z < rule.size(); ++z) {
    const int node = rule.support[z];
    const Eigen::VectorXd coef = rule.weights(node) * rb.signature.cwiseProduct(rb.table.col(node));
    out.noalias() += samples.col(z) * coef.transpose();
  }
  return out;
}

Eigen::MatrixXd lift_to_global(const std::vector<Eigen::MatrixXd>& solutions, const ReducedBasis& rb,
                               const quadrature::SparseRule& rule, const Eigen::VectorXd& parent_weights,
                               const std::vector<basis::PiMatrix>& pis) {
  if (static_cast<int>(solutions.size()) != rule.size())
    throw std::invalid_argument("lift_to_global: one modular solution per support node required");
  if (solutions.empty()) throw std::invalid_argument("lift_to_global: empty support");
  if (static_cast<Eigen::Index>(pis.size()) != parent_weights.size() || rb.table.cols() != parent_weights.size())
    throw std::invalid_argument("lift_to_global: parent rule mismatch");
  const Eigen::Index n = solutions[0].rows();
  const Eigen::Index pm = solutions[0].cols();
  const int r = rb.size();

  // Stage one: reduced coefficients, one modular block per reduced basis function.
  std::vector<Eigen::MatrixXd> C(r, Eigen::MatrixXd::Zero(n, pm));
  for (int z = 0; z < rule.size(); ++z) {
    const int node = rule.support[z];
    for (int a = 0; a < r; ++a) {
      const double c = rule.weights(node) * rb.signature(a) * rb.table(a, node);
      if (c != 0.0) C[a].noalias() += c * solutions[z];
    }
  }

  // Stage two: contract over the parent rule with Pi^T.
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, pis[0].rows());
  Eigen::MatrixXd Ut(n, pm);
  for (Eigen::Index j = 0; j < parent_weights.size(); ++j) {
    Ut.setZero();
    for (int a = 0; a < r; ++a) Ut.noalias() += rb.table(a, j) * C[a];
    pis[j].accumulate_transpose(Ut, parent_weights(j), out);
  }
  return out;
}

int select_order(int prev, const Eigen::MatrixXd& U0, const Eigen::MatrixXd& U1, const Gramian& G, double eps) {
  if (U0.rows() != U1.rows() || U0.cols() != U1.cols()) throw std::invalid_argument("select_order: shape mismatch");
  return G.norm(U1 - U0) > eps * G.norm(U1) ? prev + 1 : prev;
}

}  // namespace chaoscoupler::ordreduce
