#include "chaoscoupler/quadrature.hpp"

#include "chaoscoupler/basis.hpp"

#include <Eigen/QR>

#include <cmath>
#include <stdexcept>

namespace chaoscoupler::quadrature {

TensorRule tensor_rule(const orthopoly::PolyFamily& family, int s, int q, double cap) {
  if (s < 1 || q < 0) throw std::invalid_argument("tensor_rule: need s >= 1 and q >= 0");
  const double count = std::pow(static_cast<double>(q + 1), s);
  if (count > cap) throw std::length_error("rule too large");
  const auto g = orthopoly::gauss_rule(family, q);
  const int Q = static_cast<int>(count);
  TensorRule rule;
  rule.dim = s;
  rule.level = q;
  rule.nodes.resize(s, Q);
  rule.weights.resize(Q);
  std::vector<int> idx(s, 0);
  for (int k = 0; k < Q; ++k) {
    double w = 1.0;
    for (int d = 0; d < s; ++d) {
      rule.nodes(d, k) = g.nodes[idx[d]];
      w *= g.weights[idx[d]];
    }
    rule.weights(k) = w;
    for (int d = s - 1; d >= 0; --d) {
      if (++idx[d] <= q) break;
      idx[d] = 0;
    }
  }
  return rule;
}

Eigen::MatrixXd monomial_vandermonde(const Eigen::MatrixXd& points, int degree) {
  const int d = static_cast<int>(points.rows());
  if (d < 1 || degree < 0) throw std::invalid_argument("monomial_vandermonde: need d >= 1 and D >= 0");
  const basis::MultiIndexSet set(d, degree);
  const Eigen::Index Q = points.cols();
  Eigen::MatrixXd M(set.size(), Q);
  std::vector<double> pw(static_cast<size_t>(d) * (degree + 1));
  for (Eigen::Index k = 0; k < Q; ++k) {
    for (int i = 0; i < d; ++i) {
      double v = 1.0;
      for (int e = 0; e <= degree; ++e) {
        pw[i * (degree + 1) + e] = v;
        v *= points(i, k);
      }
    }
    for (int j = 0; j < set.size(); ++j) {
      const auto& a = set[j];
      double v = 1.0;
      for (int i = 0; i < d; ++i) v *= pw[i * (degree + 1) + a[i]];
      M(j, k) = v;
    }
  }
  return M;
}

namespace {

int numerical_rank(const Eigen::MatrixXd& R) {
  const Eigen::Index k = std::min(R.rows(), R.cols());
  if (k == 0) return 0;
  const double r00 = std::abs(R(0, 0));
  if (!(r00 > 0.0)) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(R(i, i)) < kRankThreshold * r00) break;
    ++r;
  }
  return r;
}

SparseRule one_point(const Eigen::VectorXd& w, int degree) {
  SparseRule rule;
  rule.degree = degree;
  rule.rank = 0;
  rule.degenerate = true;
  rule.weights = Eigen::VectorXd::Zero(w.size());
  if (w.size() > 0) {
    rule.weights(0) = w.sum();
    rule.support = {0};
  }
  return rule;
}

}  // namespace

SparseRule compress_rule(const Eigen::MatrixXd& points, const Eigen::VectorXd& weights, int degree) {
  if (points.cols() != weights.size()) throw std::invalid_argument("compress_rule: point/weight count mismatch");
  if (!points.allFinite() || !weights.allFinite()) throw std::invalid_argument("compress_rule: non-finite input");
  const Eigen::Index Q = weights.size();
  if (Q == 0) throw std::invalid_argument("compress_rule: empty rule");

  const Eigen::MatrixXd Mt = monomial_vandermonde(points, degree).transpose();  // Q x (N+1)
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr1(Mt);
  const Eigen::MatrixXd R1 = qr1.matrixR().template triangularView<Eigen::Upper>();
  const int r = numerical_rank(R1);
  if (r == 0) return one_point(weights, degree);

  Eigen::MatrixXd Qr = Eigen::MatrixXd::Identity(Q, r);
  Qr = qr1.householderQ() * Qr;  // Q x r

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr2(Qr.transpose());  // r x Q
  const Eigen::MatrixXd R2 = qr2.matrixR().topRows(r).template triangularView<Eigen::Upper>();
  const int r2 = numerical_rank(R2);
  if (r2 == 0) return one_point(weights, degree);
  const auto& perm = qr2.colsPermutation();

  const Eigen::VectorXd wp = perm.transpose() * weights;
  const Eigen::VectorXd rhs = R2.topRows(r2) * wp;
  const Eigen::VectorXd x =
      R2.topLeftCorner(r2, r2).template triangularView<Eigen::Upper>().solve(rhs);

  Eigen::VectorXd padded = Eigen::VectorXd::Zero(Q);
  padded.head(r2) = x;
  SparseRule rule;
  rule.degree = degree;
  rule.rank = r;
  rule.weights = perm * padded;
  for (Eigen::Index k = 0; k < Q; ++k)
    if (rule.weights(k) != 0.0) rule.support.push_back(static_cast<int>(k));
  return rule;
}

}  // namespace chaoscoupler::quadrature
