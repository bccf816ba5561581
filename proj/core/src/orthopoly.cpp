#include "chaoscoupler/orthopoly.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace chaoscoupler::orthopoly {

PolyFamily::PolyFamily(Distribution dist, int max_degree) : dist_(dist), max_degree_(max_degree) {
  if (max_degree < 0) throw std::invalid_argument("build_family: max_degree must be >= 0");
  if (dist != Distribution::UniformSymmetric) throw std::invalid_argument("build_family: unsupported distribution");
  // Legendre under density 1/2 on [-1,1]: a_n = 0, b_n = n / sqrt(4n^2 - 1).
  // One extra coefficient is kept so rules up to max_degree+1 points can be built.
  a_.assign(max_degree + 2, 0.0);
  b_.assign(max_degree + 2, 0.0);
  for (int n = 1; n <= max_degree + 1; ++n) {
    const double dn = n;
    b_[n] = dn / std::sqrt(4.0 * dn * dn - 1.0);
  }
}

void PolyFamily::eval_all(int deg, double x, double* out) const {
  if (deg < 0 || deg > max_degree_ + 1)
    throw std::out_of_range("eval_family: degree " + std::to_string(deg) + " out of range");
  out[0] = 1.0;
  if (deg == 0) return;
  out[1] = (x - a_[0]) * out[0] / b_[1];
  for (int n = 1; n < deg; ++n) out[n + 1] = ((x - a_[n]) * out[n] - b_[n] * out[n - 1]) / b_[n + 1];
}

void PolyFamily::eval_all(int deg, double x, std::vector<double>& out) const {
  out.resize(deg + 1);
  eval_all(deg, x, out.data());
}

double PolyFamily::eval(int degree, double x) const {
  if (degree < 0 || degree > max_degree_)
    throw std::out_of_range("eval_family: degree " + std::to_string(degree) + " out of range");
  double prev = 0.0, cur = 1.0;
  for (int n = 0; n < degree; ++n) {
    const double next = ((x - a_[n]) * cur - b_[n] * prev) / b_[n + 1];
    prev = cur;
    cur = next;
  }
  return cur;
}

PolyFamily build_family(Distribution dist, int max_degree) { return PolyFamily(dist, max_degree); }

double eval_family(const PolyFamily& family, int degree, double x) { return family.eval(degree, x); }

GaussRule1D gauss_rule(const PolyFamily& family, int q) {
  if (q < 0) throw std::invalid_argument("gauss_rule: level must be >= 0");
  const PolyFamily fam = q > family.max_degree() ? PolyFamily(family.distribution(), q) : family;
  const int n = q + 1;
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) diag(i) = fam.diag()[i];
  for (int i = 0; i + 1 < n; ++i) sub(i) = fam.offdiag()[i + 1];

  GaussRule1D rule;
  rule.level = q;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = 1.0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw std::runtime_error("gauss_rule: Jacobi eigensolve failed");
  for (int i = 0; i < n; ++i) rule.nodes[i] = es.eigenvalues()(i);

  // Newton polish on psi_{q+1}, then Christoffel weights.
  std::vector<double> vals(n + 1);
  for (int i = 0; i < n; ++i) {
    double x = rule.nodes[i];
    for (int it = 0; it < 2; ++it) {
      // derivative via recurrence differentiation
      double p0 = 1.0, p1 = (x - fam.diag()[0]) / fam.offdiag()[1];
      double d0 = 0.0, d1 = 1.0 / fam.offdiag()[1];
      for (int k = 1; k < n; ++k) {
        const double p2 = ((x - fam.diag()[k]) * p1 - fam.offdiag()[k] * p0) / fam.offdiag()[k + 1];
        const double d2 = (p1 + (x - fam.diag()[k]) * d1 - fam.offdiag()[k] * d0) / fam.offdiag()[k + 1];
        p0 = p1; p1 = p2; d0 = d1; d1 = d2;
      }
      if (d1 != 0.0) x -= p1 / d1;
    }
    rule.nodes[i] = x;
  }
  if (family.distribution() == Distribution::UniformSymmetric) {
    for (int i = 0; i < n / 2; ++i) {
      const double s = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
      rule.nodes[i] = -s;
      rule.nodes[n - 1 - i] = s;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    fam.eval_all(q, rule.nodes[i], vals);
    double s = 0.0;
    for (int k = 0; k <= q; ++k) s += vals[k] * vals[k];
    rule.weights[i] = 1.0 / s;
    total += rule.weights[i];
  }
  for (double& w : rule.weights) w /= total;
  if (family.distribution() == Distribution::UniformSymmetric) {
    for (int i = 0; i < n / 2; ++i) {
      const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
      rule.weights[i] = rule.weights[n - 1 - i] = w;
    }
  }
  return rule;
}

}  // namespace chaoscoupler::orthopoly
