#pragma once

#include <vector>

namespace chaoscoupler::orthopoly {

enum class Distribution { UniformSymmetric };

/// Orthonormal polynomial family for one coordinate direction, defined by a
/// three-term recurrence  xi psi_n = b_{n+1} psi_{n+1} + a_n psi_n + b_n psi_{n-1}.
class PolyFamily {
 public:
  PolyFamily() = default;
  PolyFamily(Distribution dist, int max_degree);

  Distribution distribution() const { return dist_; }
  int max_degree() const { return max_degree_; }

  /// a_n, n = 0..max_degree
  const std::vector<double>& diag() const { return a_; }
  /// b_n, n = 1..max_degree+1 stored at index n (b_0 unused)
  const std::vector<double>& offdiag() const { return b_; }

  double eval(int degree, double x) const;
  /// psi_0..psi_deg at x, written into out (resized).
  void eval_all(int deg, double x, std::vector<double>& out) const;
  void eval_all(int deg, double x, double* out) const;

 private:
  Distribution dist_ = Distribution::UniformSymmetric;
  int max_degree_ = 0;
  std::vector<double> a_;
  std::vector<double> b_;
};

struct GaussRule1D {
  int level = 0;
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // sum to 1
};

PolyFamily build_family(Distribution dist, int max_degree);
double eval_family(const PolyFamily& family, int degree, double x);

/// Golub-Welsch rule with q+1 points, exact through degree 2q+1.
GaussRule1D gauss_rule(const PolyFamily& family, int q);

}  // namespace chaoscoupler::orthopoly
