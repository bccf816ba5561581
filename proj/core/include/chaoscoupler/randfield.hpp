#pragma once

#include <array>
#include <string>
#include <vector>

namespace chaoscoupler::randfield {

/// Smallest `count` positive roots of l*z + tan(z/2) = 0; root j lies in ((2j-1)pi, (2j+1)pi).
std::vector<double> solve_roots(double l, int count);

/// Univariate mode g_j(x) exactly as printed (j is 1-based), without any renormalization.
double eval_mode(double l, double zeta, int j, double x);

/// Eigenvalue 2l/(1+l^2 z^2) of the 1-D exponential kernel for root z.
double mode_eigenvalue(double l, double zeta);

/// 10^4-point trapezoid L2 norm on [0,1].
double trapezoid_norm(double l, double zeta, int j, int points = 10000);

struct KLField {
  int n = 1;
  double mean = 0.0;
  double delta = 0.0;
  double l = 1.0;
  int s = 0;
  std::vector<double> zeta;                // univariate roots, index j-1
  std::vector<double> scale;               // multiplier applied to g_j after the norm guard
  std::vector<std::array<int, 2>> modes;   // retained tensor indices (1-based); second is 0 when n = 1
  std::vector<double> mode_norm;           // L2(Omega) norm of each retained gamma
  std::vector<std::string> warnings;

  double g(int j, double x) const;
  /// k-th derivative (k = 0, 1, 2) of g_j.
  double g_deriv(int j, double x, int k) const;
  /// gamma_k(x) for retained mode k in [0, s).
  double gamma(int k, const double* x) const;
  /// u(x, xi) = mean + sqrt(3) delta sum_k gamma_k(x) xi_k.
  double eval(const double* x, const double* xi) const;
};

KLField build_field(int n, double mean, double delta, double l, int s);

}  // namespace chaoscoupler::randfield
