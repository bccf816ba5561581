#include "chaoscoupler/randfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace chaoscoupler::randfield {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNormTol = 1.0e-6;

double kl_residual(double l, double z) { return l * z + std::tan(0.5 * z); }

}  // namespace

std::vector<double> solve_roots(double l, int count) {
  if (!(l > 0.0) || count < 1) throw std::invalid_argument("solve_roots: need l > 0 and count >= 1");
  std::vector<double> roots;
  roots.reserve(count);
  for (int j = 1; j <= count; ++j) {
    // f runs from -inf to +inf across the bracket and is increasing.
    const double span = 2.0 * kPi;
    double lo = (2 * j - 1) * kPi + 1e-14 * span;
    double hi = (2 * j + 1) * kPi - 1e-14 * span;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      mid = 0.5 * (lo + hi);
      const double f = kl_residual(l, mid);
      if (std::abs(f) <= 1e-12 || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * mid) break;
      (f < 0.0 ? lo : hi) = mid;
    }
    roots.push_back(mid);
  }
  return roots;
}

double eval_mode(double l, double zeta, int j, double x) {
  const double amp = 2.0 * std::sqrt(l * zeta / (1.0 + l * l * zeta * zeta));
  if (j % 2 == 1) return amp * std::cos(zeta * x) / std::sqrt(zeta + std::sin(zeta));
  return amp * std::sin(zeta * x) / std::sqrt(zeta - std::sin(zeta));
}

double mode_eigenvalue(double l, double zeta) { return 2.0 * l / (1.0 + l * l * zeta * zeta); }

double trapezoid_norm(double l, double zeta, int j, int points) {
  const double h = 1.0 / (points - 1);
  double acc = 0.0;
  for (int i = 0; i < points; ++i) {
    const double g = eval_mode(l, zeta, j, i * h);
    acc += (i == 0 || i == points - 1 ? 0.5 : 1.0) * g * g;
  }
  return std::sqrt(acc * h);
}

double KLField::g(int j, double x) const { return scale[j - 1] * eval_mode(l, zeta[j - 1], j, x); }

double KLField::g_deriv(int j, double x, int k) const {
  const double z = zeta[j - 1];
  const double amp = scale[j - 1] * 2.0 * std::sqrt(l * z / (1.0 + l * l * z * z));
  const bool odd = j % 2 == 1;
  const double a = odd ? amp / std::sqrt(z + std::sin(z)) : amp / std::sqrt(z - std::sin(z));
  switch (k) {
    case 0: return odd ? a * std::cos(z * x) : a * std::sin(z * x);
    case 1: return odd ? -a * z * std::sin(z * x) : a * z * std::cos(z * x);
    case 2: return -z * z * (odd ? a * std::cos(z * x) : a * std::sin(z * x));
    default: throw std::invalid_argument("g_deriv: derivative order must be 0, 1 or 2");
  }
}

double KLField::gamma(int k, const double* x) const {
  const auto& m = modes[k];
  double v = g(m[0], x[0]);
  if (n == 2) v *= g(m[1], x[1]);
  return v;
}

double KLField::eval(const double* x, const double* xi) const {
  double acc = 0.0;
  for (int k = 0; k < s; ++k) acc += gamma(k, x) * xi[k];
  return mean + std::sqrt(3.0) * delta * acc;
}

KLField build_field(int n, double mean, double delta, double l, int s) {
  if (n != 1 && n != 2) throw std::invalid_argument("build_field: n must be 1 or 2");
  if (s < 1) throw std::invalid_argument("build_field: s must be >= 1");
  KLField f;
  f.n = n;
  f.mean = mean;
  f.delta = delta;
  f.l = l;
  f.s = s;
  f.zeta = solve_roots(l, s);

  // The printed modes carry sqrt(eigenvalue); the guard checks the eigenfunction factor for unit norm.
  std::vector<double> norm1(s);
  f.scale.assign(s, 1.0);
  for (int j = 1; j <= s; ++j) {
    const double lam = mode_eigenvalue(l, f.zeta[j - 1]);
    const double e = trapezoid_norm(l, f.zeta[j - 1], j) / std::sqrt(lam);
    if (std::abs(e - 1.0) > kNormTol) {
      f.scale[j - 1] = 1.0 / e;
      std::ostringstream msg;
      msg << "mode " << j << " eigenfunction norm " << e << " renormalized (l=" << l << ")";
      f.warnings.push_back(msg.str());
    }
    norm1[j - 1] = f.scale[j - 1] * trapezoid_norm(l, f.zeta[j - 1], j);
  }

  struct Cand { std::array<int, 2> idx; double norm; };
  std::vector<Cand> cand;
  if (n == 1) {
    for (int j = 1; j <= s; ++j) cand.push_back({{j, 0}, norm1[j - 1]});
  } else {
    for (int a = 1; a <= s; ++a)
      for (int b = 1; b <= s; ++b) cand.push_back({{a, b}, norm1[a - 1] * norm1[b - 1]});
  }
  std::stable_sort(cand.begin(), cand.end(), [](const Cand& x, const Cand& y) {
    if (x.norm != y.norm) return x.norm > y.norm;
    const int dx = x.idx[0] + x.idx[1], dy = y.idx[0] + y.idx[1];
    if (dx != dy) return dx < dy;
    return x.idx < y.idx;
  });
  for (int k = 0; k < s; ++k) {
    f.modes.push_back(cand[k].idx);
    f.mode_norm.push_back(cand[k].norm);
  }
  return f;
}

}  // namespace chaoscoupler::randfield
