#include "chaoscoupler/models/mms.hpp"

#include <cmath>
#include <numbers>

namespace chaoscoupler::models::mms {

namespace {
constexpr double pi = std::numbers::pi;
double sq(double x) { return x * x; }
}  // namespace

double tn_T(double x1, double) { return sq(2.0 + std::cos(pi * x1)) - 1.0; }
double tn_phi(double, double x2) { return 3.0 + std::cos(2.0 * pi * x2); }

double tn_fT_base(double x1, double x2, double E) {
  return 2.0 * pi * pi * (2.0 * std::cos(pi * x1) + std::cos(2.0 * pi * x1)) -
         E * (3.0 + std::cos(2.0 * pi * x2)) / (2.0 + std::cos(pi * x1));
}

double tn_fphi_base(double x1, double x2) { return 4.0 * pi * pi * (2.0 + std::cos(pi * x1)) * std::cos(2.0 * pi * x2); }
double tn_fphi_coef(double x1, double x2) { return (3.0 + std::cos(2.0 * pi * x2)) / (2.0 + std::cos(pi * x1)); }

double bq_u(double x1, double x2) { return -sq(std::sin(pi * x1)) * std::sin(2.0 * pi * x2); }
double bq_v(double x1, double x2) { return std::sin(2.0 * pi * x1) * sq(std::sin(pi * x2)); }
double bq_p(double x1, double x2) { return std::cos(pi * x1) * std::cos(pi * x2); }
double bq_t(double x1, double Th) { return std::cos(0.5 * pi * x1) * Th; }

double bq_fu(double x1, double x2, double Pr) {
  const double s1 = std::sin(pi * x1), c1 = std::cos(pi * x1);
  const double s2 = std::sin(pi * x2), c2 = std::cos(pi * x2);
  return pi * s1 * c2 + 4.0 * pi * pi * Pr * s2 * c2 * (4.0 * s1 * s1 - 1.0) - 4.0 * pi * s1 * s1 * s1 * c1 * s2 * s2;
}

double bq_fv(double x1, double x2, double Pr) {
  const double s1 = std::sin(pi * x1), c1 = std::cos(pi * x1);
  const double s2 = std::sin(pi * x2), c2 = std::cos(pi * x2);
  return pi * s2 * c1 - 4.0 * pi * pi * Pr * s1 * c1 * (4.0 * s2 * s2 - 1.0) - 4.0 * pi * s1 * s1 * s2 * s2 * s2 * c2;
}

double bq_fT(double x1, double x2, double Th, double dTh, double d2Th) {
  const double ch = std::cos(0.5 * pi * x1), sh = std::sin(0.5 * pi * x1);
  return -0.5 * pi * (sq(std::sin(pi * x1)) * std::sin(2.0 * pi * x2) * sh + 0.5 * pi * ch) * Th -
         std::sin(2.0 * pi * x1) * ch * sq(std::sin(pi * x2)) * dTh + ch * d2Th;
}

double bq_fu_printed(double x1, double x2, double Pr) {
  const double a = std::sin(2.0 * pi * x1) * sq(std::sin(pi * x1)) * sq(std::sin(2.0 * pi * x2));
  return 2.0 * pi * a - pi * (a - std::sin(pi * x1) * std::cos(pi * x2)) +
         2.0 * pi * pi * Pr *
             (std::cos(2.0 * pi * x1) * std::sin(2.0 * pi * x2) - 2.0 * sq(std::sin(pi * x1)) * std::sin(2.0 * pi * x2));
}

double bq_fv_printed(double x1, double x2, double Pr) {
  const double a = std::sin(2.0 * pi * x2) * sq(std::sin(pi * x2)) * sq(std::sin(2.0 * pi * x1));
  return 2.0 * pi * a - pi * (a - std::sin(pi * x2) * std::cos(pi * x1)) +
         2.0 * pi * pi * Pr *
             (-std::cos(2.0 * pi * x2) * std::sin(2.0 * pi * x1) + 2.0 * sq(std::sin(pi * x2)) * std::sin(2.0 * pi * x1));
}

}  // namespace chaoscoupler::models::mms
