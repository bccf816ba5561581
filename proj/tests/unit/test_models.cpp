#include "chaoscoupler/models/boussinesq.hpp"
#include "chaoscoupler/models/mms.hpp"
#include "chaoscoupler/models/thermal_neutronics.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

using namespace chaoscoupler;
using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace mms = models::mms;

namespace {

using Field = std::function<double(double, double)>;
constexpr double kH = 1e-4;

double dx(const Field& f, double x, double y) { return (f(x + kH, y) - f(x - kH, y)) / (2 * kH); }
double dy(const Field& f, double x, double y) { return (f(x, y + kH) - f(x, y - kH)) / (2 * kH); }
double lap(const Field& f, double x, double y) {
  return (f(x + kH, y) + f(x - kH, y) + f(x, y + kH) + f(x, y - kH) - 4 * f(x, y)) / (kH * kH);
}

VectorXd perturbation(int n, double scale) {
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = scale * std::sin(1.3 * i + 0.2);
  return v;
}

// max |J dv - (r(u + dv) - r(u - dv)) / 2| relative to |J dv|.
double jacobian_mismatch(const galerkin::ModuleProblem& prob, const VectorXd& own, const VectorXd& cpl, const double* xi,
                         const double* xi_c) {
  galerkin::SpMat J;
  prob.step_matrix(own, cpl, xi, J);
  const VectorXd dv = perturbation(prob.size(), 1e-6);
  VectorXd rp, rm;
  prob.residual(own + dv, cpl, xi, rp, xi_c);
  prob.residual(own - dv, cpl, xi, rm, xi_c);
  const VectorXd Jd = J * dv;
  return (Jd - 0.5 * (rp - rm)).cwiseAbs().maxCoeff() / Jd.cwiseAbs().maxCoeff();
}

const double kPts[][2] = {{0.13, 0.71}, {0.5, 0.5}, {0.82, 0.27}, {0.31, 0.62}};

}  // namespace

TEST_CASE("thermal-neutronics manufactured sources balance the continuous equations") {
  const double E = 5.8;
  const Field T = mms::tn_T, phi = mms::tn_phi;
  const Field kflux_x = [&](double x, double y) { return std::sqrt(T(x, y) + 1) * dx(phi, x, y); };
  for (const auto& p : kPts) {
    const double x = p[0], y = p[1];
    const double k = std::sqrt(T(x, y) + 1);
    CHECK(std::abs(lap(T, x, y) + E * phi(x, y) / k + mms::tn_fT_base(x, y, E)) < 1e-5);
    // div(k grad phi) with phi depending on x2 only reduces to k phi_yy + k_y phi_y = k phi_yy.
    const double div = k * (phi(x, y + kH) - 2 * phi(x, y) + phi(x, y - kH)) / (kH * kH) +
                       dx(kflux_x, x, y);
    CHECK(std::abs(div + mms::tn_fphi_base(x, y)) < 1e-4);
    CHECK(mms::tn_fphi_coef(x, y) == doctest::Approx(phi(x, y) / k));
  }
}

TEST_CASE("derived Boussinesq sources balance the manufactured fields") {
  const double Pr = 0.71;
  const Field u = mms::bq_u, v = mms::bq_v, p = mms::bq_p;
  const Field Th = [](double, double y) { return 1.0 + 0.3 * std::pow(std::sin(std::numbers::pi * y), 2); };
  const Field t = [&](double x, double y) { return mms::bq_t(x, Th(0, y)); };
  for (const auto& q : kPts) {
    const double x = q[0], y = q[1];
    const double mu = u(x, y) * dx(u, x, y) + v(x, y) * dy(u, x, y) + dx(p, x, y) - Pr * lap(u, x, y);
    const double mv = u(x, y) * dx(v, x, y) + v(x, y) * dy(v, x, y) + dy(p, x, y) - Pr * lap(v, x, y);
    CHECK(std::abs(mu + mms::bq_fu(x, y, Pr)) < 1e-5);
    CHECK(std::abs(mv + mms::bq_fv(x, y, Pr)) < 1e-5);
    const double dTh = dy(Th, 0, y);
    const double d2Th = (Th(0, y + kH) - 2 * Th(0, y) + Th(0, y - kH)) / (kH * kH);
    const double et = u(x, y) * dx(t, x, y) + v(x, y) * dy(t, x, y) - lap(t, x, y);
    CHECK(std::abs(et + mms::bq_fT(x, y, Th(0, y), dTh, d2Th)) < 1e-4);
    CHECK(std::abs(dx(u, x, y) + dy(v, x, y)) < 1e-6);
  }
}

TEST_CASE("printed Boussinesq momentum sources do not balance the manufactured fields") {
  double worst = 0.0;
  for (const auto& q : kPts)
    worst = std::max(worst, std::abs(mms::bq_fu_printed(q[0], q[1], 0.71) - mms::bq_fu(q[0], q[1], 0.71)));
  CHECK(worst > 1.0);
}

TEST_CASE("thermal-neutronics FEM matrices") {
  models::TnParams tp;
  tp.m = 9;
  const models::ThermalNeutronicsModel tn(tp);
  const VectorXd one = VectorXd::Ones(tn.nodes());
  CHECK(one.dot(tn.mass() * one) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK((tn.stiffness() * one).cwiseAbs().maxCoeff() < 1e-12);
  // x1 lies in the bilinear space, so x^T K x = int |grad x1|^2 = 1.
  VectorXd x2(tn.nodes());
  const double h = tn.spacing();
  for (int j = 0; j < tp.m; ++j)
    for (int i = 0; i < tp.m; ++i) x2(i + tp.m * j) = i * h;
  CHECK(x2.dot(tn.stiffness() * x2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("thermal-neutronics flux step matrix is the exact Jacobian") {
  models::TnParams tp;
  tp.m = 7;
  const models::ThermalNeutronicsModel tn(tp);
  const double xi1[3] = {0.2, -0.4, 0.9}, xi2[3] = {-0.7, 0.1, 0.3};
  const VectorXd T = VectorXd::Constant(tn.nodes(), 0.4) + perturbation(tn.nodes(), 0.1);
  const VectorXd phi = VectorXd::Constant(tn.nodes(), 1.5);
  CHECK(jacobian_mismatch(tn.module(2), phi, T, xi2, xi1) < 1e-8);
}

TEST_CASE("thermal-neutronics manufactured solution converges at second order") {
  double err[2];
  for (int k = 0; k < 2; ++k) {
    models::TnParams tp;
    tp.m = k == 0 ? 9 : 17;
    tp.mms = true;
    const models::ThermalNeutronicsModel tn(tp);
    const double xi1[3] = {0.5, -0.3, 0.1}, xi2[3] = {0.2, 0.4, -0.6};
    const auto res = galerkin::deterministic_bgs(tn, xi1, xi2, 1e-11, 200);
    REQUIRE(res.converged);
    err[k] = tn.mms_error(res.u1, res.u2);
  }
  CHECK(std::log(err[0] / err[1]) / std::log(2.0) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("Boussinesq momentum step matrix is the exact Jacobian") {
  models::BoussinesqParams bp;
  bp.m = 6;
  const models::BoussinesqModel bq(bp);
  const int n = bq.cells();
  const double xi1[3] = {0.3, -0.2, 0.5}, xi2[3] = {0.1, 0.6, -0.4};
  const VectorXd u1 = perturbation(3 * n, 0.3);
  const VectorXd t = VectorXd::Constant(n, 0.5) + perturbation(n, 0.1);
  CHECK(jacobian_mismatch(bq.module(1), u1, t, xi1, xi2) < 1e-7);
  CHECK(jacobian_mismatch(bq.module(2), t, u1, xi2, xi1) < 1e-8);
}

TEST_CASE("Boussinesq hot wall and energies") {
  models::BoussinesqParams bp;
  bp.m = 8;
  const models::BoussinesqModel bq(bp);
  const double zero[3] = {0, 0, 0};
  CHECK(bq.hot_wall(0.3, zero) == doctest::Approx(bp.Th_bar));
  const double xi2[3] = {0.5, -0.5, 0.2};
  const double y = 0.4, h = 1e-5;
  CHECK(bq.hot_wall(y, xi2, 1) == doctest::Approx((bq.hot_wall(y + h, xi2) - bq.hot_wall(y - h, xi2)) / (2 * h)).epsilon(1e-6));
  const int n = bq.cells();
  CHECK(bq.thermal_energy(VectorXd::Ones(n)) == doctest::Approx(1.0));
  CHECK(bq.kinetic_energy(VectorXd::Ones(3 * n)) == doctest::Approx(1.0));
}

TEST_CASE("Boussinesq nominal case converges and its manufactured error decreases") {
  models::BoussinesqParams bp;
  bp.m = 12;
  const models::BoussinesqModel bq(bp);
  const double zero[3] = {0, 0, 0};
  const auto res = galerkin::deterministic_bgs(bq, zero, zero, 1e-8, 100);
  CHECK(res.converged);
  CHECK(res.iterations <= 15);
  double err[2];
  for (int k = 0; k < 2; ++k) {
    models::BoussinesqParams mp;
    mp.m = k == 0 ? 8 : 16;
    mp.mms = true;
    const models::BoussinesqModel mm(mp);
    const double xi1[3] = {0.2, -0.1, 0.3}, xi2[3] = {0.4, 0.1, -0.2};
    const auto r = galerkin::deterministic_bgs(mm, xi1, xi2, 1e-10, 200);
    REQUIRE(r.converged);
    err[k] = mm.mms_error(r.u1, r.u2, xi2);
  }
  CHECK(err[1] < err[0] / 2.5);
}
