#pragma once

namespace chaoscoupler::models::mms {

// Thermal-neutronics manufactured solution.
double tn_T(double x1, double x2);
double tn_phi(double x1, double x2);
/// f_T* = tn_fT_base + H_T * T*.
double tn_fT_base(double x1, double x2, double E);
/// f_phi* = tn_fphi_base + Sigma * tn_fphi_coef.
double tn_fphi_base(double x1, double x2);
double tn_fphi_coef(double x1, double x2);

// Boussinesq manufactured solution; t* = cos(pi x1 / 2) T_h(x2).
double bq_u(double x1, double x2);
double bq_v(double x1, double x2);
double bq_p(double x1, double x2);
double bq_t(double x1, double Th);

/// Momentum sources derived from the manufactured fields; the buoyancy part
/// Pr Ra t* e2 is added by the caller.
double bq_fu(double x1, double x2, double Pr);
double bq_fv(double x1, double x2, double Pr);
/// Energy source given T_h and its first two derivatives in x2.
double bq_fT(double x1, double x2, double Th, double dTh, double d2Th);

/// Momentum sources in the printed closed form, without buoyancy. They do not
/// balance the manufactured fields and are kept only for comparison.
double bq_fu_printed(double x1, double x2, double Pr);
double bq_fv_printed(double x1, double x2, double Pr);

}  // namespace chaoscoupler::models::mms
