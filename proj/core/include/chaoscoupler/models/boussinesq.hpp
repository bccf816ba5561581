#pragma once

#include "chaoscoupler/galerkin.hpp"
#include "chaoscoupler/randfield.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>

namespace chaoscoupler::models {

struct BoussinesqParams {
  int m = 25;  // cells per side
  int s1 = 3;
  int s2 = 3;
  double Pr = 0.71;
  double Ra_bar = 1000.0;
  double Th_bar = 1.0;
  double delta_Ra = 200.0;
  double delta_h = 0.5;
  double l_Ra = 0.5;
  double l_h = 0.5;
  bool mms = false;
  bool identity_gramian = false;
};

/// Cell-centred finite volumes on m x m cells with central differences.
/// Module 1 is [u; v; p], module 2 the temperature; cell (i, j) has index i + m j.
/// The pressure Poisson equation closes the momentum module, with one cell pinned.
class BoussinesqModel : public galerkin::CoupledModel {
 public:
  explicit BoussinesqModel(const BoussinesqParams& params);
  ~BoussinesqModel() override;

  std::string name() const override { return "boussinesq"; }
  const galerkin::ModuleProblem& module(int i) const override;
  const Gramian& gramian(int i) const override;

  const BoussinesqParams& params() const { return params_; }
  int cells() const { return params_.m * params_.m; }
  double spacing() const { return h_; }
  const randfield::KLField& field_Ra() const { return field_Ra_; }
  const randfield::KLField& field_h() const { return field_h_; }

  /// Hot-wall temperature T_h(x2) and its first two derivatives.
  double hot_wall(double x2, const double* xi2, int derivative = 0) const;

  /// Midpoint-rule energies K = 1/2 int |u|^2 and E = int T.
  double kinetic_energy(const Eigen::VectorXd& u1) const;
  double thermal_energy(const Eigen::VectorXd& t) const;

  /// Relative error of (u, v, p, t) against the manufactured fields at cell centres.
  double mms_error(const Eigen::VectorXd& u1, const Eigen::VectorXd& t, const double* xi2) const;

 private:
  class MomentumProblem;
  class EnergyProblem;
  friend class MomentumProblem;
  friend class EnergyProblem;

  double hot_row(int j, const double* xi2, int derivative) const;
  double compose_hot_wall(double x2, const double* hv, int derivative) const;

  BoussinesqParams params_;
  double h_;
  randfield::KLField field_Ra_, field_h_;
  Eigen::VectorXd xc_, yc_;                   // cell centres
  Eigen::MatrixXd Ra_modes_;                  // s1 x cells
  Eigen::MatrixXd h_modes_[3];                // s2 x m, derivatives 0..2 of the wall perturbation
  galerkin::SpMat Gx0_, Gy0_, Lap0_;          // Dirichlet-zero velocity stencils
  galerkin::SpMat Gxp_, Gyp_, Lp_;            // Neumann pressure stencils
  galerkin::SpMat Dx_, Dy_;                   // face-average divergence over interior faces
  galerkin::SpMat Wx_, Wy_;                   // wall flux -Pr n . curl curl u: x walls (from v), y walls (from u)
  galerkin::SpMat GxT_, GyT_, LapT_;          // temperature stencils
  Eigen::VectorXd fu_, fv_;                   // manufactured momentum sources without buoyancy
  Gramian gram_[2];
  std::unique_ptr<MomentumProblem> mom_;
  std::unique_ptr<EnergyProblem> energy_;
};

}  // namespace chaoscoupler::models
