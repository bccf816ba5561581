#pragma once

#include "chaoscoupler/galerkin.hpp"
#include "chaoscoupler/randfield.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>

namespace chaoscoupler::models {

struct TnParams {
  int m = 21;  // nodes per side
  int s1 = 3;
  int s2 = 3;
  double H_bar = 17.0;
  double E = 5.8;
  double Sigma_bar = 13.6;
  double S = 22.7;
  double delta_H = 9.0;
  double delta_Sigma = 9.0;
  double l_H = 0.15;
  double l_Sigma = 0.5;
  bool mms = false;
  bool identity_gramian = false;
};

/// Bilinear FEM discretization on m x m nodes with homogeneous Neumann
/// boundaries. Module 1 is the nodal temperature, module 2 the nodal flux.
/// Node (i, j) sits at (i h, j h) with index i + m j.
class ThermalNeutronicsModel : public galerkin::CoupledModel {
 public:
  explicit ThermalNeutronicsModel(const TnParams& params);
  ~ThermalNeutronicsModel() override;

  std::string name() const override { return "thermal_neutronics"; }
  const galerkin::ModuleProblem& module(int i) const override;
  const Gramian& gramian(int i) const override;

  const TnParams& params() const { return params_; }
  int nodes() const { return params_.m * params_.m; }
  double spacing() const { return h_; }
  const randfield::KLField& field_H() const { return field_H_; }
  const randfield::KLField& field_Sigma() const { return field_S_; }
  const galerkin::SpMat& mass() const { return mass_; }
  const galerkin::SpMat& stiffness() const { return stiff_; }

  /// Nodal values of the manufactured solution.
  Eigen::VectorXd exact_T() const;
  Eigen::VectorXd exact_phi() const;
  /// Relative L2(Omega) error of the FE fields against the manufactured solution.
  double mms_error(const Eigen::VectorXd& T, const Eigen::VectorXd& phi) const;

  // Element quadrature data, used by the module problems.
  struct Quad {
    int points = 0;                 // 4 per element
    Eigen::Matrix2Xd x;             // coordinates
    Eigen::VectorXd w;              // weights including the Jacobian
    Eigen::Matrix4Xd N;             // shape values
    Eigen::Matrix<double, 8, Eigen::Dynamic> dN;  // (dN_a/dx1, dN_a/dx2) for a = 0..3
    Eigen::Matrix4Xi node;          // element node indices per point
  };
  const Quad& quad() const { return quad_; }
  /// Assemble sum_g (k_g grad N_a . grad N_b + c_g N_a N_b) w_g on the fixed pattern.
  galerkin::SpMat assemble(const Eigen::VectorXd& k, const Eigen::VectorXd& c) const;
  /// Interpolate a nodal vector at the quadrature points.
  Eigen::VectorXd interpolate(const Eigen::VectorXd& u) const;

 private:
  class TempProblem;
  class FluxProblem;

  TnParams params_;
  double h_;
  randfield::KLField field_H_, field_S_;
  Quad quad_;
  Eigen::MatrixXd H_modes_, S_modes_;  // s x points, sqrt(3) delta gamma_k
  Eigen::VectorXd fT_base_, fphi_base_, fphi_coef_, T_star_;
  galerkin::SpMat pattern_, mass_, stiff_;
  std::vector<int> slot_;  // 16 per element: value index of (a, b)
  Gramian gram_[2];
  std::unique_ptr<TempProblem> temp_;
  std::unique_ptr<FluxProblem> flux_;
};

}  // namespace chaoscoupler::models
