#pragma once

#include "chaoscoupler/basis.hpp"
#include "chaoscoupler/dimreduce.hpp"
#include "chaoscoupler/gramian.hpp"
#include "chaoscoupler/orthopoly.hpp"
#include "chaoscoupler/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <string>
#include <vector>

namespace chaoscoupler::galerkin {

using SpMat = Eigen::SparseMatrix<double>;

/// One module of a coupled system: residual f_i(u_i; u_c, xi_i) and the matrix
/// used for one update u_i <- u_i - J^{-1} f_i (exact Jacobian or a lagged one).
class ModuleProblem {
 public:
  virtual ~ModuleProblem() = default;
  virtual int size() const = 0;
  virtual int coupled_size() const = 0;
  virtual int param_dim() const = 0;
  /// xi_c is the complementary parameter block; it is only supplied by
  /// deterministic solves and may be null.
  virtual void residual(const Eigen::VectorXd& own, const Eigen::VectorXd& coupled, const double* xi,
                        Eigen::VectorXd& r, const double* xi_c = nullptr) const = 0;
  virtual void step_matrix(const Eigen::VectorXd& own, const Eigen::VectorXd& coupled, const double* xi,
                           SpMat& J) const = 0;
};

class CoupledModel {
 public:
  virtual ~CoupledModel() = default;
  virtual std::string name() const = 0;
  virtual const ModuleProblem& module(int i) const = 0;
  virtual const Gramian& gramian(int i) const = 0;
  /// Starting state for deterministic iterations.
  virtual Eigen::VectorXd initial_state(int i) const { return Eigen::VectorXd::Zero(module(i).size()); }
};

struct DeterministicResult {
  Eigen::VectorXd u1, u2;
  int iterations = 0;
  bool converged = false;
  std::vector<double> increments;  // max of the two relative increments per sweep
};

/// Block Gauss-Seidel with one update per module per sweep; stops when both
/// relative G-weighted increments are <= tol.
DeterministicResult deterministic_bgs(const CoupledModel& model, const double* xi1, const double* xi2, double tol,
                                      int max_iter, const Eigen::VectorXd* u1_start = nullptr,
                                      const Eigen::VectorXd* u2_start = nullptr);

struct SolverOptions {
  double tol = 1e-11;      // GMRES relative residual
  int restart = 60;
  int max_iter = 2000;
  int dense_limit = 200;   // direct dense solve when n (P_i+1) is at most this
};

struct ModuleStats {
  int linear_iterations = 0;
  double residual = 0.0;
};

/// Module map acting on modular coefficient matrices: (own, coupled) -> own.
using ModuleMap = std::function<Eigen::MatrixXd(const Eigen::MatrixXd& own, const Eigen::MatrixXd& coupled)>;

/// Galerkin subproblem of one module over its own tensor rule of level q.
class ModuleOperator {
 public:
  ModuleOperator(const ModuleProblem& problem, int p, int q, SolverOptions opts = {});

  const basis::MultiIndexSet& own_set() const { return set_; }
  const quadrature::TensorRule& rule() const { return rule_; }

  /// One update of the Galerkin system sum_q w_q f(U psi_q; C psi_q, xi_q) psi_q^T = 0.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& own, const Eigen::MatrixXd& coupled, ModuleStats* stats = nullptr) const;
  Eigen::MatrixXd operator()(const Eigen::MatrixXd& own, const Eigen::MatrixXd& coupled) const {
    return apply(own, coupled);
  }
  /// Galerkin residual sum_q w_q f_q psi_q^T.
  Eigen::MatrixXd galerkin_residual(const Eigen::MatrixXd& own, const Eigen::MatrixXd& coupled) const;

  /// Optional interface function applied to the module output; identity when empty.
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> post_map;

 private:
  const ModuleProblem* problem_;
  SolverOptions opts_;
  basis::MultiIndexSet set_;
  quadrature::TensorRule rule_;
  Eigen::MatrixXd psi_;  // Q x (P_i+1)
};

/// U^{l+1} = sum_j w_j M(U_own Pi(xi_j); U_cpl Pi(xi_j)) Pi(xi_j)^T over the complementary rule.
Eigen::MatrixXd modular_galerkin_update(int module, const ModuleMap& op, const Eigen::MatrixXd& own,
                                        const Eigen::MatrixXd& coupled, const basis::BasisSplit& split,
                                        const quadrature::TensorRule& comp_rule, const orthopoly::PolyFamily& family);

struct IspOptions {
  int p = 2;
  int q = -1;  // defaults to p
  double eps_bgs = 1e-6;
  int max_iter = 50;
  SolverOptions solver;
  double deterministic_tol = 1e-10;
  int deterministic_max_iter = 200;
};

struct ReducedOptions {
  double eps_dim[2] = {1e-2, 1e-2};
  double eps_ord[2] = {1e-4, 1e-4};
};

struct IterationRecord {
  int iteration = 0;
  int module = 1;
  double increment = 0.0;
  int d = -1;        // -1 in standard mode
  int order = -1;    // reduced order after selection
  int support = 0;   // number of module solves
  double solve_seconds = 0.0;
  double elapsed_seconds = 0.0;
  double trunc_error = 0.0;   // relative dimension truncation error
  double order_error = 0.0;   // relative order selection discrepancy
  Eigen::VectorXd sigma;
};

struct PropagationResult {
  std::string mode;
  Eigen::MatrixXd U1, U2;
  int iterations = 0;
  bool converged = false;
  std::vector<IterationRecord> records;
  double solve_seconds[2] = {0.0, 0.0};
  double total_seconds = 0.0;
  int solves[2] = {0, 0};
  // Final reduced settings (reduced mode).
  int d[2] = {-1, -1};
  int order[2] = {-1, -1};
  int support[2] = {0, 0};
  double eps_dim_term[2] = {0.0, 0.0};
  double eps_ord_term[2] = {0.0, 0.0};
  double final_increment[2] = {0.0, 0.0};
};

/// Initial iterate: zero except column 0 from the deterministic solve at xi = 0.
void initial_iterate(const CoupledModel& model, const basis::BasisSplit& split, const IspOptions& opts,
                     Eigen::MatrixXd& U1, Eigen::MatrixXd& U2);

PropagationResult run_standard_isp(const CoupledModel& model, int s1, int s2, const IspOptions& opts);
PropagationResult run_reduced_isp(const CoupledModel& model, int s1, int s2, const IspOptions& opts,
                                  const ReducedOptions& red);

struct ErrorLedger {
  double eps_bgs = 0.0;
  double eps_gpc = 0.0;
  double eps_dim = 0.0;
  double eps_ord = 0.0;
  double total = 0.0;
  double sum_of_parts() const { return eps_bgs + eps_gpc + eps_dim + eps_ord; }
};

/// Method error terms of a run; eps_gpc compares against a run one order lower
/// (embedded into the same basis) when supplied. `total` is supplied by the caller.
ErrorLedger error_ledger(const PropagationResult& result, const CoupledModel& model, int s1, int s2, int p,
                         const PropagationResult* lower_order, double total);

/// Embed coefficients of order p_from into the global basis of order p_to.
Eigen::MatrixXd embed_order(const Eigen::MatrixXd& U, int s, int p_from, int p_to);

}  // namespace chaoscoupler::galerkin
