#include "chaoscoupler/galerkin.hpp"

#include "chaoscoupler/ordreduce.hpp"
#include "chaoscoupler/parallel.hpp"

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace chaoscoupler::galerkin {
class GalerkinOp;
}

namespace Eigen::internal {
template <>
struct traits<chaoscoupler::galerkin::GalerkinOp> : public traits<SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace chaoscoupler::galerkin {

/// Matrix-free operator D -> sum_q w_q J_q D psi_q psi_q^T on vec(D).
class GalerkinOp : public Eigen::EigenBase<GalerkinOp> {
 public:
  using Scalar = double;
  using RealScalar = double;
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic, IsRowMajor = false };

  GalerkinOp(const std::vector<SpMat>& J, const Eigen::MatrixXd& psi, const Eigen::VectorXd& w, int n)
      : J_(&J), psi_(&psi), w_(&w), n_(n) {}

  Eigen::Index rows() const { return static_cast<Eigen::Index>(n_) * psi_->cols(); }
  Eigen::Index cols() const { return rows(); }

  template <typename Rhs>
  Eigen::Product<GalerkinOp, Rhs, Eigen::AliasFreeProduct> operator*(const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<GalerkinOp, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }

  void apply(const double* x, double* y) const {
    const Eigen::Index P = psi_->cols();
    Eigen::Map<const Eigen::MatrixXd> X(x, n_, P);
    const Eigen::MatrixXd V = X * psi_->transpose();
    Eigen::MatrixXd Y(n_, V.cols());
    for (Eigen::Index q = 0; q < V.cols(); ++q) Y.col(q).noalias() = (*w_)(q) * ((*J_)[q] * V.col(q));
    Eigen::Map<Eigen::MatrixXd>(y, n_, P).noalias() = Y * (*psi_);
  }

 private:
  const std::vector<SpMat>* J_;
  const Eigen::MatrixXd* psi_;
  const Eigen::VectorXd* w_;
  int n_;
};

/// Block-diagonal preconditioner with the quadrature mean of the module matrices.
class MeanPreconditioner {
 public:
  using Scalar = double;
  using StorageIndex = int;
  MeanPreconditioner() = default;
  template <typename M> explicit MeanPreconditioner(const M&) {}
  template <typename M> MeanPreconditioner& analyzePattern(const M&) { return *this; }
  template <typename M> MeanPreconditioner& factorize(const M&) { return *this; }
  template <typename M> MeanPreconditioner& compute(const M&) { return *this; }
  Eigen::ComputationInfo info() { return Eigen::Success; }

  void set(const Eigen::SparseLU<SpMat>* lu, int n, int P) {
    lu_ = lu;
    n_ = n;
    P_ = P;
  }

  template <typename Rhs>
  Eigen::VectorXd solve(const Rhs& b) const {
    const Eigen::VectorXd bv = b;
    Eigen::Map<const Eigen::MatrixXd> B(bv.data(), n_, P_);
    Eigen::MatrixXd X = lu_->solve(B);
    return Eigen::Map<Eigen::VectorXd>(X.data(), X.size());
  }

 private:
  const Eigen::SparseLU<SpMat>* lu_ = nullptr;
  int n_ = 0;
  int P_ = 0;
};

}  // namespace chaoscoupler::galerkin

namespace Eigen::internal {
template <typename Rhs>
struct generic_product_impl<chaoscoupler::galerkin::GalerkinOp, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<chaoscoupler::galerkin::GalerkinOp, Rhs,
                                generic_product_impl<chaoscoupler::galerkin::GalerkinOp, Rhs>> {
  using Scalar = typename Product<chaoscoupler::galerkin::GalerkinOp, Rhs>::Scalar;
  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const chaoscoupler::galerkin::GalerkinOp& lhs, const Rhs& rhs,
                            const Scalar& alpha) {
    const Eigen::VectorXd x = rhs;
    Eigen::VectorXd y(x.size());
    lhs.apply(x.data(), y.data());
    dst += alpha * y;
  }
};
}  // namespace Eigen::internal

namespace chaoscoupler::galerkin {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel_increment(const Gramian& G, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double diff = G.norm(a - b);
  const double ref = G.norm(a);
  if (ref == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / ref;
}

Eigen::VectorXd module_step(const ModuleProblem& prob, const Eigen::VectorXd& own, const Eigen::VectorXd& cpl,
                            const double* xi, const double* xi_c) {
  Eigen::VectorXd r;
  SpMat J;
  prob.residual(own, cpl, xi, r, xi_c);
  prob.step_matrix(own, cpl, xi, J);
  Eigen::SparseLU<SpMat> lu;
  lu.compute(J);
  if (lu.info() != Eigen::Success) throw std::runtime_error("module matrix is singular");
  return own - lu.solve(r);
}

}  // namespace

DeterministicResult deterministic_bgs(const CoupledModel& model, const double* xi1, const double* xi2, double tol,
                                      int max_iter, const Eigen::VectorXd* u1_start,
                                      const Eigen::VectorXd* u2_start) {
  DeterministicResult res;
  res.u1 = u1_start ? *u1_start : model.initial_state(1);
  res.u2 = u2_start ? *u2_start : model.initial_state(2);
  const auto& m1 = model.module(1);
  const auto& m2 = model.module(2);
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd u1n = module_step(m1, res.u1, res.u2, xi1, xi2);
    Eigen::VectorXd u2n = module_step(m2, res.u2, u1n, xi2, xi1);
    const double i1 = rel_increment(model.gramian(1), u1n, res.u1);
    const double i2 = rel_increment(model.gramian(2), u2n, res.u2);
    res.u1 = std::move(u1n);
    res.u2 = std::move(u2n);
    res.iterations = it;
    res.increments.push_back(std::max(i1, i2));
    if (!std::isfinite(i1) && !std::isfinite(i2)) break;
    if (i1 <= tol && i2 <= tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

ModuleOperator::ModuleOperator(const ModuleProblem& problem, int p, int q, SolverOptions opts)
    : problem_(&problem), opts_(opts) {
  if (q < p) throw std::invalid_argument("ModuleOperator: level q must be >= p");
  const int s = problem.param_dim();
  const auto family = orthopoly::build_family(orthopoly::Distribution::UniformSymmetric, std::max(p, q));
  set_ = basis::MultiIndexSet(s, p);
  rule_ = quadrature::tensor_rule(family, s, q);
  psi_ = basis::eval_basis_table(set_, family, rule_.nodes);
}

Eigen::MatrixXd ModuleOperator::galerkin_residual(const Eigen::MatrixXd& own, const Eigen::MatrixXd& coupled) const {
  const Eigen::MatrixXd Un = own * psi_.transpose();
  const Eigen::MatrixXd Cn = coupled * psi_.transpose();
  Eigen::MatrixXd R(own.rows(), rule_.size());
  Eigen::VectorXd r;
  for (int q = 0; q < rule_.size(); ++q) {
    problem_->residual(Un.col(q), Cn.col(q), rule_.nodes.col(q).data(), r);
    R.col(q) = r;
  }
  return R * rule_.weights.asDiagonal() * psi_;
}

Eigen::MatrixXd ModuleOperator::apply(const Eigen::MatrixXd& own, const Eigen::MatrixXd& coupled,
                                      ModuleStats* stats) const {
  const int n = problem_->size();
  const int P = set_.size();
  const int Q = rule_.size();
  if (own.rows() != n || own.cols() != P) throw std::invalid_argument("ModuleOperator: own coefficient shape mismatch");
  if (coupled.rows() != problem_->coupled_size() || coupled.cols() != P)
    throw std::invalid_argument("ModuleOperator: coupled coefficient shape mismatch");

  const Eigen::MatrixXd Un = own * psi_.transpose();
  const Eigen::MatrixXd Cn = coupled * psi_.transpose();
  Eigen::MatrixXd R(n, Q);
  std::vector<SpMat> J(Q);
  Eigen::VectorXd r;
  for (int q = 0; q < Q; ++q) {
    const double* xi = rule_.nodes.col(q).data();
    problem_->residual(Un.col(q), Cn.col(q), xi, r);
    R.col(q) = r;
    problem_->step_matrix(Un.col(q), Cn.col(q), xi, J[q]);
  }
  const Eigen::MatrixXd F = R * rule_.weights.asDiagonal() * psi_;
  Eigen::MatrixXd delta(n, P);

  if (static_cast<long>(n) * P <= opts_.dense_limit) {
    const int N = n * P;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
    for (int q = 0; q < Q; ++q) {
      const double w = rule_.weights(q);
      for (int k = 0; k < J[q].outerSize(); ++k)
        for (SpMat::InnerIterator it(J[q], k); it; ++it)
          for (int a = 0; a < P; ++a)
            for (int b = 0; b < P; ++b)
              A(a * n + it.row(), b * n + it.col()) += w * psi_(q, a) * psi_(q, b) * it.value();
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(F.data(), N);
    const Eigen::VectorXd x = lu.solve(rhs);
    delta = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, P);
    if (stats) {
      stats->linear_iterations = 0;
      stats->residual = (A * x - rhs).norm() / std::max(rhs.norm(), 1e-300);
    }
  } else {
    SpMat Jm = rule_.weights(0) * J[0];
    for (int q = 1; q < Q; ++q) Jm += rule_.weights(q) * J[q];
    Eigen::SparseLU<SpMat> lu;
    lu.compute(Jm);
    if (lu.info() != Eigen::Success) throw std::runtime_error("ModuleOperator: mean module matrix is singular");
    GalerkinOp op(J, psi_, rule_.weights, n);
    Eigen::GMRES<GalerkinOp, MeanPreconditioner> gmres;
    gmres.preconditioner().set(&lu, n, P);
    gmres.compute(op);
    gmres.set_restart(opts_.restart);
    gmres.setTolerance(opts_.tol);
    gmres.setMaxIterations(opts_.max_iter);
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(F.data(), static_cast<Eigen::Index>(n) * P);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(rhs.size());
    if (rhs.norm() > 0.0) x = gmres.solve(rhs);
    if (rhs.norm() > 0.0 && gmres.info() != Eigen::Success && gmres.error() > 1e3 * opts_.tol) {
      std::ostringstream msg;
      msg << "ModuleOperator: GMRES did not converge (error " << gmres.error() << ")";
      throw std::runtime_error(msg.str());
    }
    delta = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, P);
    if (stats) {
      stats->linear_iterations = static_cast<int>(gmres.iterations());
      stats->residual = gmres.error();
    }
  }
  Eigen::MatrixXd out = own + delta;
  if (post_map) out = post_map(out);
  return out;
}

Eigen::MatrixXd modular_galerkin_update(int module, const ModuleMap& op, const Eigen::MatrixXd& own,
                                        const Eigen::MatrixXd& coupled, const basis::BasisSplit& split,
                                        const quadrature::TensorRule& comp_rule, const orthopoly::PolyFamily& family) {
  const int Q = comp_rule.size();
  std::vector<basis::PiMatrix> pis(Q);
  for (int j = 0; j < Q; ++j) pis[j] = basis::eval_pi(split, module, family, comp_rule.nodes.col(j).data());
  std::vector<Eigen::MatrixXd> out(Q);
  parallel::parallel_for(Q, [&](int j) {
    try {
      out[j] = op(pis[j].right_apply(own), pis[j].right_apply(coupled));
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "module " << module << " solve failed at complementary node " << j << ": " << e.what();
      throw std::runtime_error(msg.str());
    }
  });
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(own.rows(), split.global().size());
  for (int j = 0; j < Q; ++j) pis[j].accumulate_transpose(out[j], comp_rule.weights(j), acc);
  return acc;
}

void initial_iterate(const CoupledModel& model, const basis::BasisSplit& split, const IspOptions& opts,
                     Eigen::MatrixXd& U1, Eigen::MatrixXd& U2) {
  const std::vector<double> xi1(split.s1(), 0.0), xi2(split.s2(), 0.0);
  const auto det = deterministic_bgs(model, xi1.data(), xi2.data(), opts.deterministic_tol, opts.deterministic_max_iter);
  U1 = Eigen::MatrixXd::Zero(model.module(1).size(), split.global().size());
  U2 = Eigen::MatrixXd::Zero(model.module(2).size(), split.global().size());
  U1.col(0) = det.u1;
  U2.col(0) = det.u2;
}

namespace {

struct Setup {
  int p = 0, q = 0;
  basis::BasisSplit split;
  orthopoly::PolyFamily family;
  quadrature::TensorRule rule[2];          // rule[0] over xi_1, rule[1] over xi_2
  std::vector<basis::PiMatrix> pis[2];     // pis[0]: Pi_1 at xi_2 nodes, pis[1]: Pi_2 at xi_1 nodes
  Eigen::MatrixXd comp_psi[2];             // comp_psi[0]: modular basis 2 at xi_2 nodes; [1]: basis 1 at xi_1 nodes
};

Setup make_setup(int s1, int s2, const IspOptions& opts) {
  Setup st;
  st.p = opts.p;
  st.q = opts.q < 0 ? opts.p : opts.q;
  if (st.q < st.p) throw std::invalid_argument("level q must be >= p");
  st.split = basis::BasisSplit(s1, s2, st.p);
  st.family = orthopoly::build_family(orthopoly::Distribution::UniformSymmetric, std::max(st.p, st.q) + 1);
  st.rule[0] = quadrature::tensor_rule(st.family, s1, st.q);
  st.rule[1] = quadrature::tensor_rule(st.family, s2, st.q);
  for (int i = 0; i < 2; ++i) {
    const auto& cr = st.rule[1 - i];
    st.pis[i].resize(cr.size());
    for (int j = 0; j < cr.size(); ++j) st.pis[i][j] = basis::eval_pi(st.split, i + 1, st.family, cr.nodes.col(j).data());
    st.comp_psi[i] = basis::eval_basis_table(st.split.modular(2 - i), st.family, cr.nodes);
  }
  return st;
}

// Standard modular update of module i (1-based) with solve timing.
Eigen::MatrixXd standard_update(const Setup& st, int i, const ModuleOperator& op, const Eigen::MatrixXd& own,
                                const Eigen::MatrixXd& cpl, double& solve_seconds) {
  const auto& pis = st.pis[i - 1];
  const auto& cr = st.rule[2 - i];
  const int Q = cr.size();
  std::vector<Eigen::MatrixXd> out(Q);
  const auto t0 = Clock::now();
  parallel::parallel_for(Q, [&](int j) {
    try {
      out[j] = op.apply(pis[j].right_apply(own), pis[j].right_apply(cpl));
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "module " << i << " solve failed at complementary node " << j << ": " << e.what();
      throw std::runtime_error(msg.str());
    }
  });
  solve_seconds += seconds_since(t0);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(own.rows(), st.split.global().size());
  for (int j = 0; j < Q; ++j) pis[j].accumulate_transpose(out[j], cr.weights(j), acc);
  return acc;
}

struct ReducedStep {
  Eigen::MatrixXd U;
  int d = 0;
  int order = 0;
  int support = 0;
  double trunc_abs = 0.0;
  double trunc_rel = 0.0;
  double order_abs = 0.0;
  double order_rel = 0.0;
  Eigen::VectorXd sigma;
};

ReducedStep reduced_update(const Setup& st, const CoupledModel& model, int i, const ModuleOperator& op,
                           const Eigen::MatrixXd& own, const Eigen::MatrixXd& cpl, double eps_dim, double eps_ord,
                           int order, double& solve_seconds) {
  const int c = 3 - i;
  const auto& pis = st.pis[i - 1];
  const auto& cr = st.rule[c - 1];
  const Gramian& Gi = model.gramian(i);

  dimreduce::StackedInput in;
  in.module = i;
  in.n_own = static_cast<int>(own.rows());
  in.Y.resize(own.rows() + cpl.rows(), own.cols());
  in.Y << own, cpl;
  in.gamma = Gramian::block_diag(Gi, model.gramian(c));
  const auto exp = dimreduce::reduce(in, st.split, eps_dim);

  ReducedStep out;
  out.d = exp.d;
  out.sigma = exp.sigma;
  out.trunc_abs = exp.truncation_error(exp.d);
  out.trunc_rel = exp.total() > 0.0 ? out.trunc_abs / exp.total() : 0.0;
  out.order = order;

  auto solve_at = [&](const Eigen::VectorXd& theta) {
    const Eigen::MatrixXd Z = exp.affine_map(theta);
    return op.apply(exp.own_rows(Z), exp.coupled_rows(Z));
  };

  if (exp.d == 0) {
    const auto t0 = Clock::now();
    const Eigen::MatrixXd Ut = solve_at(Eigen::VectorXd());
    solve_seconds += seconds_since(t0);
    out.support = 1;
    out.U = Eigen::MatrixXd::Zero(own.rows(), st.split.global().size());
    for (int j = 0; j < cr.size(); ++j) pis[j].accumulate_transpose(Ut, cr.weights(j), out.U);
    return out;
  }

  const Eigen::MatrixXd thetas = exp.theta_hat.topRows(exp.d) * st.comp_psi[i - 1].transpose();  // d x Q
  const auto rb_lo = ordreduce::build_reduced_basis(thetas, cr.weights, order);
  const auto rb_hi = ordreduce::build_reduced_basis(thetas, cr.weights, order + 1);
  const auto sparse = quadrature::compress_rule(thetas, cr.weights, 2 * (order + 1));
  out.support = sparse.size();

  std::vector<Eigen::MatrixXd> sols(sparse.size());
  const auto t0 = Clock::now();
  parallel::parallel_for(sparse.size(), [&](int z) {
    try {
      sols[z] = solve_at(thetas.col(sparse.support[z]));
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "module " << i << " solve failed at support node " << sparse.support[z] << ": " << e.what();
      throw std::runtime_error(msg.str());
    }
  });
  solve_seconds += seconds_since(t0);

  Eigen::MatrixXd U_lo = ordreduce::lift_to_global(sols, rb_lo, sparse, cr.weights, pis);
  Eigen::MatrixXd U_hi = ordreduce::lift_to_global(sols, rb_hi, sparse, cr.weights, pis);
  out.order_abs = Gi.norm(U_hi - U_lo);
  const double ref = Gi.norm(U_hi);
  out.order_rel = ref > 0.0 ? out.order_abs / ref : 0.0;
  const int cap = std::max(st.p - 1, 0);
  const int next = std::min(ordreduce::select_order(order, U_lo, U_hi, Gi, eps_ord), std::max(cap, order));
  out.order = next;
  out.U = next > order ? std::move(U_hi) : std::move(U_lo);
  return out;
}

}  // namespace

PropagationResult run_standard_isp(const CoupledModel& model, int s1, int s2, const IspOptions& opts) {
  const auto t_start = Clock::now();
  const Setup st = make_setup(s1, s2, opts);
  if (model.module(1).param_dim() != s1 || model.module(2).param_dim() != s2)
    throw std::invalid_argument("run_standard_isp: model stochastic dimensions do not match");
  const ModuleOperator op1(model.module(1), st.p, st.q, opts.solver);
  const ModuleOperator op2(model.module(2), st.p, st.q, opts.solver);

  PropagationResult res;
  res.mode = "standard";
  initial_iterate(model, st.split, opts, res.U1, res.U2);
  for (int it = 1; it <= opts.max_iter; ++it) {
    const Eigen::MatrixXd U1n = standard_update(st, 1, op1, res.U1, res.U2, res.solve_seconds[0]);
    const Eigen::MatrixXd U2n = standard_update(st, 2, op2, res.U2, U1n, res.solve_seconds[1]);
    const double inc1 = rel_increment(model.gramian(1), U1n, res.U1);
    const double inc2 = rel_increment(model.gramian(2), U2n, res.U2);
    res.U1 = U1n;
    res.U2 = U2n;
    res.iterations = it;
    res.solves[0] += st.rule[1].size();
    res.solves[1] += st.rule[0].size();
    const double elapsed = seconds_since(t_start);
    for (int i = 1; i <= 2; ++i) {
      IterationRecord rec;
      rec.iteration = it;
      rec.module = i;
      rec.increment = i == 1 ? inc1 : inc2;
      rec.support = st.rule[2 - i].size();
      rec.solve_seconds = res.solve_seconds[i - 1];
      rec.elapsed_seconds = elapsed;
      res.records.push_back(rec);
    }
    res.final_increment[0] = inc1;
    res.final_increment[1] = inc2;
    if (inc1 <= opts.eps_bgs && inc2 <= opts.eps_bgs) {
      res.converged = true;
      break;
    }
    if (!std::isfinite(inc1) || !std::isfinite(inc2)) break;
  }
  res.total_seconds = seconds_since(t_start);
  return res;
}

PropagationResult run_reduced_isp(const CoupledModel& model, int s1, int s2, const IspOptions& opts,
                                  const ReducedOptions& red) {
  const auto t_start = Clock::now();
  const Setup st = make_setup(s1, s2, opts);
  if (model.module(1).param_dim() != s1 || model.module(2).param_dim() != s2)
    throw std::invalid_argument("run_reduced_isp: model stochastic dimensions do not match");
  for (int i = 0; i < 2; ++i)
    if (!(red.eps_dim[i] > 0.0) || !(red.eps_ord[i] > 0.0))
      throw std::invalid_argument("run_reduced_isp: tolerances must be positive");
  const ModuleOperator op1(model.module(1), st.p, st.q, opts.solver);
  const ModuleOperator op2(model.module(2), st.p, st.q, opts.solver);

  PropagationResult res;
  res.mode = "reduced";
  initial_iterate(model, st.split, opts, res.U1, res.U2);
  int order[2] = {0, 0};
  for (int it = 1; it <= opts.max_iter; ++it) {
    ReducedStep r1 = reduced_update(st, model, 1, op1, res.U1, res.U2, red.eps_dim[0], red.eps_ord[0], order[0],
                                    res.solve_seconds[0]);
    ReducedStep r2 = reduced_update(st, model, 2, op2, res.U2, r1.U, red.eps_dim[1], red.eps_ord[1], order[1],
                                    res.solve_seconds[1]);
    const double inc1 = rel_increment(model.gramian(1), r1.U, res.U1);
    const double inc2 = rel_increment(model.gramian(2), r2.U, res.U2);
    res.U1 = r1.U;
    res.U2 = r2.U;
    order[0] = r1.order;
    order[1] = r2.order;
    res.iterations = it;
    const double elapsed = seconds_since(t_start);
    const ReducedStep* steps[2] = {&r1, &r2};
    for (int i = 0; i < 2; ++i) {
      const auto& r = *steps[i];
      IterationRecord rec;
      rec.iteration = it;
      rec.module = i + 1;
      rec.increment = i == 0 ? inc1 : inc2;
      rec.d = r.d;
      rec.order = r.order;
      rec.support = r.support;
      rec.solve_seconds = res.solve_seconds[i];
      rec.elapsed_seconds = elapsed;
      rec.trunc_error = r.trunc_rel;
      rec.order_error = r.order_rel;
      rec.sigma = r.sigma;
      res.records.push_back(rec);
      res.solves[i] += r.support;
      res.d[i] = r.d;
      res.order[i] = r.order;
      res.support[i] = r.support;
      res.eps_dim_term[i] = r.trunc_abs;
      res.eps_ord_term[i] = r.order_abs;
    }
    res.final_increment[0] = inc1;
    res.final_increment[1] = inc2;
    if (inc1 <= opts.eps_bgs && inc2 <= opts.eps_bgs) {
      res.converged = true;
      break;
    }
    if (!std::isfinite(inc1) || !std::isfinite(inc2)) break;
  }
  res.total_seconds = seconds_since(t_start);
  return res;
}

Eigen::MatrixXd embed_order(const Eigen::MatrixXd& U, int s, int p_from, int p_to) {
  const basis::MultiIndexSet from(s, p_from), to(s, p_to);
  if (U.cols() != from.size()) throw std::invalid_argument("embed_order: column count mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(U.rows(), to.size());
  for (int j = 0; j < from.size(); ++j) {
    const int k = to.find(from[j]);
    if (k >= 0) out.col(k) = U.col(j);
  }
  return out;
}

ErrorLedger error_ledger(const PropagationResult& result, const CoupledModel& model, int s1, int s2, int p,
                         const PropagationResult* lower_order, double total) {
  ErrorLedger led;
  const Gramian& G1 = model.gramian(1);
  const Gramian& G2 = model.gramian(2);
  led.eps_bgs = std::hypot(result.final_increment[0] * G1.norm(result.U1),
                           result.final_increment[1] * G2.norm(result.U2));
  if (lower_order && p >= 1) {
    const Eigen::MatrixXd L1 = embed_order(lower_order->U1, s1 + s2, p - 1, p);
    const Eigen::MatrixXd L2 = embed_order(lower_order->U2, s1 + s2, p - 1, p);
    led.eps_gpc = std::hypot(G1.norm(result.U1 - L1), G2.norm(result.U2 - L2));
  }
  if (result.mode == "reduced") {
    led.eps_dim = std::hypot(result.eps_dim_term[0], result.eps_dim_term[1]);
    led.eps_ord = std::hypot(result.eps_ord_term[0], result.eps_ord_term[1]);
  }
  led.total = total;
  return led;
}

}  // namespace chaoscoupler::galerkin
