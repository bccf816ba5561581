#include "chaoscoupler/dimreduce.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace chaoscoupler::dimreduce {

namespace {

int global_of(const basis::BasisSplit& split, int module, int own, int comp) {
  return module == 1 ? split.global_index(own, comp) : split.global_index(comp, own);
}

}  // namespace

int own_block_count(int s_own, int p) {
  if (p <= 0) return 0;
  return static_cast<int>(basis::count_total_degree(s_own, p - 1));
}

Eigen::MatrixXd assemble_z(const StackedInput& in, const basis::BasisSplit& split) {
  const int i = in.module;
  const int c = 3 - i;
  const int n = static_cast<int>(in.Y.rows());
  if (in.Y.cols() != split.global().size()) throw std::invalid_argument("assemble_z: column count mismatch");
  if (in.gamma.size() != n) throw std::invalid_argument("assemble_z: Gramian size mismatch");
  const int s_own = i == 1 ? split.s1() : split.s2();
  const int rows = own_block_count(s_own, split.order());
  const int pc = split.modular(c).size() - 1;
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows) * n, std::max(pc, 0));
  if (rows == 0 || pc <= 0) return Z;
  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(n, pc);
  for (int j = 0; j < rows; ++j) {
    raw.setZero();
    bool any = false;
    for (int k = 1; k <= pc; ++k) {
      const int g = global_of(split, i, j, k);
      if (g < 0) continue;
      raw.col(k - 1) = in.Y.col(g);
      any = true;
    }
    if (any) Z.middleRows(static_cast<Eigen::Index>(j) * n, n) = in.gamma.apply_sqrt(raw);
  }
  return Z;
}

int select_dimension(const Eigen::VectorXd& sigma, double eps) {
  const double total2 = sigma.squaredNorm();
  if (!(total2 > 0.0)) return 0;
  const double bound = eps * std::sqrt(total2);
  double tail2 = total2;
  for (int k = 0; k < sigma.size(); ++k) {
    if (std::sqrt(std::max(tail2, 0.0)) <= bound) return k;
    tail2 -= sigma(k) * sigma(k);
  }
  return static_cast<int>(sigma.size());
}

double ReducedExpansion::truncation_error(int k) const {
  if (k < 0 || k > rank()) throw std::out_of_range("truncation_error: mode count out of range");
  return std::sqrt(sigma.tail(rank() - k).squaredNorm());
}

Eigen::VectorXd ReducedExpansion::eval_theta(const basis::MultiIndexSet& comp_set,
                                             const orthopoly::PolyFamily& family, const double* xi_c) const {
  if (d == 0) return Eigen::VectorXd();
  const Eigen::VectorXd psi = basis::eval_basis(comp_set, family, xi_c);
  return theta_hat.topRows(d) * psi;
}

Eigen::MatrixXd ReducedExpansion::affine_map(const Eigen::VectorXd& theta) const {
  if (theta.size() != d) throw std::invalid_argument("affine_map: theta size must equal d");
  Eigen::MatrixXd out = mean_block;
  for (int j = 0; j < d; ++j) out.noalias() += (sigma(j) * theta(j)) * modes[j];
  return out;
}

ReducedExpansion reduce(const StackedInput& in, const basis::BasisSplit& split, double eps_dim) {
  if (!(eps_dim > 0.0)) throw std::invalid_argument("reduce: eps_dim must be positive");
  const int i = in.module;
  const int c = 3 - i;
  const int n = static_cast<int>(in.Y.rows());
  const int s_own = i == 1 ? split.s1() : split.s2();
  const int p_own = split.modular(i).size();
  const int pc = split.modular(c).size() - 1;
  const int rows = own_block_count(s_own, split.order());

  ReducedExpansion out;
  out.module = i;
  out.n = n;
  out.n_own = in.n_own;
  out.mean_block = Eigen::MatrixXd::Zero(n, p_own);
  for (int k = 0; k < p_own; ++k) out.mean_block.col(k) = in.Y.col(global_of(split, i, k, 0));

  const Eigen::MatrixXd Z = assemble_z(in, split);
  if (Z.size() == 0) {
    out.sigma.resize(0);
    out.theta_hat.resize(0, pc + 1);
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(Z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  Eigen::MatrixXd U = svd.matrixU();
  Eigen::MatrixXd V = svd.matrixV();
  const int r = static_cast<int>(sv.size());

  for (int j = 0; j < r; ++j) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index t = 0; t < U.rows(); ++t) {
      if (std::abs(U(t, j)) > best) {
        best = std::abs(U(t, j));
        imax = t;
      }
    }
    if (U(imax, j) < 0.0) {
      U.col(j) *= -1.0;
      V.col(j) *= -1.0;
    }
  }

  out.sigma = sv;
  out.theta_hat = Eigen::MatrixXd::Zero(r, pc + 1);
  out.theta_hat.rightCols(pc) = V.transpose();
  out.modes.reserve(r);
  for (int j = 0; j < r; ++j) {
    Eigen::MatrixXd whitened(n, rows);
    for (int k = 0; k < rows; ++k) whitened.col(k) = U.col(j).segment(static_cast<Eigen::Index>(k) * n, n);
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, p_own);
    block.leftCols(rows) = in.gamma.apply_invsqrt(whitened);
    out.modes.push_back(std::move(block));
  }
  out.d = select_dimension(sv, eps_dim);
  return out;
}

}  // namespace chaoscoupler::dimreduce
