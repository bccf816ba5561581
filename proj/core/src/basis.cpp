#include "chaoscoupler/basis.hpp"

#include <algorithm>
#include <stdexcept>

namespace chaoscoupler::basis {

namespace {

// Emit all tuples of length `len` with entries summing to `deg`, first entry descending.
void emit_level(int len, int deg, MultiIndex& cur, int pos, std::vector<MultiIndex>& out) {
  if (pos == len - 1) {
    cur[pos] = deg;
    out.push_back(cur);
    return;
  }
  for (int a = deg; a >= 0; --a) {
    cur[pos] = a;
    emit_level(len, deg - a, cur, pos + 1, out);
  }
}

}  // namespace

MultiIndexSet::MultiIndexSet(int s, int p) : s_(s), p_(p) {
  if (s < 1 || p < 0) throw std::invalid_argument("total_degree_set: need s >= 1 and p >= 0");
  MultiIndex cur(s, 0);
  for (int d = 0; d <= p; ++d) emit_level(s, d, cur, 0, indices_);
  degree_.reserve(indices_.size());
  for (const auto& a : indices_) {
    int t = 0;
    for (int v : a) t += v;
    degree_.push_back(t);
  }
}

int MultiIndexSet::find(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != s_) return -1;
  int deg = 0;
  for (int v : alpha) deg += v;
  if (deg > p_) return -1;
  // Levels are contiguous; search within the level only.
  const auto first = std::lower_bound(degree_.begin(), degree_.end(), deg) - degree_.begin();
  const auto last = std::upper_bound(degree_.begin(), degree_.end(), deg) - degree_.begin();
  for (auto j = first; j < last; ++j)
    if (indices_[j] == alpha) return static_cast<int>(j);
  return -1;
}

MultiIndexSet total_degree_set(int s, int p) { return MultiIndexSet(s, p); }

std::int64_t count_total_degree(int s, int p) {
  std::int64_t c = 1;
  for (int k = 1; k <= s; ++k) c = c * (p + k) / k;
  return c;
}

Eigen::VectorXd eval_basis(const MultiIndexSet& set, const orthopoly::PolyFamily& family, const double* point) {
  const int s = set.dim(), p = set.order();
  std::vector<double> table(static_cast<size_t>(s) * (p + 1));
  for (int d = 0; d < s; ++d) family.eval_all(p, point[d], table.data() + d * (p + 1));
  Eigen::VectorXd out(set.size());
  for (int j = 0; j < set.size(); ++j) {
    const auto& a = set[j];
    double v = 1.0;
    for (int d = 0; d < s; ++d) v *= table[d * (p + 1) + a[d]];
    out(j) = v;
  }
  return out;
}

Eigen::MatrixXd eval_basis_table(const MultiIndexSet& set, const orthopoly::PolyFamily& family,
                                 const Eigen::MatrixXd& points) {
  Eigen::MatrixXd out(points.cols(), set.size());
  for (Eigen::Index q = 0; q < points.cols(); ++q) {
    const Eigen::VectorXd pt = points.col(q);
    out.row(q) = eval_basis(set, family, pt.data()).transpose();
  }
  return out;
}

BasisSplit::BasisSplit(int s1, int s2, int p)
    : s1_(s1), s2_(s2), p_(p), global_(s1 + s2, p), mod1_(s1, p), mod2_(s2, p) {
  const int n = global_.size();
  j1_.resize(n);
  j2_.resize(n);
  pair_to_global_.assign(static_cast<size_t>(mod1_.size()) * mod2_.size(), -1);
  for (int j = 0; j < n; ++j) {
    const auto& a = global_[j];
    MultiIndex a1(a.begin(), a.begin() + s1), a2(a.begin() + s1, a.end());
    j1_[j] = mod1_.find(a1);
    j2_[j] = mod2_.find(a2);
    pair_to_global_[j1_[j] * mod2_.size() + j2_[j]] = j;
  }
}

BasisSplit split_basis(int s1, int s2, int p) { return BasisSplit(s1, s2, p); }

Eigen::MatrixXd PiMatrix::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows(), cols);
  for (int j = 0; j < rows(); ++j) out(j, col[j]) = val[j];
  return out;
}

Eigen::MatrixXd PiMatrix::right_apply(const Eigen::MatrixXd& U) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(U.rows(), cols);
  for (int j = 0; j < rows(); ++j)
    if (val[j] != 0.0) out.col(col[j]).noalias() += val[j] * U.col(j);
  return out;
}

Eigen::MatrixXd PiMatrix::right_apply_transpose(const Eigen::MatrixXd& Ut) const {
  Eigen::MatrixXd out(Ut.rows(), rows());
  for (int j = 0; j < rows(); ++j) out.col(j) = val[j] * Ut.col(col[j]);
  return out;
}

void PiMatrix::accumulate_transpose(const Eigen::MatrixXd& Ut, double w, Eigen::MatrixXd& acc) const {
  for (int j = 0; j < rows(); ++j) acc.col(j).noalias() += (w * val[j]) * Ut.col(col[j]);
}

PiMatrix eval_pi(const BasisSplit& split, int module, const orthopoly::PolyFamily& family,
                 const double* complementary_point) {
  if (module != 1 && module != 2) throw std::invalid_argument("eval_pi: module must be 1 or 2");
  const int other = module == 1 ? 2 : 1;
  const Eigen::VectorXd psi_c = eval_basis(split.modular(other), family, complementary_point);
  PiMatrix pi;
  pi.module = module;
  pi.cols = split.modular(module).size();
  const int n = split.global().size();
  pi.col.resize(n);
  pi.val.resize(n);
  for (int j = 0; j < n; ++j) {
    pi.col[j] = split.jmap(module, j);
    pi.val[j] = psi_c(split.jmap(other, j));
  }
  return pi;
}

}  // namespace chaoscoupler::basis
