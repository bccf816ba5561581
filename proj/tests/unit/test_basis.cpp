#include "chaoscoupler/basis.hpp"
#include "chaoscoupler/quadrature.hpp"
#include "chaoscoupler/rng.hpp"

#include <doctest.h>

#include <numeric>
#include <set>

using namespace chaoscoupler;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::int64_t brute_count(int s, int p) {
  std::int64_t c = 0;
  std::vector<int> a(s, 0);
  while (true) {
    if (std::accumulate(a.begin(), a.end(), 0) <= p) ++c;
    int d = 0;
    while (d < s && ++a[d] > p) a[d++] = 0;
    if (d == s) break;
  }
  return c;
}

VectorXd random_point(int dim, std::uint64_t seed, int index) {
  VectorXd x(dim);
  for (int d = 0; d < dim; ++d) x(d) = rng::symmetric(seed, d, index);
  return x;
}

}  // namespace

TEST_CASE("total-degree count matches enumeration") {
  for (int s = 1; s <= 5; ++s)
    for (int p = 0; p <= 5; ++p) {
      CHECK(basis::count_total_degree(s, p) == brute_count(s, p));
      CHECK(basis::MultiIndexSet(s, p).size() == brute_count(s, p));
    }
}

TEST_CASE("graded reverse-lexicographic ordering") {
  const basis::MultiIndexSet set(2, 2);
  const std::vector<basis::MultiIndex> expect = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  REQUIRE(set.size() == 6);
  for (int j = 0; j < 6; ++j) CHECK(set[j] == expect[j]);

  const basis::MultiIndexSet big(4, 4);
  std::set<basis::MultiIndex> seen;
  for (int j = 0; j < big.size(); ++j) {
    CHECK(big.find(big[j]) == j);
    CHECK(seen.insert(big[j]).second);
    if (j > 0) CHECK(big.degree(j) >= big.degree(j - 1));
  }
  CHECK(big.find({5, 0, 0, 0}) == -1);
}

TEST_CASE("multivariate basis is orthonormal under the tensor rule") {
  const auto fam = orthopoly::build_family(orthopoly::Distribution::UniformSymmetric, 8);
  for (int s = 1; s <= 3; ++s)
    for (int p = 0; p <= 4; ++p) {
      const basis::MultiIndexSet set(s, p);
      const auto rule = quadrature::tensor_rule(fam, s, p);
      const MatrixXd T = basis::eval_basis_table(set, fam, rule.nodes);
      const MatrixXd G = T.transpose() * rule.weights.asDiagonal() * T;
      CHECK((G - MatrixXd::Identity(set.size(), set.size())).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("basis split index maps are consistent") {
  const basis::BasisSplit split(2, 3, 4);
  const auto& g = split.global();
  for (int j = 0; j < g.size(); ++j) {
    const auto& a1 = split.modular(1)[split.jmap(1, j)];
    const auto& a2 = split.modular(2)[split.jmap(2, j)];
    basis::MultiIndex cat(a1);
    cat.insert(cat.end(), a2.begin(), a2.end());
    CHECK(cat == g[j]);
    CHECK(split.global_index(split.jmap(1, j), split.jmap(2, j)) == j);
  }
  int valid = 0;
  for (int k1 = 0; k1 < split.modular(1).size(); ++k1)
    for (int k2 = 0; k2 < split.modular(2).size(); ++k2)
      if (split.global_index(k1, k2) >= 0) ++valid;
  CHECK(valid == g.size());
}

TEST_CASE("Pi maps modular bases onto the global basis") {
  const auto fam = orthopoly::build_family(orthopoly::Distribution::UniformSymmetric, 8);
  for (int s1 = 1; s1 <= 3; ++s1)
    for (int s2 = 1; s2 <= 3; ++s2)
      for (int p = 0; p <= 4; ++p) {
        const basis::BasisSplit split(s1, s2, p);
        for (int k = 0; k < 3; ++k) {
          const VectorXd x = random_point(s1 + s2, 11, 100 * p + 10 * s1 + s2 + k);
          const VectorXd psi = basis::eval_basis(split.global(), fam, x);
          const VectorXd x1 = x.head(s1), x2 = x.tail(s2);
          const auto pi1 = basis::eval_pi(split, 1, fam, x2);
          const auto pi2 = basis::eval_pi(split, 2, fam, x1);
          const VectorXd r1 = pi1.dense() * basis::eval_basis(split.modular(1), fam, x1);
          const VectorXd r2 = pi2.dense() * basis::eval_basis(split.modular(2), fam, x2);
          CHECK((r1 - psi).cwiseAbs().maxCoeff() < 1e-12);
          CHECK((r2 - psi).cwiseAbs().maxCoeff() < 1e-12);
        }
      }
}

TEST_CASE("PiMatrix products agree with the dense matrix") {
  const auto fam = orthopoly::build_family(orthopoly::Distribution::UniformSymmetric, 6);
  const basis::BasisSplit split(2, 2, 3);
  const VectorXd xc = random_point(2, 5, 0);
  const auto pi = basis::eval_pi(split, 1, fam, xc);
  const MatrixXd D = pi.dense();
  MatrixXd U(4, split.global().size());
  for (int i = 0; i < U.size(); ++i) U.data()[i] = rng::symmetric(3, 0, i);
  MatrixXd Ut(4, split.modular(1).size());
  for (int i = 0; i < Ut.size(); ++i) Ut.data()[i] = rng::symmetric(3, 1, i);
  CHECK((pi.right_apply(U) - U * D).norm() < 1e-13);
  CHECK((pi.right_apply_transpose(Ut) - Ut * D.transpose()).norm() < 1e-13);
  MatrixXd acc = MatrixXd::Ones(4, split.global().size());
  pi.accumulate_transpose(Ut, 0.5, acc);
  CHECK((acc - MatrixXd::Ones(4, split.global().size()) - 0.5 * Ut * D.transpose()).norm() < 1e-13);
}
