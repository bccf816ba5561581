#include "chaoscoupler/analysis.hpp"
#include "chaoscoupler/models/linear_model.hpp"
#include "chaoscoupler/parallel.hpp"
#include "chaoscoupler/quadrature.hpp"
#include "chaoscoupler/rng.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

using namespace chaoscoupler;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const auto kFam = orthopoly::build_family(orthopoly::Distribution::UniformSymmetric, 8);

MatrixXd random_matrix(int r, int c, std::uint64_t seed) {
  MatrixXd A(r, c);
  for (int i = 0; i < A.size(); ++i) A.data()[i] = rng::symmetric(seed, 0, i);
  return A;
}

}  // namespace

TEST_CASE("moments match quadrature of the expansion") {
  const int s = 3, p = 2;
  const basis::MultiIndexSet set(s, p);
  const MatrixXd U = random_matrix(4, set.size(), 1);
  const auto m = analysis::moments(U, true);
  const auto rule = quadrature::tensor_rule(kFam, s, p);
  VectorXd mean = VectorXd::Zero(4);
  MatrixXd second = MatrixXd::Zero(4, 4);
  for (int q = 0; q < rule.size(); ++q) {
    const VectorXd y = U * basis::eval_basis(set, kFam, VectorXd(rule.nodes.col(q)));
    mean += rule.weights(q) * y;
    second += rule.weights(q) * y * y.transpose();
  }
  const MatrixXd cov = second - mean * mean.transpose();
  CHECK((m.mean - mean).norm() < 1e-12);
  CHECK((m.covariance - cov).norm() < 1e-12);
  CHECK((m.variance - cov.diagonal()).norm() < 1e-12);
  CHECK((m.stddev.array().square().matrix() - m.variance).norm() < 1e-12);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m.covariance);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
}

TEST_CASE("ANOVA indices partition the variance") {
  const basis::BasisSplit split(2, 3, 3);
  const MatrixXd U = random_matrix(5, split.global().size(), 2);
  const auto t = analysis::anova(U, split, Gramian::identity(5));
  CHECK(t.valid);
  CHECK(t.main1 + t.main2 + t.interaction == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(t.total_variance == doctest::Approx(U.rightCols(U.cols() - 1).squaredNorm()));

  MatrixXd only1 = MatrixXd::Zero(5, split.global().size());
  only1.col(split.global_index(1, 0)) = VectorXd::Ones(5);
  only1.col(split.global_index(3, 0)) = VectorXd::Ones(5);
  const auto a = analysis::anova(only1, split, Gramian::identity(5));
  CHECK(a.main1 == doctest::Approx(100.0));
  CHECK(a.main2 == 0.0);
  CHECK(a.interaction == 0.0);

  MatrixXd mixed = MatrixXd::Zero(1, split.global().size());
  mixed(0, split.global_index(1, 1)) = 1.0;
  CHECK(analysis::anova(mixed, split, Gramian::identity(1)).interaction == doctest::Approx(100.0));

  const auto z = analysis::anova(MatrixXd::Zero(1, split.global().size()), split, Gramian::identity(1));
  CHECK_FALSE(z.valid);
  CHECK(std::isnan(z.main1));
}

TEST_CASE("sample points are reproducible and uniform on [-1, 1]") {
  const MatrixXd a = analysis::sample_points(3, 5000, 42);
  const MatrixXd b = analysis::sample_points(3, 5000, 42);
  CHECK(a == b);
  CHECK(a.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(std::abs(a.row(0).mean()) < 0.05);
  CHECK(a.row(1).array().square().mean() == doctest::Approx(1.0 / 3.0).epsilon(0.05));
  // Entry (d, k) does not depend on the requested count.
  CHECK(analysis::sample_points(3, 10, 42) == a.leftCols(10));
  CHECK(analysis::sample_points(3, 10, 43) != a.leftCols(10));
}

TEST_CASE("constant surrogate gives identical samples") {
  MatrixXd U = MatrixXd::Zero(2, basis::MultiIndexSet(2, 2).size());
  U.col(0) << 1.5, -2.0;
  const MatrixXd y = analysis::surrogate_sample(U, 2, 2, analysis::sample_points(2, 7, 1));
  for (int k = 0; k < 7; ++k) CHECK((y.col(k) - U.col(0)).norm() == 0.0);
  const auto st = analysis::sample_stats(y);
  CHECK(st.stddev.norm() == 0.0);
}

TEST_CASE("log-log slope recovers power laws and ignores uniform scaling") {
  const std::vector<double> h = {0.1, 0.05, 0.025};
  std::vector<double> e, half;
  for (double x : h) {
    e.push_back(3.0 * x * x);
    half.push_back(1.5 * x * x);
  }
  CHECK(analysis::loglog_slope(h, e) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(analysis::loglog_slope(h, half) == doctest::Approx(analysis::loglog_slope(h, e)).epsilon(1e-12));
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 5e-324, 0.0}) {
    const std::string s = analysis::format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
}

TEST_CASE("Monte Carlo oracle is independent of the thread count") {
  const models::LinearCoupledModel m({});
  analysis::McOptions o;
  o.samples = 64;
  o.seed = 5;
  parallel::set_threads(1);
  const auto a = analysis::mc_oracle(m, 2, 2, o);
  parallel::set_threads(4);
  const auto b = analysis::mc_oracle(m, 2, 2, o);
  parallel::set_threads(1);
  CHECK(a.used == 64);
  CHECK_FALSE(a.flagged);
  CHECK(a.U1 == b.U1);
  CHECK(a.U2 == b.U2);
  CHECK(a.stats1.mean == b.stats1.mean);
}

TEST_CASE("surrogate error shrinks with the gPC order on the linear model") {
  const models::LinearCoupledModel m({});
  analysis::McOptions o;
  o.samples = 200;
  const auto mc = analysis::mc_oracle(m, 2, 2, o);
  double prev = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= 3; ++p) {
    galerkin::IspOptions io;
    io.p = p;
    io.eps_bgs = 1e-10;
    const auto r = galerkin::run_standard_isp(m, 2, 2, io);
    const double e = analysis::surrogate_error(m, r.U1, r.U2, 2, 2, p, mc);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("MMS study averages per grid and fits the slope") {
  const auto solve = [](int m, const double* xi1, const double*, double& err) {
    err = (1.0 + 0.1 * xi1[0]) / (m * m);
    return true;
  };
  const auto rep = analysis::mms_study({4, 8, 16}, {0.25, 0.125, 0.0625}, 1, 1, 10, 3, solve);
  REQUIRE(rep.levels.size() == 3);
  CHECK(rep.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.levels[0].failures == 0);
}

TEST_CASE("CSV writers emit headers then rows") {
  std::ostringstream os;
  analysis::write_samples_csv(os, {{"seed", "3"}}, {"a", "b"}, (MatrixXd(2, 2) << 1, 2, 3, 4).finished());
  CHECK(os.str() == "# seed=3\nsample,a,b\n0,1,3\n1,2,4\n");
}
