#include "chaoscoupler/analysis.hpp"

#include "chaoscoupler/parallel.hpp"
#include "chaoscoupler/rng.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace chaoscoupler::analysis {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MomentSummary moments(const MatrixXd& U, bool full_covariance) {
  MomentSummary out;
  out.mean = U.col(0);
  const auto tail = U.rightCols(U.cols() - 1);
  out.variance = tail.rowwise().squaredNorm();
  out.stddev = out.variance.cwiseSqrt();
  if (full_covariance) out.covariance = tail * tail.transpose();
  return out;
}

SensitivityTable anova(const MatrixXd& U, const basis::BasisSplit& split, const Gramian& G) {
  const VectorXd norms = G.column_norms2(U);
  SensitivityTable t;
  double v1 = 0.0, v2 = 0.0, total = 0.0;
  for (int j = 1; j < U.cols(); ++j) {
    total += norms[j];
    if (split.jmap(2, j) == 0) v1 += norms[j];
    else if (split.jmap(1, j) == 0) v2 += norms[j];
  }
  t.total_variance = total;
  if (!(total > 0.0)) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    t.main1 = t.main2 = t.interaction = nan;
    return t;
  }
  t.valid = true;
  t.main1 = 100.0 * v1 / total;
  t.main2 = 100.0 * v2 / total;
  t.interaction = 100.0 - t.main1 - t.main2;
  return t;
}

MatrixXd sample_points(int dim, int count, std::uint64_t seed) {
  MatrixXd X(dim, count);
  for (int k = 0; k < count; ++k)
    for (int d = 0; d < dim; ++d) X(d, k) = rng::symmetric(seed, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(k));
  return X;
}

MatrixXd surrogate_sample(const MatrixXd& U, int s, int p, const MatrixXd& points) {
  const basis::MultiIndexSet set(s, p);
  if (set.size() != U.cols()) throw std::invalid_argument("surrogate_sample: coefficient count does not match basis");
  const auto family = orthopoly::build_family(orthopoly::Distribution::UniformSymmetric, std::max(p, 1));
  const MatrixXd psi = basis::eval_basis_table(set, family, points.topRows(s));
  return U * psi.transpose();
}

SampleStats sample_stats(const MatrixXd& samples) {
  SampleStats st;
  const int n = static_cast<int>(samples.cols());
  st.mean = VectorXd::Zero(samples.rows());
  for (int k = 0; k < n; ++k) st.mean += samples.col(k);
  st.mean /= n;
  VectorXd var = VectorXd::Zero(samples.rows());
  for (int k = 0; k < n; ++k) var += (samples.col(k) - st.mean).cwiseAbs2();
  st.stddev = (var / n).cwiseSqrt();
  return st;
}

namespace {

MatrixXd select_columns(const MatrixXd& X, const std::vector<char>& keep) {
  int count = 0;
  for (char k : keep) count += k ? 1 : 0;
  MatrixXd out(X.rows(), count);
  int c = 0;
  for (int k = 0; k < X.cols(); ++k)
    if (keep[k]) out.col(c++) = X.col(k);
  return out;
}

}  // namespace

McResult mc_oracle(const galerkin::CoupledModel& model, int s1, int s2, const McOptions& opts) {
  if (opts.samples < 1) throw std::invalid_argument("mc_oracle: need at least one sample");
  McResult r;
  const int N = opts.samples;
  r.requested = N;
  r.points = sample_points(s1 + s2, N, opts.seed);
  r.converged.assign(N, 0);
  r.iterations.assign(N, 0);
  r.U1.resize(model.module(1).size(), N);
  r.U2.resize(model.module(2).size(), N);
  parallel::parallel_for(N, [&](int k) {
    const double* xi = r.points.col(k).data();
    const auto res = galerkin::deterministic_bgs(model, xi, xi + s1, opts.tol, opts.max_iter);
    r.U1.col(k) = res.u1;
    r.U2.col(k) = res.u2;
    r.converged[k] = res.converged && res.u1.allFinite() && res.u2.allFinite();
    r.iterations[k] = res.iterations;
  });
  for (char c : r.converged) r.used += c ? 1 : 0;
  r.excluded = N - r.used;
  r.flagged = r.excluded * 100 > N;
  if (r.used > 0) {
    r.stats1 = sample_stats(select_columns(r.U1, r.converged));
    r.stats2 = sample_stats(select_columns(r.U2, r.converged));
  }
  return r;
}

double surrogate_error(const galerkin::CoupledModel& model, const MatrixXd& U1, const MatrixXd& U2, int s1, int s2,
                       int p, const McResult& mc) {
  if (mc.used == 0) throw std::invalid_argument("surrogate_error: no converged samples");
  const MatrixXd pts = select_columns(mc.points, mc.converged);
  const SampleStats a1 = sample_stats(surrogate_sample(U1, s1 + s2, p, pts));
  const SampleStats a2 = sample_stats(surrogate_sample(U2, s1 + s2, p, pts));
  const Gramian& G1 = model.gramian(1);
  const Gramian& G2 = model.gramian(2);
  auto n2 = [](const Gramian& G, const VectorXd& v) { return G.inner(v, v); };
  const double num = n2(G1, a1.mean - mc.stats1.mean) + n2(G1, a1.stddev - mc.stats1.stddev) +
                     n2(G2, a2.mean - mc.stats2.mean) + n2(G2, a2.stddev - mc.stats2.stddev);
  const double den = n2(G1, mc.stats1.mean) + n2(G1, mc.stats1.stddev) + n2(G2, mc.stats2.mean) +
                     n2(G2, mc.stats2.stddev);
  return std::sqrt(num / den);
}

double loglog_slope(const std::vector<double>& spacing, const std::vector<double>& err) {
  if (spacing.size() != err.size() || spacing.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
  const int n = static_cast<int>(spacing.size());
  double mx = 0.0, my = 0.0;
  for (int k = 0; k < n; ++k) {
    mx += std::log(spacing[k]);
    my += std::log(err[k]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (int k = 0; k < n; ++k) {
    const double dx = std::log(spacing[k]) - mx;
    sxy += dx * (std::log(err[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

MmsReport mms_study(const std::vector<int>& grids, const std::vector<double>& spacing, int s1, int s2, int samples,
                    std::uint64_t seed, const MmsSolve& solve) {
  if (grids.size() != spacing.size()) throw std::invalid_argument("mms_study: grid and spacing lists differ");
  MmsReport rep;
  const MatrixXd pts = sample_points(s1 + s2, samples, seed);
  std::vector<double> h, e;
  for (std::size_t g = 0; g < grids.size(); ++g) {
    std::vector<double> err(samples, 0.0);
    std::vector<char> ok(samples, 0);
    parallel::parallel_for(samples, [&](int k) {
      const double* xi = pts.col(k).data();
      ok[k] = solve(grids[g], xi, xi + s1, err[k]) ? 1 : 0;
    });
    MmsLevel lv;
    lv.m = grids[g];
    lv.spacing = spacing[g];
    double acc = 0.0;
    int used = 0;
    for (int k = 0; k < samples; ++k) {
      if (ok[k]) {
        acc += err[k];
        ++used;
      } else {
        ++lv.failures;
      }
    }
    lv.mean_error = used ? acc / used : std::numeric_limits<double>::quiet_NaN();
    rep.levels.push_back(lv);
    h.push_back(lv.spacing);
    e.push_back(lv.mean_error);
  }
  rep.slope = grids.size() >= 2 ? loglog_slope(h, e) : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_header(std::ostream& os, const Header& header) {
  for (const auto& [k, v] : header) os << "# " << k << '=' << v << '\n';
}

void write_moments_csv(std::ostream& os, const Header& header, const Eigen::Matrix2Xd& coords,
                       const std::vector<std::string>& names, const std::vector<VectorXd>& means,
                       const std::vector<VectorXd>& stds) {
  if (names.size() != means.size() || names.size() != stds.size())
    throw std::invalid_argument("write_moments_csv: mismatched variable lists");
  write_header(os, header);
  os << "x1,x2";
  for (const auto& n : names) os << ',' << n << "_mean," << n << "_std";
  os << '\n';
  for (int r = 0; r < coords.cols(); ++r) {
    os << format_double(coords(0, r)) << ',' << format_double(coords(1, r));
    for (std::size_t v = 0; v < names.size(); ++v) os << ',' << format_double(means[v][r]) << ',' << format_double(stds[v][r]);
    os << '\n';
  }
}

void write_sensitivity_csv(std::ostream& os, const Header& header, const std::vector<std::string>& names,
                           const std::vector<SensitivityTable>& rows) {
  write_header(os, header);
  os << "variable,main_xi1,main_xi2,interaction,total_variance,valid\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& t = rows[k];
    os << names[k] << ',' << format_double(t.main1) << ',' << format_double(t.main2) << ','
       << format_double(t.interaction) << ',' << format_double(t.total_variance) << ',' << (t.valid ? 1 : 0) << '\n';
  }
}

void write_samples_csv(std::ostream& os, const Header& header, const std::vector<std::string>& names,
                       const MatrixXd& values) {
  write_header(os, header);
  os << "sample";
  for (const auto& n : names) os << ',' << n;
  os << '\n';
  for (int k = 0; k < values.cols(); ++k) {
    os << k;
    for (int r = 0; r < values.rows(); ++r) os << ',' << format_double(values(r, k));
    os << '\n';
  }
}

}  // namespace chaoscoupler::analysis
