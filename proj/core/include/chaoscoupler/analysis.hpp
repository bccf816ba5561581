#pragma once

#include "chaoscoupler/basis.hpp"
#include "chaoscoupler/galerkin.hpp"
#include "chaoscoupler/gramian.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace chaoscoupler::analysis {

struct MomentSummary {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  Eigen::VectorXd stddev;
  Eigen::MatrixXd covariance;  // empty unless requested
};

/// Mean and covariance of a gPC expansion on an orthonormal basis.
MomentSummary moments(const Eigen::MatrixXd& U, bool full_covariance = false);

/// Main and interaction effects in percent of the G-weighted total variance.
struct SensitivityTable {
  double main1 = 0.0;
  double main2 = 0.0;
  double interaction = 0.0;
  double total_variance = 0.0;
  bool valid = false;  // false (and NaN entries) when the total variance is zero
};

SensitivityTable anova(const Eigen::MatrixXd& U, const basis::BasisSplit& split, const Gramian& G);

/// Uniform [-1, 1] points, dim x count; entry (d, k) depends only on (seed, d, k).
Eigen::MatrixXd sample_points(int dim, int count, std::uint64_t seed);

/// Columns U psi(xi_k) for each column xi_k of points.
Eigen::MatrixXd surrogate_sample(const Eigen::MatrixXd& U, int s, int p, const Eigen::MatrixXd& points);

struct SampleStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;
};

/// Empirical mean and (population) standard deviation of sample columns, summed in index order.
SampleStats sample_stats(const Eigen::MatrixXd& samples);

struct McResult {
  int requested = 0;
  int used = 0;
  int excluded = 0;
  bool flagged = false;  // more than 1% of the samples were excluded
  Eigen::MatrixXd points;                 // (s1 + s2) x requested
  std::vector<char> converged;
  std::vector<int> iterations;
  Eigen::MatrixXd U1, U2;                 // state samples, one column per point
  SampleStats stats1, stats2;             // over converged samples only
};

struct McOptions {
  int samples = 1000;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  int max_iter = 200;
};

/// Deterministic BGS solves at i.i.d. uniform points, run in parallel.
McResult mc_oracle(const galerkin::CoupledModel& model, int s1, int s2, const McOptions& opts);

/// Relative G-weighted discrepancy between surrogate and MC ensemble statistics,
/// both computed at the MC points (common random numbers) over converged samples:
/// sqrt(sum_i |dmean_i|_G^2 + |dstd_i|_G^2) / sqrt(sum_i |mean_i|_G^2 + |std_i|_G^2).
double surrogate_error(const galerkin::CoupledModel& model, const Eigen::MatrixXd& U1, const Eigen::MatrixXd& U2,
                       int s1, int s2, int p, const McResult& mc);

/// Least-squares slope of log(err) against log(spacing).
double loglog_slope(const std::vector<double>& spacing, const std::vector<double>& err);

/// Manufactured-solution study: mean of error(m, xi1, xi2) over samples for each grid.
struct MmsLevel {
  int m = 0;
  double spacing = 0.0;
  double mean_error = 0.0;
  int failures = 0;
};
struct MmsReport {
  std::vector<MmsLevel> levels;
  double slope = 0.0;
};
/// `solve` returns false on non-convergence; otherwise writes the sample error.
using MmsSolve = std::function<bool(int m, const double* xi1, const double* xi2, double& error)>;
MmsReport mms_study(const std::vector<int>& grids, const std::vector<double>& spacing, int s1, int s2, int samples,
                    std::uint64_t seed, const MmsSolve& solve);

// CSV output. Every file starts with '# key=value' header lines.
using Header = std::vector<std::pair<std::string, std::string>>;
void write_header(std::ostream& os, const Header& header);
/// x1, x2, then mean and std per variable.
void write_moments_csv(std::ostream& os, const Header& header, const Eigen::Matrix2Xd& coords,
                       const std::vector<std::string>& names, const std::vector<Eigen::VectorXd>& means,
                       const std::vector<Eigen::VectorXd>& stds);
void write_sensitivity_csv(std::ostream& os, const Header& header, const std::vector<std::string>& names,
                           const std::vector<SensitivityTable>& rows);
/// One row per sample: index, then the named scalar values.
void write_samples_csv(std::ostream& os, const Header& header, const std::vector<std::string>& names,
                       const Eigen::MatrixXd& values);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace chaoscoupler::analysis
