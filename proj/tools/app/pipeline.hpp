#pragma once

#include "config.hpp"

#include "chaoscoupler/analysis.hpp"
#include "chaoscoupler/galerkin.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace chaoscoupler::app {

enum class Mode { Standard, Reduced, Mc };
Mode parse_mode(const std::string& s);
std::string mode_name(Mode m);

enum ExitCode { kConverged = 0, kConfigError = 1, kNotConverged = 2, kSlopeOutOfBand = 3 };

std::unique_ptr<galerkin::CoupledModel> make_model(const RunConfig& cfg, bool mms = false, int m = -1);

/// Output coordinates and variable names of the two module states.
struct StateLayout {
  Eigen::Matrix2Xd coords;
  std::vector<std::string> names[2];
  std::vector<std::string> functionals;
};
StateLayout state_layout(const RunConfig& cfg);
/// Scalar functionals of one state sample: TN integrals of T and phi, Boussinesq kinetic and thermal energy.
Eigen::VectorXd functionals(const galerkin::CoupledModel& model, const Eigen::VectorXd& u1, const Eigen::VectorXd& u2);

galerkin::IspOptions isp_options(const RunConfig& cfg);
galerkin::ReducedOptions reduced_options(const RunConfig& cfg);

analysis::Header artifact_header(const RunConfig& cfg, const std::string& kind);

/// Writes <root>/<mode>/ artifacts; returns the exit code.
int cmd_run(const RunConfig& cfg, Mode mode, const std::string& root, std::ostream& log);

struct ComparisonRow {
  std::string model;
  int s1 = 0, s2 = 0, p = 0;
  double eps_s = 0.0, C_s = 0.0;
  int d1 = 0, pt1 = 0, Q1 = 0, d2 = 0, pt2 = 0, Q2 = 0;
  double eps_r = 0.0, C_r = 0.0, speedup = 0.0;
};
/// Reads the standard, reduced and mc artifacts under root; throws on missing or stale files.
ComparisonRow compare_run(const RunConfig& cfg, const std::string& root);
void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);
std::vector<ComparisonRow> read_comparison_csv(std::istream& is);
void print_comparison(std::ostream& os, const std::vector<ComparisonRow>& rows);
int cmd_compare(const std::vector<RunConfig>& cfgs, const std::vector<std::string>& roots, const std::string& out_path,
                std::ostream& log);

/// Manufactured-solution study over the configured grids.
analysis::MmsReport mms_report(const RunConfig& cfg);
double mms_spacing(const std::string& model, int m);
int cmd_verify_mms(const RunConfig& cfg, const std::string& root, std::ostream& log);

// Artifact files are '# key=value' headers, one column-name line, then rows.
struct CsvTable {
  std::map<std::string, std::string> header;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  int column(const std::string& name) const;
};
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);
/// Coefficient file (one row per state entry) back to an n x (P+1) matrix.
Eigen::MatrixXd read_coefficients(const std::string& path);
void write_coefficients(std::ostream& os, const analysis::Header& header, const Eigen::MatrixXd& U);

}  // namespace chaoscoupler::app
