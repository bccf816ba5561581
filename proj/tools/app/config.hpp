#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaoscoupler::app {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string model = "thermal_neutronics";
  int m = -1;  // model default when negative
  int s1 = 3;
  int s2 = 3;
  int p = 2;
  int q = -1;  // p when negative
  double eps1dim = 0.02;
  double eps2dim = 0.05;
  double eps1ord = 1e-4;
  double eps2ord = 1e-4;
  double eps_bgs = 1e-6;
  int max_iter = 50;
  int mc_samples = 1000;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  bool identity_gramian = false;
  std::vector<int> mms_grids;  // model default when empty
  int mms_samples = 100;
  std::map<std::string, double> constants;  // model-constant overrides

  int resolved_m() const;
  int resolved_q() const { return q < 0 ? p : q; }
  std::vector<int> resolved_mms_grids() const;
};

/// Model-constant keys accepted for a model name; throws ConfigError for unknown models.
const std::vector<std::string>& constant_keys(const std::string& model);

/// Parses 'key = value' lines; '#' starts a comment. Unknown or repeated keys are errors.
RunConfig parse_config(std::istream& is, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);
void validate(const RunConfig& cfg);

/// Resolved settings in a fixed order, one 'key=value' per line; output_dir is excluded.
std::string canonical_form(const RunConfig& cfg);
/// FNV-1a 64 of the canonical form, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace chaoscoupler::app
