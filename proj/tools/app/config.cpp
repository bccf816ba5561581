#include "config.hpp"

#include "chaoscoupler/analysis.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace chaoscoupler::app {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v, const std::string& where) {
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError(where + ": bad value '" + v + "' for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& v, const std::string& where) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(where + ": bad boolean '" + v + "' for " + key);
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v, const std::string& where) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<int>(key, trim(item), where));
  return out;
}

}  // namespace

const std::vector<std::string>& constant_keys(const std::string& model) {
  static const std::vector<std::string> tn = {"H_bar", "E", "Sigma_bar", "S", "delta_H", "delta_Sigma", "l_H", "l_Sigma"};
  static const std::vector<std::string> bq = {"Pr", "Ra_bar", "Th_bar", "delta_Ra", "delta_h", "l_Ra", "l_h"};
  if (model == "thermal_neutronics") return tn;
  if (model == "boussinesq") return bq;
  throw ConfigError("unknown model '" + model + "'");
}

int RunConfig::resolved_m() const {
  if (m >= 0) return m;
  return model == "boussinesq" ? 25 : 21;
}

std::vector<int> RunConfig::resolved_mms_grids() const {
  if (!mms_grids.empty()) return mms_grids;
  if (model == "boussinesq") return {8, 16, 24};
  return {8, 16, 32};
}

RunConfig parse_config(std::istream& is, const std::string& source) {
  RunConfig cfg;
  std::map<std::string, std::string> raw;
  std::vector<std::string> order;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!raw.emplace(key, val).second) throw ConfigError(where + ": repeated key " + key);
    order.push_back(key);
  }

  // The model decides which constant keys are legal, so read it first.
  if (auto it = raw.find("model"); it != raw.end()) cfg.model = it->second;
  const auto& consts = constant_keys(cfg.model);
  const std::set<std::string> const_set(consts.begin(), consts.end());

  for (const auto& key : order) {
    const std::string& v = raw.at(key);
    const std::string where = source + " (" + key + ")";
    if (key == "model") continue;
    else if (key == "m") cfg.m = parse_number<int>(key, v, where);
    else if (key == "s1") cfg.s1 = parse_number<int>(key, v, where);
    else if (key == "s2") cfg.s2 = parse_number<int>(key, v, where);
    else if (key == "p") cfg.p = parse_number<int>(key, v, where);
    else if (key == "q") cfg.q = parse_number<int>(key, v, where);
    else if (key == "eps1dim") cfg.eps1dim = parse_number<double>(key, v, where);
    else if (key == "eps2dim") cfg.eps2dim = parse_number<double>(key, v, where);
    else if (key == "eps1ord") cfg.eps1ord = parse_number<double>(key, v, where);
    else if (key == "eps2ord") cfg.eps2ord = parse_number<double>(key, v, where);
    else if (key == "eps_bgs") cfg.eps_bgs = parse_number<double>(key, v, where);
    else if (key == "max_iter") cfg.max_iter = parse_number<int>(key, v, where);
    else if (key == "mc_samples") cfg.mc_samples = parse_number<int>(key, v, where);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, v, where);
    else if (key == "output_dir") cfg.output_dir = v;
    else if (key == "identity_gramian") cfg.identity_gramian = parse_bool(key, v, where);
    else if (key == "mms_grids") cfg.mms_grids = parse_int_list(key, v, where);
    else if (key == "mms_samples") cfg.mms_samples = parse_number<int>(key, v, where);
    else if (const_set.count(key)) cfg.constants[key] = parse_number<double>(key, v, where);
    else throw ConfigError(source + ": unknown key '" + key + "' for model " + cfg.model);
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  return parse_config(in, path);
}

void validate(const RunConfig& c) {
  constant_keys(c.model);
  if (c.resolved_m() < 3) throw ConfigError("m must be at least 3");
  if (c.s1 < 1 || c.s2 < 1) throw ConfigError("s1 and s2 must be positive");
  if (c.p < 0) throw ConfigError("p must be nonnegative");
  if (c.resolved_q() < c.p) throw ConfigError("q must be at least p");
  for (double e : {c.eps1dim, c.eps2dim, c.eps1ord, c.eps2ord, c.eps_bgs})
    if (!(e > 0.0)) throw ConfigError("tolerances must be positive");
  if (c.max_iter < 1) throw ConfigError("max_iter must be positive");
  if (c.mc_samples < 1) throw ConfigError("mc_samples must be positive");
  if (c.mms_samples < 1) throw ConfigError("mms_samples must be positive");
  for (int g : c.resolved_mms_grids())
    if (g < 3) throw ConfigError("mms grids must be at least 3");
  if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

std::string canonical_form(const RunConfig& c) {
  using analysis::format_double;
  std::ostringstream os;
  os << "model=" << c.model << '\n'
     << "m=" << c.resolved_m() << '\n'
     << "s1=" << c.s1 << '\n'
     << "s2=" << c.s2 << '\n'
     << "p=" << c.p << '\n'
     << "q=" << c.resolved_q() << '\n'
     << "eps1dim=" << format_double(c.eps1dim) << '\n'
     << "eps2dim=" << format_double(c.eps2dim) << '\n'
     << "eps1ord=" << format_double(c.eps1ord) << '\n'
     << "eps2ord=" << format_double(c.eps2ord) << '\n'
     << "eps_bgs=" << format_double(c.eps_bgs) << '\n'
     << "max_iter=" << c.max_iter << '\n'
     << "mc_samples=" << c.mc_samples << '\n'
     << "seed=" << c.seed << '\n'
     << "identity_gramian=" << (c.identity_gramian ? "true" : "false") << '\n';
  os << "mms_grids=";
  const auto grids = c.resolved_mms_grids();
  for (std::size_t k = 0; k < grids.size(); ++k) os << (k ? "," : "") << grids[k];
  os << '\n' << "mms_samples=" << c.mms_samples << '\n';
  for (const auto& [k, v] : c.constants) os << k << '=' << format_double(v) << '\n';
  return os.str();
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_form(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace chaoscoupler::app
