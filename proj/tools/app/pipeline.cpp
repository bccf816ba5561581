#include "pipeline.hpp"

#include "chaoscoupler/basis.hpp"
#include "chaoscoupler/models/boussinesq.hpp"
#include "chaoscoupler/models/thermal_neutronics.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace chaoscoupler::app {

namespace fs = std::filesystem;
using analysis::format_double;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double constant(const RunConfig& cfg, const char* key, double fallback) {
  auto it = cfg.constants.find(key);
  return it == cfg.constants.end() ? fallback : it->second;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::runtime_error("bad number '" + s + "'");
  return v;
}

// Per-variable blocks of a module state.
std::vector<VectorXd> split_blocks(const VectorXd& v, int blocks) {
  const int n = static_cast<int>(v.size()) / blocks;
  std::vector<VectorXd> out;
  for (int b = 0; b < blocks; ++b) out.push_back(v.segment(b * n, n));
  return out;
}

void write_moments(const fs::path& path, const analysis::Header& header, const StateLayout& layout, int module,
                   const VectorXd& mean, const VectorXd& std) {
  const auto& names = layout.names[module - 1];
  const int k = static_cast<int>(names.size());
  auto os = open_out(path);
  analysis::write_moments_csv(os, header, layout.coords, names, split_blocks(mean, k), split_blocks(std, k));
}

void write_basis(const fs::path& path, const analysis::Header& header, int s, int p) {
  const basis::MultiIndexSet set(s, p);
  auto os = open_out(path);
  analysis::write_header(os, header);
  os << "index,degree";
  for (int d = 0; d < s; ++d) os << ",alpha" << d + 1;
  os << '\n';
  for (int j = 0; j < set.size(); ++j) {
    os << j << ',' << set.degree(j);
    for (int d = 0; d < s; ++d) os << ',' << set[j][d];
    os << '\n';
  }
}

struct SummaryWriter {
  std::vector<std::pair<std::string, std::string>> kv;
  void add(const std::string& k, const std::string& v) { kv.emplace_back(k, v); }
  void add(const std::string& k, int v) { add(k, std::to_string(v)); }
  void add(const std::string& k, double v) { add(k, format_double(v)); }
  void write(const fs::path& path, const analysis::Header& header) const {
    auto os = open_out(path);
    analysis::write_header(os, header);
    os << "key,value\n";
    for (const auto& [k, v] : kv) os << k << ',' << v << '\n';
  }
};

std::map<std::string, std::string> read_summary(const fs::path& path) {
  const CsvTable t = read_csv_file(path.string());
  std::map<std::string, std::string> out;
  for (const auto& r : t.rows)
    if (r.size() == 2) out[r[0]] = r[1];
  return out;
}

std::map<std::string, std::string> read_key_values(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing artifact " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

void write_surrogate_outputs(const RunConfig& cfg, const galerkin::CoupledModel& model,
                             const galerkin::PropagationResult& res, const fs::path& dir,
                             const analysis::Header& header) {
  const StateLayout layout = state_layout(cfg);
  const int s = cfg.s1 + cfg.s2;
  {
    auto os = open_out(dir / "coefficients_u1.csv");
    write_coefficients(os, header, res.U1);
  }
  {
    auto os = open_out(dir / "coefficients_u2.csv");
    write_coefficients(os, header, res.U2);
  }
  write_basis(dir / "basis.csv", header, s, cfg.p);

  const auto m1 = analysis::moments(res.U1);
  const auto m2 = analysis::moments(res.U2);
  write_moments(dir / "moments_u1.csv", header, layout, 1, m1.mean, m1.stddev);
  write_moments(dir / "moments_u2.csv", header, layout, 2, m2.mean, m2.stddev);

  const basis::BasisSplit split(cfg.s1, cfg.s2, cfg.p);
  {
    auto os = open_out(dir / "sensitivity.csv");
    analysis::write_sensitivity_csv(os, header, {"u1", "u2"},
                                    {analysis::anova(res.U1, split, model.gramian(1)),
                                     analysis::anova(res.U2, split, model.gramian(2))});
  }

  const MatrixXd pts = analysis::sample_points(s, cfg.mc_samples, cfg.seed);
  const MatrixXd y1 = analysis::surrogate_sample(res.U1, s, cfg.p, pts);
  const MatrixXd y2 = analysis::surrogate_sample(res.U2, s, cfg.p, pts);
  MatrixXd f(layout.functionals.size(), pts.cols());
  for (int k = 0; k < pts.cols(); ++k) f.col(k) = functionals(model, y1.col(k), y2.col(k));
  auto os = open_out(dir / "samples.csv");
  analysis::write_samples_csv(os, header, layout.functionals, f);
}

void write_diagnostics(const galerkin::PropagationResult& res, const fs::path& dir, const analysis::Header& header) {
  {
    auto os = open_out(dir / "diagnostics.csv");
    analysis::write_header(os, header);
    os << "iteration,module,increment,d,order,support,trunc_error,order_error\n";
    for (const auto& r : res.records)
      os << r.iteration << ',' << r.module << ',' << format_double(r.increment) << ',' << r.d << ',' << r.order << ','
         << r.support << ',' << format_double(r.trunc_error) << ',' << format_double(r.order_error) << '\n';
  }
  if (res.mode == "reduced") {
    auto os = open_out(dir / "spectra.csv");
    analysis::write_header(os, header);
    os << "iteration,module,mode,sigma\n";
    for (const auto& r : res.records)
      for (int j = 0; j < r.sigma.size(); ++j)
        os << r.iteration << ',' << r.module << ',' << j + 1 << ',' << format_double(r.sigma[j]) << '\n';
  }
  // Wall times vary run to run, so they stay out of the CSV artifacts.
  auto os = open_out(dir / "timing.txt");
  os << "solve_seconds_1=" << format_double(res.solve_seconds[0]) << '\n'
     << "solve_seconds_2=" << format_double(res.solve_seconds[1]) << '\n'
     << "solve_seconds=" << format_double(res.solve_seconds[0] + res.solve_seconds[1]) << '\n'
     << "total_seconds=" << format_double(res.total_seconds) << '\n';
  for (const auto& r : res.records)
    os << "iteration_" << r.iteration << "_module_" << r.module << "=" << format_double(r.solve_seconds) << ','
       << format_double(r.elapsed_seconds) << '\n';
}

int run_isp(const RunConfig& cfg, Mode mode, const fs::path& dir, std::ostream& log) {
  auto model = make_model(cfg);
  const auto header = artifact_header(cfg, mode_name(mode));
  const auto opts = isp_options(cfg);
  const auto res = mode == Mode::Standard ? galerkin::run_standard_isp(*model, cfg.s1, cfg.s2, opts)
                                          : galerkin::run_reduced_isp(*model, cfg.s1, cfg.s2, opts, reduced_options(cfg));
  write_surrogate_outputs(cfg, *model, res, dir, header);
  write_diagnostics(res, dir, header);

  SummaryWriter sum;
  sum.add("mode", res.mode);
  sum.add("iterations", res.iterations);
  sum.add("converged", res.converged ? 1 : 0);
  sum.add("final_increment_1", res.final_increment[0]);
  sum.add("final_increment_2", res.final_increment[1]);
  sum.add("solves_1", res.solves[0]);
  sum.add("solves_2", res.solves[1]);
  if (mode == Mode::Reduced) {
    for (int i = 0; i < 2; ++i) {
      const std::string t = std::to_string(i + 1);
      sum.add("d" + t, res.d[i]);
      sum.add("order" + t, res.order[i]);
      sum.add("support" + t, res.support[i]);
      sum.add("eps_dim_term" + t, res.eps_dim_term[i]);
      sum.add("eps_ord_term" + t, res.eps_ord_term[i]);
    }
  }
  sum.write(dir / "summary.csv", header);

  log << model->name() << ' ' << res.mode << ": " << (res.converged ? "converged" : "not converged") << " after "
      << res.iterations << " iterations, module solve time "
      << format_double(res.solve_seconds[0] + res.solve_seconds[1]) << " s";
  if (mode == Mode::Reduced)
    log << ", (d1,p1,Q1,d2,p2,Q2) = (" << res.d[0] << ',' << res.order[0] << ',' << res.support[0] << ',' << res.d[1]
        << ',' << res.order[1] << ',' << res.support[1] << ')';
  log << '\n';
  return res.converged ? kConverged : kNotConverged;
}

void write_state_samples(const fs::path& path, const analysis::Header& header, const MatrixXd& U) {
  auto os = open_out(path);
  analysis::write_header(os, header);
  os << "sample";
  for (int r = 0; r < U.rows(); ++r) os << ",x" << r;
  os << '\n';
  for (int k = 0; k < U.cols(); ++k) {
    os << k;
    for (int r = 0; r < U.rows(); ++r) os << ',' << format_double(U(r, k));
    os << '\n';
  }
}

int run_mc(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  auto model = make_model(cfg);
  const auto header = artifact_header(cfg, "mc");
  analysis::McOptions mo;
  mo.samples = cfg.mc_samples;
  mo.seed = cfg.seed;
  const auto t0 = std::chrono::steady_clock::now();
  const auto mc = analysis::mc_oracle(*model, cfg.s1, cfg.s2, mo);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const int s = cfg.s1 + cfg.s2;
  {
    auto os = open_out(dir / "mc_points.csv");
    analysis::write_header(os, header);
    os << "sample,converged,iterations";
    for (int d = 0; d < s; ++d) os << ",xi" << d + 1;
    os << '\n';
    for (int k = 0; k < mc.requested; ++k) {
      os << k << ',' << int(mc.converged[k]) << ',' << mc.iterations[k];
      for (int d = 0; d < s; ++d) os << ',' << format_double(mc.points(d, k));
      os << '\n';
    }
  }
  write_state_samples(dir / "mc_u1.csv", header, mc.U1);
  write_state_samples(dir / "mc_u2.csv", header, mc.U2);
  const StateLayout layout = state_layout(cfg);
  if (mc.used > 0) {
    write_moments(dir / "mc_moments_u1.csv", header, layout, 1, mc.stats1.mean, mc.stats1.stddev);
    write_moments(dir / "mc_moments_u2.csv", header, layout, 2, mc.stats2.mean, mc.stats2.stddev);
  }
  {
    MatrixXd f(layout.functionals.size(), mc.requested);
    for (int k = 0; k < mc.requested; ++k) f.col(k) = functionals(*model, mc.U1.col(k), mc.U2.col(k));
    auto os = open_out(dir / "samples.csv");
    analysis::write_samples_csv(os, header, layout.functionals, f);
  }
  SummaryWriter sum;
  sum.add("mode", std::string("mc"));
  sum.add("requested", mc.requested);
  sum.add("used", mc.used);
  sum.add("excluded", mc.excluded);
  sum.add("flagged", mc.flagged ? 1 : 0);
  sum.write(dir / "summary.csv", header);
  auto ts = open_out(dir / "timing.txt");
  ts << "total_seconds=" << format_double(secs) << '\n';

  log << model->name() << " mc: " << mc.used << " of " << mc.requested << " samples converged in "
      << format_double(secs) << " s\n";
  if (mc.flagged) log << "more than 1% of the samples were excluded\n";
  return mc.used > 0 && !mc.flagged ? kConverged : kNotConverged;
}

analysis::McResult read_mc(const fs::path& dir, int s, int n1, int n2) {
  analysis::McResult mc;
  const CsvTable pts = read_csv_file((dir / "mc_points.csv").string());
  const CsvTable u1 = read_csv_file((dir / "mc_u1.csv").string());
  const CsvTable u2 = read_csv_file((dir / "mc_u2.csv").string());
  const int N = static_cast<int>(pts.rows.size());
  if (static_cast<int>(u1.rows.size()) != N || static_cast<int>(u2.rows.size()) != N)
    throw std::runtime_error("mc artifacts in " + dir.string() + " disagree on the sample count");
  mc.requested = N;
  mc.points.resize(s, N);
  mc.U1.resize(n1, N);
  mc.U2.resize(n2, N);
  mc.converged.assign(N, 0);
  mc.iterations.assign(N, 0);
  for (int k = 0; k < N; ++k) {
    const auto& r = pts.rows[k];
    if (static_cast<int>(r.size()) != 3 + s) throw std::runtime_error("mc_points.csv has the wrong width");
    mc.converged[k] = static_cast<char>(std::stoi(r[1]));
    mc.iterations[k] = std::stoi(r[2]);
    for (int d = 0; d < s; ++d) mc.points(d, k) = to_double(r[3 + d]);
    if (static_cast<int>(u1.rows[k].size()) != n1 + 1 || static_cast<int>(u2.rows[k].size()) != n2 + 1)
      throw std::runtime_error("mc state samples have the wrong width");
    for (int i = 0; i < n1; ++i) mc.U1(i, k) = to_double(u1.rows[k][i + 1]);
    for (int i = 0; i < n2; ++i) mc.U2(i, k) = to_double(u2.rows[k][i + 1]);
  }
  std::vector<int> keep;
  for (int k = 0; k < N; ++k)
    if (mc.converged[k]) keep.push_back(k);
  mc.used = static_cast<int>(keep.size());
  mc.excluded = N - mc.used;
  mc.flagged = mc.excluded * 100 > N;
  if (mc.used > 0) {
    MatrixXd a(n1, mc.used), b(n2, mc.used);
    for (int c = 0; c < mc.used; ++c) {
      a.col(c) = mc.U1.col(keep[c]);
      b.col(c) = mc.U2.col(keep[c]);
    }
    mc.stats1 = analysis::sample_stats(a);
    mc.stats2 = analysis::sample_stats(b);
  }
  return mc;
}

}  // namespace

Mode parse_mode(const std::string& s) {
  if (s == "standard") return Mode::Standard;
  if (s == "reduced") return Mode::Reduced;
  if (s == "mc") return Mode::Mc;
  throw ConfigError("unknown mode '" + s + "'");
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Standard: return "standard";
    case Mode::Reduced: return "reduced";
    case Mode::Mc: return "mc";
  }
  return "";
}

std::unique_ptr<galerkin::CoupledModel> make_model(const RunConfig& cfg, bool mms, int m) {
  if (cfg.model == "thermal_neutronics") {
    models::TnParams p;
    p.m = m > 0 ? m : cfg.resolved_m();
    p.s1 = cfg.s1;
    p.s2 = cfg.s2;
    p.H_bar = constant(cfg, "H_bar", p.H_bar);
    p.E = constant(cfg, "E", p.E);
    p.Sigma_bar = constant(cfg, "Sigma_bar", p.Sigma_bar);
    p.S = constant(cfg, "S", p.S);
    p.delta_H = constant(cfg, "delta_H", p.delta_H);
    p.delta_Sigma = constant(cfg, "delta_Sigma", p.delta_Sigma);
    p.l_H = constant(cfg, "l_H", p.l_H);
    p.l_Sigma = constant(cfg, "l_Sigma", p.l_Sigma);
    p.mms = mms;
    p.identity_gramian = cfg.identity_gramian;
    return std::make_unique<models::ThermalNeutronicsModel>(p);
  }
  if (cfg.model == "boussinesq") {
    models::BoussinesqParams p;
    p.m = m > 0 ? m : cfg.resolved_m();
    p.s1 = cfg.s1;
    p.s2 = cfg.s2;
    p.Pr = constant(cfg, "Pr", p.Pr);
    p.Ra_bar = constant(cfg, "Ra_bar", p.Ra_bar);
    p.Th_bar = constant(cfg, "Th_bar", p.Th_bar);
    p.delta_Ra = constant(cfg, "delta_Ra", p.delta_Ra);
    p.delta_h = constant(cfg, "delta_h", p.delta_h);
    p.l_Ra = constant(cfg, "l_Ra", p.l_Ra);
    p.l_h = constant(cfg, "l_h", p.l_h);
    p.mms = mms;
    p.identity_gramian = cfg.identity_gramian;
    return std::make_unique<models::BoussinesqModel>(p);
  }
  throw ConfigError("unknown model '" + cfg.model + "'");
}

StateLayout state_layout(const RunConfig& cfg) {
  StateLayout l;
  const int m = cfg.resolved_m();
  l.coords.resize(2, m * m);
  if (cfg.model == "boussinesq") {
    const double h = 1.0 / m;
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) l.coords.col(i + m * j) << (i + 0.5) * h, (j + 0.5) * h;
    l.names[0] = {"u", "v", "p"};
    l.names[1] = {"t"};
    l.functionals = {"kinetic_energy", "thermal_energy"};
  } else {
    const double h = 1.0 / (m - 1);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) l.coords.col(i + m * j) << i * h, j * h;
    l.names[0] = {"T"};
    l.names[1] = {"phi"};
    l.functionals = {"T_integral", "phi_integral"};
  }
  return l;
}

VectorXd functionals(const galerkin::CoupledModel& model, const VectorXd& u1, const VectorXd& u2) {
  VectorXd f(2);
  if (auto* bq = dynamic_cast<const models::BoussinesqModel*>(&model)) {
    f << bq->kinetic_energy(u1), bq->thermal_energy(u2);
  } else if (auto* tn = dynamic_cast<const models::ThermalNeutronicsModel*>(&model)) {
    const VectorXd w = tn->mass() * VectorXd::Ones(tn->nodes());
    f << w.dot(u1), w.dot(u2);
  } else {
    f << u1.sum(), u2.sum();
  }
  return f;
}

galerkin::IspOptions isp_options(const RunConfig& cfg) {
  galerkin::IspOptions o;
  o.p = cfg.p;
  o.q = cfg.resolved_q();
  o.eps_bgs = cfg.eps_bgs;
  o.max_iter = cfg.max_iter;
  return o;
}

galerkin::ReducedOptions reduced_options(const RunConfig& cfg) {
  galerkin::ReducedOptions r;
  r.eps_dim[0] = cfg.eps1dim;
  r.eps_dim[1] = cfg.eps2dim;
  r.eps_ord[0] = cfg.eps1ord;
  r.eps_ord[1] = cfg.eps2ord;
  return r;
}

analysis::Header artifact_header(const RunConfig& cfg, const std::string& kind) {
  return {{"config_hash", config_hash(cfg)},
          {"ordering", basis::kOrderingVersion},
          {"seed", std::to_string(cfg.seed)},
          {"model", cfg.model},
          {"kind", kind}};
}

int cmd_run(const RunConfig& cfg, Mode mode, const std::string& root, std::ostream& log) {
  const fs::path dir = fs::path(root) / mode_name(mode);
  fs::create_directories(dir);
  {
    auto os = open_out(dir / "config.txt");
    os << canonical_form(cfg);
  }
  if (mode == Mode::Mc) return run_mc(cfg, dir, log);
  return run_isp(cfg, mode, dir, log);
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < columns.size(); ++k)
    if (columns[k] == name) return static_cast<int>(k);
  throw std::runtime_error("missing column " + name);
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  bool have_columns = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_columns && line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) t.header[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    if (!have_columns) {
      t.columns = split_line(line);
      have_columns = true;
    } else {
      t.rows.push_back(split_line(line));
    }
  }
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing artifact " + path);
  return read_csv(in);
}

void write_coefficients(std::ostream& os, const analysis::Header& header, const MatrixXd& U) {
  analysis::write_header(os, header);
  os << "row";
  for (int j = 0; j < U.cols(); ++j) os << ",c" << j;
  os << '\n';
  for (int r = 0; r < U.rows(); ++r) {
    os << r;
    for (int j = 0; j < U.cols(); ++j) os << ',' << format_double(U(r, j));
    os << '\n';
  }
}

MatrixXd read_coefficients(const std::string& path) {
  const CsvTable t = read_csv_file(path);
  const int cols = static_cast<int>(t.columns.size()) - 1;
  MatrixXd U(t.rows.size(), cols);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (static_cast<int>(t.rows[r].size()) != cols + 1) throw std::runtime_error(path + ": ragged row");
    for (int j = 0; j < cols; ++j) U(r, j) = to_double(t.rows[r][j + 1]);
  }
  return U;
}

ComparisonRow compare_run(const RunConfig& cfg, const std::string& root) {
  const fs::path base(root);
  const std::string hash = config_hash(cfg);
  for (const char* mode : {"standard", "reduced", "mc"}) {
    const CsvTable s = read_csv_file((base / mode / "summary.csv").string());
    auto it = s.header.find("config_hash");
    if (it == s.header.end() || it->second != hash)
      throw std::runtime_error((base / mode).string() + " was produced by a different config");
  }
  auto model = make_model(cfg);
  const int n1 = model->module(1).size(), n2 = model->module(2).size();
  const auto mc = read_mc(base / "mc", cfg.s1 + cfg.s2, n1, n2);
  if (mc.used == 0) throw std::runtime_error("mc reference has no converged samples");

  ComparisonRow row;
  row.model = cfg.model;
  row.s1 = cfg.s1;
  row.s2 = cfg.s2;
  row.p = cfg.p;
  const auto err = [&](const char* mode) {
    const MatrixXd U1 = read_coefficients((base / mode / "coefficients_u1.csv").string());
    const MatrixXd U2 = read_coefficients((base / mode / "coefficients_u2.csv").string());
    return analysis::surrogate_error(*model, U1, U2, cfg.s1, cfg.s2, cfg.p, mc);
  };
  row.eps_s = err("standard");
  row.eps_r = err("reduced");
  row.C_s = to_double(read_key_values(base / "standard" / "timing.txt").at("solve_seconds"));
  row.C_r = to_double(read_key_values(base / "reduced" / "timing.txt").at("solve_seconds"));
  row.speedup = row.C_r > 0.0 ? row.C_s / row.C_r : 0.0;
  const auto red = read_summary(base / "reduced" / "summary.csv");
  row.d1 = std::stoi(red.at("d1"));
  row.pt1 = std::stoi(red.at("order1"));
  row.Q1 = std::stoi(red.at("support1"));
  row.d2 = std::stoi(red.at("d2"));
  row.pt2 = std::stoi(red.at("order2"));
  row.Q2 = std::stoi(red.at("support2"));
  return row;
}

namespace {
const char* kComparisonColumns = "model,s1,s2,p,eps_s,C_s,d1,pt1,Q1,d2,pt2,Q2,eps_r,C_r,speedup";
}

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  os << "# ordering=" << basis::kOrderingVersion << '\n'
     << "# error_metric=G-weighted relative discrepancy of mean and std against MC at common points\n"
     << kComparisonColumns << '\n';
  for (const auto& r : rows)
    os << r.model << ',' << r.s1 << ',' << r.s2 << ',' << r.p << ',' << format_double(r.eps_s) << ','
       << format_double(r.C_s) << ',' << r.d1 << ',' << r.pt1 << ',' << r.Q1 << ',' << r.d2 << ',' << r.pt2 << ','
       << r.Q2 << ',' << format_double(r.eps_r) << ',' << format_double(r.C_r) << ',' << format_double(r.speedup)
       << '\n';
}

std::vector<ComparisonRow> read_comparison_csv(std::istream& is) {
  const CsvTable t = read_csv(is);
  if (t.columns != split_line(kComparisonColumns)) throw std::runtime_error("unexpected comparison columns");
  std::vector<ComparisonRow> rows;
  for (const auto& f : t.rows) {
    if (f.size() != t.columns.size()) throw std::runtime_error("ragged comparison row");
    ComparisonRow r;
    r.model = f[0];
    r.s1 = std::stoi(f[1]);
    r.s2 = std::stoi(f[2]);
    r.p = std::stoi(f[3]);
    r.eps_s = to_double(f[4]);
    r.C_s = to_double(f[5]);
    r.d1 = std::stoi(f[6]);
    r.pt1 = std::stoi(f[7]);
    r.Q1 = std::stoi(f[8]);
    r.d2 = std::stoi(f[9]);
    r.pt2 = std::stoi(f[10]);
    r.Q2 = std::stoi(f[11]);
    r.eps_r = to_double(f[12]);
    r.C_r = to_double(f[13]);
    r.speedup = to_double(f[14]);
    rows.push_back(r);
  }
  return rows;
}

void print_comparison(std::ostream& os, const std::vector<ComparisonRow>& rows) {
  os << std::left << std::setw(20) << "model" << std::right << std::setw(4) << "s1" << std::setw(4) << "s2"
     << std::setw(4) << "p" << std::setw(11) << "eps_s" << std::setw(10) << "C_s" << std::setw(4) << "d1"
     << std::setw(4) << "p~1" << std::setw(5) << "Q~1" << std::setw(4) << "d2" << std::setw(4) << "p~2"
     << std::setw(5) << "Q~2" << std::setw(11) << "eps_r" << std::setw(10) << "C_r" << std::setw(9) << "Cs/Cr"
     << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(20) << r.model << std::right << std::setw(4) << r.s1 << std::setw(4) << r.s2
       << std::setw(4) << r.p << std::scientific << std::setprecision(2) << std::setw(11) << r.eps_s << std::fixed
       << std::setprecision(2) << std::setw(10) << r.C_s << std::setw(4) << r.d1 << std::setw(4) << r.pt1
       << std::setw(5) << r.Q1 << std::setw(4) << r.d2 << std::setw(4) << r.pt2 << std::setw(5) << r.Q2
       << std::scientific << std::setprecision(2) << std::setw(11) << r.eps_r << std::fixed << std::setprecision(2)
       << std::setw(10) << r.C_r << std::setw(9) << r.speedup << '\n';
  }
  os.unsetf(std::ios::floatfield);
}

int cmd_compare(const std::vector<RunConfig>& cfgs, const std::vector<std::string>& roots, const std::string& out_path,
                std::ostream& log) {
  std::vector<ComparisonRow> rows;
  for (std::size_t k = 0; k < cfgs.size(); ++k) rows.push_back(compare_run(cfgs[k], roots[k]));
  if (!out_path.empty()) {
    const fs::path p(out_path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    auto os = open_out(p);
    write_comparison_csv(os, rows);
  }
  print_comparison(log, rows);
  return kConverged;
}

double mms_spacing(const std::string& model, int m) {
  return model == "boussinesq" ? 1.0 / m : 1.0 / (m - 1);
}

analysis::MmsReport mms_report(const RunConfig& cfg) {
  const auto grids = cfg.resolved_mms_grids();
  std::map<int, std::unique_ptr<galerkin::CoupledModel>> built;
  std::vector<double> spacing;
  for (int m : grids) {
    built[m] = make_model(cfg, true, m);
    spacing.push_back(mms_spacing(cfg.model, m));
  }
  const bool bq = cfg.model == "boussinesq";
  const double tol = std::min(cfg.eps_bgs, 1e-10);
  const int max_iter = std::max(cfg.max_iter, 200);
  const auto solve = [&](int m, const double* xi1, const double* xi2, double& error) {
    const auto& model = *built.at(m);
    const auto res = galerkin::deterministic_bgs(model, xi1, xi2, tol, max_iter);
    if (!res.converged || !res.u1.allFinite() || !res.u2.allFinite()) return false;
    if (bq)
      error = static_cast<const models::BoussinesqModel&>(model).mms_error(res.u1, res.u2, xi2);
    else
      error = static_cast<const models::ThermalNeutronicsModel&>(model).mms_error(res.u1, res.u2);
    return true;
  };
  return analysis::mms_study(grids, spacing, cfg.s1, cfg.s2, cfg.mms_samples, cfg.seed, solve);
}

int cmd_verify_mms(const RunConfig& cfg, const std::string& root, std::ostream& log) {
  const fs::path dir = fs::path(root) / "mms";
  fs::create_directories(dir);
  const auto rep = mms_report(cfg);
  const bool pass = std::abs(rep.slope - 2.0) <= 0.2;
  int failures = 0;
  for (const auto& lv : rep.levels) failures += lv.failures;
  auto header = artifact_header(cfg, "mms");
  header.emplace_back("slope", format_double(rep.slope));
  auto os = open_out(dir / "mms_report.csv");
  analysis::write_header(os, header);
  os << "m,spacing,mean_error,failures\n";
  for (const auto& lv : rep.levels) {
    os << lv.m << ',' << format_double(lv.spacing) << ',' << format_double(lv.mean_error) << ',' << lv.failures << '\n';
    log << "m=" << lv.m << " h=" << lv.spacing << " mean error=" << lv.mean_error << " failures=" << lv.failures
        << '\n';
  }
  log << "slope " << rep.slope << " (band 2 +- 0.2): " << (pass ? "PASS" : "FAIL") << '\n';
  if (failures > 0) return kNotConverged;
  return pass ? kConverged : kSlopeOutOfBand;
}

}  // namespace chaoscoupler::app
