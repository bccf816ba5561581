#include "app/config.hpp"
#include "app/pipeline.hpp"

#include "chaoscoupler/parallel.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace app = chaoscoupler::app;

int main(int argc, char** argv) {
  CLI::App cli{"Stochastic Galerkin propagation for two-module coupled systems"};
  cli.require_subcommand(1);

  int threads = -1;
  std::string config_path, mode = "standard", out;
  std::vector<std::string> config_paths;

  auto* run = cli.add_subcommand("run", "Run the standard, reduced or Monte Carlo pipeline");
  run->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--mode", mode, "standard, reduced or mc")->check(CLI::IsMember({"standard", "reduced", "mc"}));
  run->add_option("--out", out, "Output root (overrides output_dir)");
  run->add_option("--threads", threads, "Worker threads, 0 = all cores");

  auto* cmp = cli.add_subcommand("compare", "Tabulate errors and costs of completed runs");
  cmp->add_option("--config", config_paths, "Config files of completed runs")->required()->check(CLI::ExistingFile);
  cmp->add_option("--out", out, "Comparison CSV path (default <output_dir>/comparison.csv of the first config)");
  cmp->add_option("--threads", threads, "Worker threads, 0 = all cores");

  auto* mms = cli.add_subcommand("verify-mms", "Manufactured-solution convergence study");
  mms->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  mms->add_option("--out", out, "Output root (overrides output_dir)");
  mms->add_option("--threads", threads, "Worker threads, 0 = all cores");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : app::kConfigError;
  }

  chaoscoupler::parallel::set_threads(chaoscoupler::parallel::resolve_threads(threads));

  try {
    if (*run) {
      const auto cfg = app::load_config(config_path);
      return app::cmd_run(cfg, app::parse_mode(mode), out.empty() ? cfg.output_dir : out, std::cout);
    }
    if (*cmp) {
      std::vector<app::RunConfig> cfgs;
      std::vector<std::string> roots;
      for (const auto& p : config_paths) {
        cfgs.push_back(app::load_config(p));
        roots.push_back(cfgs.back().output_dir);
      }
      const std::string path = out.empty() ? roots.front() + "/comparison.csv" : out;
      return app::cmd_compare(cfgs, roots, path, std::cout);
    }
    if (*mms) {
      const auto cfg = app::load_config(config_path);
      return app::cmd_verify_mms(cfg, out.empty() ? cfg.output_dir : out, std::cout);
    }
  } catch (const app::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return app::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return app::kConfigError;
  }
  return app::kConfigError;
}
