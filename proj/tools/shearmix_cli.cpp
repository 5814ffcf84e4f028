#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "shearmix/error.hpp"
#include "shearmix/harness/config.hpp"
#include "shearmix/harness/experiments.hpp"

using namespace shearmix;

int main(int argc, char** argv) {
  CLI::App app{"shear-flow mixing experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir, nu_list;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  auto* cfg_opt = app.add_option("--config", config_path, "experiment config file")->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  auto* thr_opt = app.add_option("--threads", threads, "worker threads (fallback: SHEARMIX_THREADS)");
  auto* nu_opt = app.add_option("--nu", nu_list, "comma-separated diffusivities, overrides the config");
  (void)cfg_opt;

  for (const auto& name : harness::subcommands()) app.add_subcommand(name, "run the " + name + " experiment");

  CLI11_PARSE(app, argc, argv);

  try {
    auto doc = config_path.empty() ? harness::ConfigDocument{} : harness::ConfigDocument::load(config_path);
    harness::Overrides o;
    if (*out_opt) o.out_dir = out_dir;
    if (*seed_opt) o.seed = seed;
    if (*thr_opt) o.threads = threads;
    if (*nu_opt) o.nus = harness::parse_number_list(nu_list);
    const auto cfg = harness::make_config(std::move(doc), o);
    return harness::run(app.get_subcommands().front()->get_name(), cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
