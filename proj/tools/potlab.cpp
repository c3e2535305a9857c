#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "potlab/cli/runner.hpp"

int main(int argc, char** argv) {
  using namespace potlab;
  CLI::App app{"potlab: numerical checks of potential estimates"};
  app.require_subcommand(0, 1);
  bool list_top = false;
  app.add_flag("--list", list_top, "list result ids and their parameters");

  auto* run = app.add_subcommand("run", "run every case of a config file");
  std::string config;
  cli::RunOverrides ov;
  std::uint64_t seed = 0;
  bool list = false;
  run->add_option("--config", config, "JSON config path");
  run->add_option("--out", ov.out, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "global seed");
  run->add_flag("--probe", ov.probe, "allow q at or above n/(n-1)");
  run->add_flag("--refine", ov.refine, "rerun every case at 2N");
  run->add_flag("--list", list, "list result ids and their parameters");
  run->add_option("--jobs", ov.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* sw = app.add_subcommand("sweep", "run one ladder result and write a trend CSV");
  lab::InequalityCase sc;
  sc.id = "sweep";
  std::string ladder_text, params_text = "{}", sweep_out = "out";
  bool sweep_probe = false;
  sw->add_option("--result", sc.result, "result id")->required();
  sw->add_option("--ladder", ladder_text, "comma-separated ladder")->required();
  sw->add_option("--n", sc.n, "dimension");
  sw->add_option("--N", sc.N, "points per axis");
  sw->add_option("--L", sc.L, "box length");
  sw->add_option("--params", params_text, "JSON object of result parameters");
  sw->add_option("--id", sc.id, "case id used for output names");
  sw->add_option("--out", sweep_out, "output directory");
  sw->add_flag("--probe", sweep_probe, "allow q at or above n/(n-1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cli::exit_config_error;
  }

  if (list_top || list) {
    std::cout << cli::list_results();
    return 0;
  }
  if (*run) {
    if (config.empty()) {
      std::cerr << "config error: --config is required\n";
      return cli::exit_config_error;
    }
    if (*seed_opt) ov.seed = seed;
    return cli::run(config, ov, std::cout, std::cerr);
  }
  if (*sw) {
    try {
      std::stringstream ss(ladder_text);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) sc.ladder.push_back(std::stod(item));
      sc.params = nlohmann::json::parse(params_text);
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return cli::exit_config_error;
    }
    sc.has_seed = true;
    return cli::sweep(sc, sweep_out, sweep_probe, std::cout, std::cerr);
  }
  std::cout << app.help();
  return 0;
}
