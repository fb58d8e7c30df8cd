#include "latharm/config.hpp"
#include "latharm/parallel.hpp"
#include "latharm/version.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int fail(int code, const std::string& message) {
  nlohmann::json err;
  err["error"] = message;
  err["exit_code"] = code;
  std::cout << err.dump(2) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier multiplier operators on the lattice Z^d"};
  app.set_version_flag("--version", latharm::kVersion);

  std::string config_path;
  std::string out_dir;
  std::string command;
  std::uint64_t seed = 0;
  int threads = 0;
  bool quiet = false;

  app.add_option("--config", config_path, "Experiment config file (JSON)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "Seed override for randomized commands");
  app.add_option("--threads", threads, "Worker thread cap")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "Suppress per-step output lines");
  app.add_option("command", command,
                 "Command to run with default parameters (e.g. selftest); "
                 "alternative to --config");

  CLI11_PARSE(app, argc, argv);

  if (threads > 0) latharm::detail::set_max_threads(threads);

  std::string text;
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) return fail(4, "cannot open config file: " + config_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  } else if (!command.empty()) {
    text = std::string("{\"command\":\"") + command + "\"}";
  } else {
    return fail(2, "nothing to do: pass --config <path> or a command name");
  }

  try {
    latharm::ExperimentConfig config = latharm::parse_config(text);
    if (seed_opt->count() > 0) {
      config.seed = seed;
      config.has_seed = true;
    }
    latharm::RunOptions run;
    if (!out_dir.empty()) run.out_dir = out_dir;
    run.quiet = quiet;
    return latharm::run_experiment(config, run);
  } catch (const latharm::ConfigError& e) {
    return fail(2, e.what());
  } catch (const std::exception& e) {
    return fail(4, e.what());
  }
}
