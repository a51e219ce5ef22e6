// Command-line front end. Every subcommand reads the same config file.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "weakkam/commands.hpp"
#include "weakkam/config.hpp"
#include "weakkam/errors.hpp"

namespace {

enum ExitCode { ok = 0, check_failed = 1, config_failure = 2, no_convergence = 3, unsupported = 4 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-to-continuum weak KAM toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::optional<long long> seed;
  int threads = 0;
  app.add_option("--config", config_path, "key = value configuration file")->required();
  app.add_option("--out", out_dir, "output directory (overrides `out` in the config)");
  app.add_option("--seed", seed, "overrides `seed` in the config");
  app.add_option("--threads", threads, "worker threads; falls back to WEAKKAM_THREADS")->check(CLI::NonNegativeNumber);

  bool fixed_point = false;
  for (const auto& name : weakkam::command_names()) {
    auto* sub = app.add_subcommand(name);
    if (name == "weakkam") sub->add_flag("--fixed-point", fixed_point, "also run the value-iteration fixed point");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_failure;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    auto cfg = weakkam::load_config(config_path);
    if (seed) {
      if (*seed < 0) throw weakkam::config_error("--seed must be nonnegative", 0);
      cfg.seed = static_cast<std::uint64_t>(*seed);
    }
    if (!out_dir.empty()) cfg.out = out_dir;
    weakkam::CommandOptions opts;
    opts.threads = threads;
    opts.fixed_point = fixed_point;
    return weakkam::run_command(command, cfg, cfg.out, opts, std::cerr);
  } catch (const weakkam::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_failure;
  } catch (const weakkam::iteration_limit& e) {
    std::cerr << "no convergence: " << e.what() << " (last residual " << e.last_residual() << " after "
              << e.iterations() << " iterations)\n";
    return no_convergence;
  } catch (const weakkam::numerical_degeneracy& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return no_convergence;
  } catch (const weakkam::unsupported_configuration& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return unsupported;
  } catch (const weakkam::invalid_input& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return config_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return check_failed;
  }
}
