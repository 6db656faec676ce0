#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sjfa/commands.hpp"
#include "sjfa/errors.hpp"

namespace {

int run(sjfa::Mode mode, const std::string& config, const std::string& out, std::optional<std::uint64_t> seed,
        std::optional<unsigned> threads) {
  try {
    sjfa::RunConfig cfg = sjfa::RunConfig::load(config);
    if (cfg.mode != mode) {
      std::cerr << "error: config mode is '" << sjfa::mode_name(cfg.mode) << "' but the subcommand is '"
                << sjfa::mode_name(mode) << "'\n";
      return 1;
    }
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    const sjfa::CommandResult r = sjfa::run_command(cfg, out);
    std::cout << r.summary << '\n';
    for (const auto& f : r.files) std::cout << "wrote " << f.string() << '\n';
    if (!r.violations.empty()) {
      for (const auto& v : r.violations) std::cerr << "invariant violated: " << v << '\n';
      return 2;
    }
    return 0;
  } catch (const sjfa::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const sjfa::InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SJF-with-aging queues: fluid limits, simulation and convergence checks"};
  app.require_subcommand(1);

  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  int code = 0;

  const auto add = [&](const char* name, const char* help, sjfa::Mode mode) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "override the configured seed");
    sub->add_option("--threads", threads, "worker threads for replications")->check(CLI::PositiveNumber);
    sub->callback([&, mode] { code = run(mode, config, out, seed, threads); });
  };
  add("fluid", "solve the fluid limit and write fluid.csv", sjfa::Mode::fluid);
  add("simulate", "simulate one scaled system and write its event log", sjfa::Mode::simulate);
  add("compare", "measure scaled simulations against the fluid limit", sjfa::Mode::compare);

  CLI11_PARSE(app, argc, argv);
  return code;
}
