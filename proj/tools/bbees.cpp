#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbees/cli/config.hpp"
#include "bbees/cli/run.hpp"
#include "bbees/core/errors.hpp"

namespace {

struct Options {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  int workers = 0;
  std::vector<std::string> sets;
  std::map<std::string, std::string> keys;
};

void add_common(CLI::App* sub, Options& o, const std::string& section) {
  sub->add_option("--config", o.config, "INI config file")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "Base seed");
  sub->add_option("--out", o.out, "Output directory");
  sub->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--set", o.sets, "Override section.key=value")->take_all();
  for (const auto& key : bbees::cli::section_keys(section)) {
    sub->add_option("--" + key, o.keys[key], section + "." + key);
  }
}

bbees::cli::RunConfig assemble(const CLI::App& sub, const Options& o, const std::string& section) {
  using namespace bbees::cli;
  RunConfig cfg = o.config.empty() ? RunConfig{} : parse_config_file(o.config);
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    const auto dot = s.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw bbees::ConfigError("--set expects section.key=value, got '" + s + "'");
    }
    set_value(cfg, s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1));
  }
  for (const auto& [key, value] : o.keys) {
    if (sub.count("--" + key) > 0) set_value(cfg, section, key, value);
  }
  if (sub.count("--seed") > 0) cfg.run.seed = o.seed;
  if (sub.count("--out") > 0) cfg.run.out = o.out;
  if (sub.count("--workers") > 0) cfg.run.workers = o.workers;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace bbees::cli;
  CLI::App app{"Brownian bees simulator and obstacle-problem solver"};
  app.require_subcommand(1);
  std::map<std::string, Options> options;
  for (const auto& cmd : subcommands()) add_common(app.add_subcommand(cmd), options[cmd], section_of(cmd));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help();
    std::cerr << error_record("usage", e.what()) << '\n';
    return 2;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  try {
    const auto cfg = assemble(*sub, options[cmd], section_of(cmd));
    const auto res = run(cmd, cfg, std::cout);
    std::cout << "artifacts: " << res.root.string() << " (manifest sha256 " << res.manifest_sha256 << ")\n";
    return res.exit_code;
  } catch (const bbees::ConfigError& e) {
    std::cerr << error_record("config", e.what()) << '\n';
  } catch (const bbees::DomainError& e) {
    std::cerr << error_record("domain", e.what()) << '\n';
  } catch (const bbees::SimulationError& e) {
    std::cerr << error_record("simulation", e.what()) << '\n';
  } catch (const bbees::ResourceError& e) {
    std::cerr << error_record("resource", e.what()) << '\n';
  } catch (const std::exception& e) {
    std::cerr << error_record("runtime", e.what()) << '\n';
  }
  return 2;
}
