#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fracsum/error.hpp"
#include "run_config.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::map<std::string, std::string> flags;
};

// --config, --set and one flag per config key.
void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config, "key = value config file");
  sub->add_option("-s,--set", c.overrides, "override, key=value (repeatable)");
  for (const auto& k : fracsum::cli::RunConfig::known_keys())
    sub->add_option_function<std::string>(
        "--" + k, [&c, k](const std::string& v) { c.flags[k] = v; }, "config key " + k);
}

fracsum::cli::RunConfig load(const Common& c) {
  auto cfg = c.config.empty() ? fracsum::cli::RunConfig{} : fracsum::cli::RunConfig::from_file(c.config);
  for (const auto& o : c.overrides) cfg.set(o);
  for (const auto& [k, v] : c.flags) cfg.set(k, v);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-space spectral solver for (lambda I + mu H + eta d/dx + (-Delta)^{1/2}) u = f"};
  app.require_subcommand(1);

  Common c;
  std::string cache_action = "list";
  auto* expand = app.add_subcommand("expand", "least-squares expansion of a right-hand side");
  auto* solve = app.add_subcommand("solve", "one solve with a built-in or sampled right-hand side");
  auto* conv = app.add_subcommand("convergence", "error or coefficient difference over a list of degrees");
  auto* heat = app.add_subcommand("heat", "backward-Euler fractional heat evolution");
  auto* wave = app.add_subcommand("wave", "frequency-domain fractional Hilbert wave solve");
  auto* cache = app.add_subcommand("cache", "list, clear or warm the appended-function cache");
  cache->add_option("action", cache_action, "list | clear | warm")->check(CLI::IsMember({"list", "clear", "warm"}));
  for (auto* s : {expand, solve, conv, heat, wave, cache}) add_common(s, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    const auto cfg = load(c);
    if (expand->parsed()) fracsum::cli::cmd_expand(cfg);
    else if (solve->parsed()) fracsum::cli::cmd_solve(cfg);
    else if (conv->parsed()) fracsum::cli::cmd_convergence(cfg);
    else if (heat->parsed()) fracsum::cli::cmd_heat(cfg);
    else if (wave->parsed()) fracsum::cli::cmd_wave(cfg);
    else if (cache->parsed()) fracsum::cli::cmd_cache(cfg, cache_action);
  } catch (const fracsum::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fracsum::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fracsum::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
