#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lrising/errors.hpp"
#include "lrising/pipelines.hpp"
#include "lrising/run_config.hpp"
#include "lrising/threading.hpp"
#include "lrising/version.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitBudget = 4;

struct Common {
  std::string config_file;
  std::vector<std::string> overrides;
  std::string output_dir;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("-c,--config", common.config_file, "INI configuration file");
  cmd->add_option("-s,--set", common.overrides, "Override as section.key=value (repeatable)");
  cmd->add_option("-o,--output-dir", common.output_dir, "Shortcut for --set run.output_dir=DIR");
}

lrising::RunConfig resolve(const Common& common) {
  lrising::RunConfig config;
  if (!common.config_file.empty()) config = lrising::load_config(common.config_file);
  for (const auto& item : common.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw lrising::ConfigError("override '" + item + "' is not of the form section.key=value");
    }
    lrising::apply_override(config, item.substr(0, eq), item.substr(eq + 1));
  }
  if (!common.output_dir.empty()) config.output_dir = common.output_dir;
  lrising::validate(config);
  return config;
}

void report(const lrising::CommandResult& result) {
  for (const auto& f : result.files) std::cout << f << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-range transverse-field Ising model: effective few-magnon theory, "
               "exact quench dynamics and spectroscopy"};
  app.set_version_flag("--version", std::string(lrising::kVersion));
  app.require_subcommand(1);

  Common common;
  bool resume = false;
  std::string series_file;
  std::string gaps_file;

  auto* effective = app.add_subcommand("effective", "Diagonalise effective sectors, write gaps");
  add_common(effective, common);
  auto* boundstates = app.add_subcommand("boundstates", "Classify two-magnon eigenstates");
  add_common(boundstates, common);
  auto* quench = app.add_subcommand("quench", "Exact quench from the polarised state");
  add_common(quench, common);
  quench->add_flag("--resume", resume, "Continue from checkpoint.bin in the output directory");
  auto* spectrum = app.add_subcommand("spectrum", "Windowed FFT, peaks and gap assignment");
  add_common(spectrum, common);
  spectrum->add_option("--series", series_file, "Time series CSV")->required();
  spectrum->add_option("--gaps", gaps_file, "Gap table CSV for peak assignment");
  auto* dispersion = app.add_subcommand("dispersion", "Single-magnon band along X-M-Gamma-X-S");
  add_common(dispersion, common);
  auto* show = app.add_subcommand("show-config", "Print the resolved configuration as INI");
  add_common(show, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    lrising::configure_threads();
    const lrising::RunConfig config = resolve(common);
    if (effective->parsed()) report(lrising::cmd_effective(config));
    if (boundstates->parsed()) report(lrising::cmd_boundstates(config));
    if (quench->parsed()) report(lrising::cmd_quench(config, resume));
    if (spectrum->parsed()) report(lrising::cmd_spectrum(config, series_file, gaps_file));
    if (dispersion->parsed()) report(lrising::cmd_dispersion(config));
    if (show->parsed()) std::cout << lrising::to_ini(config);
  } catch (const lrising::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lrising::BudgetError& e) {
    std::cerr << "budget refusal: " << e.what() << '\n';
    return kExitBudget;
  } catch (const lrising::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
