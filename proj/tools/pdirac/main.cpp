#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace pdirac::cli;

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for periodic Dirac operators"};
  app.require_subcommand(1, 1);

  Options opts;
  std::string config_path;
  double cutoff = 0.0;
  std::uint64_t seed = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--out", opts.out, "Output directory")->capture_default_str();
    sub->add_option("--cutoff", cutoff, "Fourier cutoff radius |k + 2 pi N| <= R");
    sub->add_option("--seed", seed, "Seed for randomized probes");
    sub->add_option("--threads", opts.threads, "Worker threads")->capture_default_str();
  };
  for (const auto& name : command_names()) add_common(app.add_subcommand(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--config")) opts.config = config_path;
  if (sub->count("--cutoff")) opts.cutoff = cutoff;
  if (sub->count("--seed")) opts.seed = seed;

  try {
    RunConfig cfg = opts.config ? load_config(*opts.config) : parse_config(pdirac::Json::object());
    apply_overrides(cfg, opts);
    const CommandResult result = run_command(sub->get_name(), cfg, opts);
    write_artifacts(result, opts.out);
    std::cout << result.summary << '\n';
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "pdirac " << sub->get_name() << ": " << e.what() << '\n';
    return kUsage;
  }
}
