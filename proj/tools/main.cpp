// sentivol: command-line front end for the sentiment/volatility pipeline.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>

#include "sentivol/errors.hpp"
#include "sentivol/pipeline.hpp"

namespace {

constexpr int kExitInvalidConfig = 2;

sentivol::RunConfig load_with_overrides(const std::string& config_path, const std::optional<std::uint64_t>& seed,
                                        const std::string& out) {
  auto config = sentivol::load_config(config_path);
  if (seed) config.seed = *seed;
  if (!out.empty()) config.out_dir = out;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sentiment proxies, two-stage OLS and EGARCH(1,1)-X estimation"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "text";

  auto* run = app.add_subcommand("run", "Run the full pipeline described by a config file");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out, "Override the output directory");
  run->add_option("--format", format, "Tables to write besides JSON: text, csv or both")
      ->check(CLI::IsMember({"text", "csv", "both", "json"}));

  sentivol::DatasetSpec dataset;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "Write a synthetic dataset and a matching config");
  sim->add_option("--out", sim_out, "Output directory")->required();
  sim->add_option("--seed", dataset.seed, "RNG seed");
  sim->add_option("--length", dataset.length, "Number of returns")->check(CLI::Range(2, 10'000'000));
  sim->add_option("--burn-in", dataset.burn_in, "Discarded warm-up steps");
  sim->add_option("--mu", dataset.params.mu, "Mean return");
  sim->add_option("--omega", dataset.params.omega, "Variance intercept");
  sim->add_option("--alpha", dataset.params.alpha, "Magnitude effect");
  sim->add_option("--beta", dataset.params.beta, "Leverage effect");
  sim->add_option("--gamma", dataset.params.gamma, "Persistence");
  sim->add_option("--delta", dataset.params.delta[0], "Coefficient on delta-SVIX");
  sim->add_option("--svix-scale", dataset.svix_scale, "Innovation scale of the SVIX process");
  sim->add_flag("--bond", dataset.bond, "Also write a bond index and bond snapshots");

  auto* indices = app.add_subcommand("indices", "Compute sentiment indicators only");
  indices->add_option("--config", config_path, "Config file")->required();
  indices->add_option("--out", out, "Override the output directory");

  std::string in_dir;
  auto* report = app.add_subcommand("report", "Re-render tables from a run directory");
  report->add_option("--in", in_dir, "Run output directory")->required();
  report->add_option("--format", format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto config = load_with_overrides(config_path, seed, out);
      if (run->count("--format") > 0) {
        config.formats.text = format == "text" || format == "both";
        config.formats.csv = format == "csv" || format == "both";
      }
      const auto summary = sentivol::run_pipeline(config, std::cout);
      if (summary.exit_code != kExitInvalidConfig) {
        std::cout << fmt::format("{} cells, output in {}\n", summary.cells.size(), config.out_dir.string());
      }
      return summary.exit_code;
    }
    if (*sim) {
      const auto files = sentivol::write_simulated_dataset(dataset, sim_out);
      for (const auto& f : files) std::cout << (std::filesystem::path(sim_out) / f).string() << "\n";
      return 0;
    }
    if (*indices) {
      const auto config = load_with_overrides(config_path, std::nullopt, out);
      for (const auto& f : sentivol::write_indices(config, std::cout)) {
        std::cout << (config.out_dir / f).string() << "\n";
      }
      return 0;
    }
    if (*report) {
      std::cout << sentivol::render_run(in_dir, format);
      return 0;
    }
  } catch (const sentivol::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const sentivol::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
