#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "crimenet/errors.hpp"
#include "crimenet/pipeline.hpp"

namespace {

// Flags override the config file; only flags the user actually passed do.
struct FlagOverrides {
  std::string config_path;
  std::string variant;
  std::string models;
  std::string similarity;
  std::string rmse_convention;
  std::string out_dir;
  int alignment = 0;
  long seed = -1;
  bool clamp = false;
  bool dump_networks = false;
  bool dump_datasets = false;
};

crimenet::PipelineConfig resolve_config(const FlagOverrides& flags, const CLI::App& cmd) {
  crimenet::PipelineConfig config;
  if (!flags.config_path.empty()) config = crimenet::load_config(flags.config_path);
  if (cmd.count("--variant")) crimenet::set_variants(config, flags.variant);
  if (cmd.count("--models")) config.models = crimenet::parse_model_list(flags.models);
  if (cmd.count("--alignment")) config.alignment = flags.alignment;
  if (cmd.count("--similarity")) {
    auto kind = crimenet::parse_similarity_kind(flags.similarity);
    if (!kind) throw crimenet::ConfigError("unknown similarity kind '" + flags.similarity + "'");
    config.similarity = *kind;
  }
  if (cmd.count("--rmse-convention")) {
    if (flags.rmse_convention == "paper")
      config.rmse_convention = crimenet::RmseConvention::paper;
    else if (flags.rmse_convention == "cells")
      config.rmse_convention = crimenet::RmseConvention::cells;
    else
      throw crimenet::ConfigError("unknown rmse convention '" + flags.rmse_convention + "'");
  }
  if (cmd.count("--clamp-nonnegative")) config.clamp_nonnegative = true;
  if (cmd.count("--seed")) {
    config.synthetic = true;
    config.plan.seed = static_cast<std::uint64_t>(flags.seed);
  }
  if (cmd.count("--out")) config.out_dir = flags.out_dir;
  if (cmd.count("--dump-networks")) config.dump_networks = true;
  if (cmd.count("--dump-datasets")) config.dump_datasets = true;
  return config;
}

void add_common_flags(CLI::App* cmd, FlagOverrides& flags) {
  cmd->add_option("--config", flags.config_path, "pipeline config file (JSON)");
  cmd->add_option("--variant", flags.variant, "full|only-crime|both");
  cmd->add_option("--models", flags.models, "comma list of polyreg,svr,ar");
  cmd->add_option("--alignment", flags.alignment, "feature-to-target lag in months");
  cmd->add_option("--similarity", flags.similarity, "cosine|raw|inverse_commute");
  cmd->add_option("--rmse-convention", flags.rmse_convention, "paper|cells");
  cmd->add_flag("--clamp-nonnegative", flags.clamp, "clamp negative predictions to 0");
  cmd->add_option("--seed", flags.seed, "synthetic seed (switches to synthetic mode)");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_flag("--dump-networks", flags.dump_networks, "export monthly edge lists");
  cmd->add_flag("--dump-datasets", flags.dump_datasets, "export per-type dataset CSVs");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crimenet: fuse city open-data layers into monthly community networks "
               "and predict per-type monthly crime counts"};
  app.require_subcommand(1);

  FlagOverrides flags;
  std::string report_dir;

  CLI::App* ingest = app.add_subcommand("ingest", "parse sources and persist the monthly cube");
  add_common_flags(ingest, flags);
  CLI::App* run = app.add_subcommand("run", "full pipeline: networks, models, reports");
  add_common_flags(run, flags);
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic cube plus ground truth");
  add_common_flags(synth, flags);
  CLI::App* report = app.add_subcommand("report", "comparison tables and plot data from a run");
  report->add_option("results", report_dir, "directory of a completed run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      crimenet::cmd_ingest(resolve_config(flags, *ingest), std::cout);
    } else if (*run) {
      crimenet::cmd_run(resolve_config(flags, *run), std::cout);
    } else if (*synth) {
      auto config = resolve_config(flags, *synth);
      config.synthetic = true;
      crimenet::cmd_synth(config, std::cout);
    } else if (*report) {
      crimenet::cmd_report(report_dir, std::cout);
    }
  } catch (const crimenet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const crimenet::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
