#pragma once

#include <map>
#include <string>
#include <vector>

#include "crimenet/ar.hpp"
#include "crimenet/evaluate.hpp"
#include "crimenet/similarity.hpp"
#include "crimenet/svr.hpp"
#include "crimenet/synth.hpp"

namespace crimenet {

// One structured config drives every subcommand; command-line flags override
// single fields afterwards.
struct PipelineConfig {
  // Either a cube bundle, a synthetic plan, or raw CSV paths.
  std::string cube_dir;                           // pre-ingested bundle
  bool synthetic = false;
  SynthPlan plan;
  std::map<std::string, std::string> data_paths;  // layer kind / "crimes" / "adjacency" -> path

  Month train_begin{2011, 1};
  Month train_end{2014, 12};
  Month test_begin{2015, 1};
  Month test_end{2015, 12};

  std::vector<Variant> variants = {Variant::full, Variant::only_crime};
  SimilarityKind similarity = SimilarityKind::cosine;
  double rank_tol = 1e-9;
  int alignment = 12;
  std::vector<ModelKind> models = {ModelKind::ar, ModelKind::polyreg, ModelKind::svr};
  SvrParams svr;
  int ar_lag = 2;
  LagMode ar_mode = LagMode::monthly;
  RmseConvention rmse_convention = RmseConvention::paper;
  bool clamp_nonnegative = false;
  bool dump_networks = false;
  bool dump_datasets = false;
  std::string out_dir = "out";
};

PipelineConfig load_config(const std::string& path);  // ConfigError on bad input

// Spans in order, ranges sane, referenced paths present (unless synthetic or
// bundled). ConfigError otherwise.
void validate_config(const PipelineConfig& config);

// Resolved snapshot, replayable via `run --config`.
std::string config_to_json(const PipelineConfig& config);

void set_variants(PipelineConfig& config, const std::string& flag_value);  // full|only-crime|both

}  // namespace crimenet
