#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "crimenet/config.hpp"
#include "crimenet/evaluate.hpp"
#include "crimenet/features.hpp"

// End-to-end orchestration behind the CLI subcommands: ingest (or generate)
// the cube, build monthly networks and similarities per variant, fix the
// top-2 neighbors on the training aggregate, fit the requested models per
// crime type, predict the test months and write every report CSV.

namespace crimenet {

// Cube per the config: bundle dir, synthetic plan, or raw CSVs, in that
// precedence order.
MonthlyCube acquire_cube(const PipelineConfig& config, std::vector<std::string>* warnings,
                         std::ostream& log);

// `ingest` subcommand: persist the cube bundle under out/cube and print the
// ingestion report (row counts, skips, per-type annual totals).
void cmd_ingest(const PipelineConfig& config, std::ostream& log);

// `synth` subcommand: generate the planned cube, persist it plus the planted
// ground truth.
void cmd_synth(const PipelineConfig& config, std::ostream& log);

struct RunOutcome {
  PredictionSet predictions;
  std::vector<RmseReport> reports;  // one per variant
  CrimeTypeRegistry registry;
  MonthSpan span;
};

// `run` subcommand body; also usable in-process (acceptance tests drive it).
RunOutcome run_pipeline(const PipelineConfig& config, std::ostream& log);

void cmd_run(const PipelineConfig& config, std::ostream& log);

// `report` subcommand: read a finished run directory, emit comparison table
// and plot-ready groupings (top-11 and all types).
void cmd_report(const std::string& results_dir, std::ostream& log);

// Split helper shared with tests: month ranges of the config resolved against
// a cube span.
TrainTestSplit resolve_split(const PipelineConfig& config, MonthSpan span);

}  // namespace crimenet
