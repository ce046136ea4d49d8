#include "crimenet/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <set>

#include "crimenet/csv.hpp"
#include "crimenet/errors.hpp"
#include "crimenet/io.hpp"
#include "crimenet/linalg.hpp"
#include "crimenet/polyreg.hpp"

namespace crimenet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream create(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

long elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               since)
      .count();
}

MonthlyCube ingest_from_paths(const PipelineConfig& config, std::vector<std::string>* warnings,
                              std::ostream& log) {
  MonthSpan span{config.train_begin,
                 months_between(config.train_begin, config.test_end) + 1};
  auto path_of = [&](const std::string& key) -> std::string {
    auto it = config.data_paths.find(key);
    return it == config.data_paths.end() ? std::string() : it->second;
  };

  const std::string crimes_path = path_of("crimes");
  if (crimes_path.empty()) throw ConfigError("config has no crimes path");
  CrimeLoad crimes = load_crimes(crimes_path, span);
  log << "ingest: crimes rows=" << crimes.stats.rows_total << " loaded=" << crimes.stats.loaded
      << " malformed=" << crimes.stats.malformed
      << " out_of_span=" << crimes.stats.out_of_span << "\n";

  // Tables that provide name -> community maps come first.
  LayerContext context;
  std::vector<LayerTable> tables;
  auto load_one = [&](LayerKind kind) {
    std::string path = path_of(to_string(kind));
    if (path.empty()) return;
    LayerTable table = load_layer(kind, path, &context);
    context.absorb(table);
    log << "ingest: layer " << to_string(kind) << " rows=" << table.rows.size()
        << " skipped=" << table.skipped << "\n";
    tables.push_back(std::move(table));
  };
  for (LayerKind kind : {LayerKind::library, LayerKind::school, LayerKind::police_district,
                         LayerKind::library_visits, LayerKind::school_act,
                         LayerKind::police_station, LayerKind::service311}) {
    load_one(kind);
  }

  IntMatrix adjacency;
  bool have_adjacency = false;
  if (std::string path = path_of("adjacency"); !path.empty()) {
    adjacency = load_adjacency(path);
    have_adjacency = true;
  }

  MonthlyCube cube = aggregate_monthly(crimes.records, tables, span, 77,
                                       have_adjacency ? &adjacency : nullptr, warnings);

  // Annual totals per crime type over the ingested span.
  std::map<std::string, std::map<int, long>> totals;
  for (int i = 0; i < cube.span.count; ++i) {
    int year = cube.span.at(i).year;
    for (int t = 0; t < cube.types.size(); ++t) {
      long sum = cube.crime_counts[i].col(t).sum();
      if (sum != 0) totals[cube.types.labels[t]][year] += sum;
    }
  }
  log << "ingest: crime totals by type and year\n";
  for (const auto& [label, by_year] : totals) {
    log << "  " << label << ":";
    for (const auto& [year, total] : by_year) log << ' ' << year << '=' << total;
    log << "\n";
  }
  return cube;
}

}  // namespace

MonthlyCube acquire_cube(const PipelineConfig& config, std::vector<std::string>* warnings,
                         std::ostream& log) {
  if (!config.cube_dir.empty()) {
    log << "cube: loading bundle " << config.cube_dir << "\n";
    return load_cube(config.cube_dir);
  }
  if (config.synthetic) {
    log << "cube: synthetic plan seed=" << config.plan.seed
        << " communities=" << config.plan.communities << " types=" << config.plan.crime_types
        << "\n";
    return generate_synthetic(config.plan).cube;
  }
  return ingest_from_paths(config, warnings, log);
}

void cmd_ingest(const PipelineConfig& config, std::ostream& log) {
  validate_config(config);
  std::vector<std::string> warnings;
  MonthlyCube cube = acquire_cube(config, &warnings, log);
  for (const auto& warning : warnings) log << "warning: " << warning << "\n";
  fs::path cube_dir = fs::path(config.out_dir) / "cube";
  save_cube(cube_dir.string(), cube);
  log << "cube: saved bundle to " << cube_dir.string() << "\n";
}

void cmd_synth(const PipelineConfig& config, std::ostream& log) {
  SynthResult result = generate_synthetic(config.plan);
  fs::path cube_dir = fs::path(config.out_dir) / "cube";
  save_cube(cube_dir.string(), result.cube);
  save_ground_truth((fs::path(config.out_dir) / "ground_truth.json").string(), result.truth);
  log << "synth: seed=" << config.plan.seed << " cube saved to " << cube_dir.string()
      << " (ground_truth.json alongside)\n";
}

TrainTestSplit resolve_split(const PipelineConfig& config, MonthSpan span) {
  TrainTestSplit split;
  split.train_begin = span.index_of(config.train_begin);
  split.test_begin = span.index_of(config.test_begin);
  int train_end = span.index_of(config.train_end);
  int test_end = span.index_of(config.test_end);
  if (split.train_begin < 0 || split.test_begin < 0 || train_end < 0 || test_end < 0)
    throw ConfigError("train/test ranges fall outside the cube span");
  split.train_count = train_end - split.train_begin + 1;
  split.test_count = test_end - split.test_begin + 1;
  return split;
}

namespace {

struct VariantArtifacts {
  TopKNeighbors neighbors;
  SupervisedDataset shared;  // normalized X for every type; y slices per type
  DesignMatrices design;
};

// Per-type predictions for one (variant, model); row order follows test_keys.
using PredictionsByType = std::vector<Vector>;

}  // namespace

RunOutcome run_pipeline(const PipelineConfig& config, std::ostream& log) {
  validate_config(config);
  const auto t_start = std::chrono::steady_clock::now();
  fs::create_directories(config.out_dir);
  const fs::path out(config.out_dir);

  std::vector<std::string> warnings;
  MonthlyCube cube = acquire_cube(config, &warnings, log);
  for (const auto& warning : warnings) log << "warning: " << warning << "\n";
  const long ms_ingest = elapsed_ms(t_start);

  TrainTestSplit split = resolve_split(config, cube.span);
  const int n_types = cube.types.size();
  const int n_test = split.test_count * cube.n_communities;

  const bool want_ar = std::count(config.models.begin(), config.models.end(), ModelKind::ar) > 0;
  const bool want_poly =
      std::count(config.models.begin(), config.models.end(), ModelKind::polyreg) > 0;
  const bool want_svr = std::count(config.models.begin(), config.models.end(), ModelKind::svr) > 0;

  // Stage 1: similarities and fixed neighbors per variant (training months only,
  // so no test-month crime information leaks into neighbor selection).
  const auto t_sim = std::chrono::steady_clock::now();
  std::map<Variant, VariantArtifacts> artifacts;
  for (Variant variant : config.variants) {
    std::vector<CommunitySimilarity> monthly;
    monthly.reserve(split.train_count);
    for (int i = split.train_begin; i < split.train_begin + split.train_count; ++i) {
      MultiLayerNetwork net = build_network(cube, i, variant);
      if (config.dump_networks) {
        fs::create_directories(out / "networks");
        auto file = create(out / "networks" /
                           (to_string(variant) + "_" + format_month(cube.span.at(i)) + ".edges"));
        write_edge_list(net, file);
      }
      monthly.push_back(similarity_matrix(net, config.similarity, config.rank_tol));
    }
    CommunitySimilarity aggregate = aggregate_similarities(monthly);
    VariantArtifacts& art = artifacts[variant];
    art.neighbors = top_two_neighbors(aggregate);
    {
      auto file = create(out / ("similarity_" + to_string(variant) + ".csv"));
      write_similarity_csv(aggregate, file);
      auto nfile = create(out / ("neighbors_" + to_string(variant) + ".csv"));
      write_neighbors_csv(art.neighbors, nfile);
    }
    art.design = build_design_matrices(cube, art.neighbors, split, config.alignment);
    art.shared.minmax = fit_minmax(art.design.x_train_raw);
    art.shared.x_train = apply_minmax_rows(art.design.x_train_raw, art.shared.minmax);
    art.shared.x_test = apply_minmax_rows(art.design.x_test_raw, art.shared.minmax);
    art.shared.train_keys = art.design.train_keys;
    art.shared.test_keys = art.design.test_keys;
  }
  const long ms_similarity = elapsed_ms(t_sim);

  auto target_vector = [&](const std::vector<SampleKey>& keys, int type) {
    Vector y(static_cast<Eigen::Index>(keys.size()));
    for (size_t r = 0; r < keys.size(); ++r)
      y[static_cast<Eigen::Index>(r)] =
          cube.crime_count(keys[r].month_index, keys[r].community_id, type);
    return y;
  };

  // Stage 2: model fits and test predictions.
  const auto t_fit = std::chrono::steady_clock::now();
  fs::create_directories(out / "models");

  // The AR baseline consumes only the per-(community, type) crime series; it
  // is independent of the network variant and computed once.
  PredictionsByType ar_predictions(n_types);
  if (want_ar) {
    const int gap = split.test_begin - (split.train_begin + split.train_count);
    const int horizon = gap + split.test_count;
    for (int t = 0; t < n_types; ++t) {
      std::vector<Vector> series(cube.n_communities);
      for (int c = 1; c <= cube.n_communities; ++c) {
        Vector s(split.train_count);
        for (int i = 0; i < split.train_count; ++i)
          s[i] = cube.crime_count(split.train_begin + i, c, t);
        series[c - 1] = std::move(s);
      }
      ArModel model = fit_ar_pooled(series, config.ar_lag, config.ar_mode);
      save_ar((out / "models" / ("ar_" + cube.types.labels[t] + ".json")).string(), model);
      Vector preds(n_test);
      for (int c = 1; c <= cube.n_communities; ++c) {
        auto forecast = forecast_ar(model, series[c - 1], horizon);
        for (int h = 0; h < split.test_count; ++h)
          preds[static_cast<Eigen::Index>(h) * cube.n_communities + (c - 1)] =
              forecast[gap + h];
      }
      ar_predictions[t] = std::move(preds);
    }
  }

  std::map<Variant, std::map<ModelKind, PredictionsByType>> predictions;
  for (Variant variant : config.variants) {
    VariantArtifacts& art = artifacts[variant];
    const Matrix& x_train = art.shared.x_train;
    const Matrix& x_test = art.shared.x_test;

    if (want_ar) predictions[variant][ModelKind::ar] = ar_predictions;

    if (want_poly) {
      // Quadratic expansion and the normal-equations pseudoinverse are shared
      // by every crime type; only the targets change.
      Matrix phi_train(x_train.rows(), 2 * x_train.cols() + 1);
      for (Eigen::Index r = 0; r < x_train.rows(); ++r)
        phi_train.row(r) = expand_quadratic(x_train.row(r).transpose()).transpose();
      Matrix phi_test(x_test.rows(), 2 * x_test.cols() + 1);
      for (Eigen::Index r = 0; r < x_test.rows(); ++r)
        phi_test.row(r) = expand_quadratic(x_test.row(r).transpose()).transpose();
      Matrix normal_pinv = pseudo_inverse(phi_train.transpose() * phi_train, 1e-12);

      PredictionsByType by_type(n_types);
      for (int t = 0; t < n_types; ++t) {
        Vector y = target_vector(art.shared.train_keys, t);
        PolyRegModel model;
        model.dim = static_cast<int>(x_train.cols());
        model.coefficients = normal_pinv * (phi_train.transpose() * y);
        save_polyreg((out / "models" /
                      ("polyreg_" + to_string(variant) + "_" + cube.types.labels[t] + ".json"))
                         .string(),
                     model);
        by_type[t] = phi_test * model.coefficients;
      }
      predictions[variant][ModelKind::polyreg] = std::move(by_type);
    }

    if (want_svr) {
      const double gamma =
          config.svr.gamma ? *config.svr.gamma : 1.0 / static_cast<double>(x_train.cols());
      Matrix kernel = rbf_kernel_matrix(x_train, gamma);
      // Cross kernel between test and training rows, reused by every type.
      Matrix cross(x_test.rows(), x_train.rows());
      for (Eigen::Index i = 0; i < x_test.rows(); ++i)
        for (Eigen::Index j = 0; j < x_train.rows(); ++j)
          cross(i, j) = std::exp(-gamma * (x_test.row(i) - x_train.row(j)).squaredNorm());

      PredictionsByType by_type(n_types);
      for (int t = 0; t < n_types; ++t) {
        Vector y = target_vector(art.shared.train_keys, t);
        SmoSolution solution = smo_solve(kernel, y, config.svr.C, config.svr.epsilon,
                                         config.svr.tol, config.svr.max_pair_updates);
        by_type[t] = cross * solution.beta + Vector::Constant(x_test.rows(), solution.bias);

        SvrModel model;
        model.bias = solution.bias;
        model.gamma = gamma;
        model.C = config.svr.C;
        model.epsilon = config.svr.epsilon;
        long n_sv = (solution.beta.array() != 0.0).count();
        model.support_vectors.resize(n_sv, x_train.cols());
        model.dual_coeffs.resize(n_sv);
        for (long k = 0, row = 0; k < solution.beta.size(); ++k) {
          if (solution.beta[k] == 0.0) continue;
          model.support_vectors.row(row) = x_train.row(k);
          model.dual_coeffs[row] = solution.beta[k];
          ++row;
        }
        save_svr((out / "models" /
                  ("svr_" + to_string(variant) + "_" + cube.types.labels[t] + ".json"))
                     .string(),
                 model);
      }
      predictions[variant][ModelKind::svr] = std::move(by_type);
    }

    if (config.dump_datasets) {
      fs::create_directories(out / "datasets");
      for (int t = 0; t < n_types; ++t) {
        SupervisedDataset dataset = art.shared;
        dataset.y_train = target_vector(art.shared.train_keys, t);
        dataset.y_test = target_vector(art.shared.test_keys, t);
        auto file = create(out / "datasets" /
                           (to_string(variant) + "_" + cube.types.labels[t] + ".csv"));
        write_dataset_csv(cube, dataset, file);
      }
    }
  }
  const long ms_fit = elapsed_ms(t_fit);

  // Stage 3: prediction set, reports, CSVs.
  const auto t_eval = std::chrono::steady_clock::now();
  RunOutcome outcome;
  outcome.registry = cube.types;
  outcome.span = cube.span;
  const std::vector<SampleKey>& test_keys = artifacts[config.variants.front()].shared.test_keys;
  for (Variant variant : config.variants) {
    for (ModelKind model : config.models) {
      auto it = predictions[variant].find(model);
      if (it == predictions[variant].end()) continue;
      for (int t = 0; t < n_types; ++t) {
        const Vector& preds = it->second[t];
        for (int r = 0; r < n_test; ++r) {
          PredictionEntry entry;
          entry.month_index = test_keys[r].month_index;
          entry.community_id = test_keys[r].community_id;
          entry.type_index = t;
          entry.model = model;
          entry.variant = variant;
          entry.actual = cube.crime_count(entry.month_index, entry.community_id, t);
          entry.predicted = preds[r];
          if (config.clamp_nonnegative && entry.predicted < 0.0) entry.predicted = 0.0;
          outcome.predictions.entries.push_back(entry);
        }
      }
    }
  }

  for (Variant variant : config.variants) {
    outcome.reports.push_back(build_rmse_report(outcome.predictions, cube.types, variant,
                                                config.rmse_convention));
  }

  {
    auto file = create(out / "rmse_summary.csv");
    write_rmse_summary_csv(outcome.reports, file);
  }
  {
    auto file = create(out / "boxstats.csv");
    write_boxstats_csv(outcome.reports, file);
  }
  {
    auto file = create(out / "predictions.csv");
    write_predictions_csv(outcome.predictions, cube.types, cube.span, file);
  }
  if (outcome.reports.size() == 2) {
    VariantComparison comparison = compare_variants(outcome.reports[0], outcome.reports[1]);
    auto file = create(out / "comparison.csv");
    write_comparison_csv(comparison, file);
  }
  {
    std::vector<int> all_types = top_types_by_total(outcome.reports.front(), n_types);
    auto all_file = create(out / "fig_all_types.csv");
    write_plot_data_csv(outcome.reports, all_types, all_file);
    std::vector<int> top11 = top_types_by_total(outcome.reports.front(), 11);
    auto top_file = create(out / "fig_top11.csv");
    write_plot_data_csv(outcome.reports, top11, top_file);
  }
  const long ms_eval = elapsed_ms(t_eval);

  for (const auto& report : outcome.reports) {
    for (int t : report.excluded_types)
      log << "note: type " << cube.types.labels[t]
          << " has no crimes in the test span; RMSE undefined, excluded ("
          << to_string(report.variant) << ")\n";
  }

  {
    json manifest;
    manifest["tool"] = "crimenet";
    manifest["version"] = "0.1.0";
    manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION);
    manifest["config"] = json::parse(config_to_json(config));
    manifest["conventions"] = {
        {"rmse", to_string(config.rmse_convention)},
        {"quantiles", "linear interpolation at fractional rank p*(n-1)"},
        {"box_values", "absolute errors per (community, month) cell"}};
    manifest["warnings"] = warnings;
    manifest["timings_ms"] = {{"ingest", ms_ingest},
                              {"similarity", ms_similarity},
                              {"fit", ms_fit},
                              {"evaluate", ms_eval},
                              {"total", elapsed_ms(t_start)}};
    create(out / "manifest.json") << manifest.dump(2) << '\n';
    create(out / "config_resolved.json") << config_to_json(config) << '\n';
  }

  log << "run: wrote rmse_summary.csv boxstats.csv predictions.csv"
      << (outcome.reports.size() == 2 ? " comparison.csv" : "")
      << " fig_top11.csv fig_all_types.csv manifest.json to " << config.out_dir << "\n";
  return outcome;
}

void cmd_run(const PipelineConfig& config, std::ostream& log) { run_pipeline(config, log); }

namespace {

struct ParsedSummary {
  std::vector<RmseReport> reports;  // indexed by variant presence
  std::vector<std::string> labels;
};

int label_index(std::vector<std::string>& labels, const std::string& label) {
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  labels.push_back(label);
  return static_cast<int>(labels.size()) - 1;
}

ModelKind parse_model(const std::string& name) {
  if (name == "ar") return ModelKind::ar;
  if (name == "polyreg") return ModelKind::polyreg;
  if (name == "svr") return ModelKind::svr;
  throw DataError("unknown model '" + name + "' in results");
}

}  // namespace

void cmd_report(const std::string& results_dir, std::ostream& log) {
  const fs::path dir(results_dir);
  for (const char* name : {"rmse_summary.csv", "boxstats.csv", "predictions.csv"}) {
    if (!fs::exists(dir / name)) throw IncompleteBundle((dir / name).string());
  }

  std::vector<std::string> labels;
  std::map<std::string, RmseReport> by_variant;  // "full" / "only_crime"
  std::vector<std::string> variant_order;

  {
    std::ifstream in(dir / "rmse_summary.csv");
    CsvReader csv(in);
    auto cols = csv.require_columns({"type", "model", "variant", "rmse"});
    std::vector<std::string> fields;
    while (csv.next(fields)) {
      if (fields.size() == 1 && fields[0].empty()) continue;
      const std::string& variant = fields[cols[2]];
      if (by_variant.find(variant) == by_variant.end()) {
        variant_order.push_back(variant);
        by_variant[variant].variant =
            variant == "full" ? Variant::full : Variant::only_crime;
      }
      RmseRow row;
      row.type_index = label_index(labels, fields[cols[0]]);
      row.model = parse_model(fields[cols[1]]);
      row.rmse = std::stod(fields[cols[3]]);
      by_variant[variant].rows.push_back(row);
    }
  }
  {
    std::ifstream in(dir / "boxstats.csv");
    CsvReader csv(in);
    auto cols = csv.require_columns({"type", "model", "variant", "min", "q1", "median", "q3", "max"});
    std::vector<std::string> fields;
    while (csv.next(fields)) {
      if (fields.size() == 1 && fields[0].empty()) continue;
      RmseReport& report = by_variant[fields[cols[2]]];
      int type = label_index(labels, fields[cols[0]]);
      ModelKind model = parse_model(fields[cols[1]]);
      for (auto& row : report.rows) {
        if (row.type_index == type && row.model == model) {
          row.box = BoxStats{std::stod(fields[cols[3]]), std::stod(fields[cols[4]]),
                             std::stod(fields[cols[5]]), std::stod(fields[cols[6]]),
                             std::stod(fields[cols[7]])};
          break;
        }
      }
    }
  }

  // Test totals per type from any single (model, variant) slice of the
  // predictions; that slice covers each cell exactly once.
  std::vector<long> totals(labels.size(), 0);
  {
    std::ifstream in(dir / "predictions.csv");
    CsvReader csv(in);
    auto cols = csv.require_columns({"type", "model", "variant", "actual"});
    std::vector<std::string> fields;
    std::string slice_model, slice_variant;
    while (csv.next(fields)) {
      if (fields.size() == 1 && fields[0].empty()) continue;
      if (slice_model.empty()) {
        slice_model = fields[cols[1]];
        slice_variant = fields[cols[2]];
      }
      if (fields[cols[1]] != slice_model || fields[cols[2]] != slice_variant) continue;
      int type = label_index(labels, fields[cols[0]]);
      if (type >= static_cast<int>(totals.size())) totals.resize(type + 1, 0);
      totals[type] += std::stol(fields[cols[3]]);
    }
  }

  std::vector<RmseReport> reports;
  for (const auto& variant : variant_order) {
    RmseReport report = by_variant[variant];
    report.type_labels = labels;
    report.test_totals = totals;
    reports.push_back(std::move(report));
  }
  if (reports.empty()) throw IncompleteBundle("rmse_summary.csv holds no rows");

  if (reports.size() == 2) {
    VariantComparison comparison = compare_variants(reports[0], reports[1]);
    auto file = create(dir / "comparison.csv");
    write_comparison_csv(comparison, file);
    std::map<ModelKind, std::pair<int, int>> tally;  // wins / total types
    for (const auto& row : comparison.rows) {
      tally[row.model].second += 1;
      if (row.winner == 1) tally[row.model].first += 1;
    }
    log << "report: full-network wins per model:";
    for (const auto& [model, counts] : tally)
      log << ' ' << to_string(model) << '=' << counts.first << '/' << counts.second;
    log << "\n";
  } else {
    log << "report: single variant present; comparison skipped\n";
  }

  {
    std::vector<int> all_types = top_types_by_total(reports.front(),
                                                    static_cast<int>(labels.size()));
    auto all_file = create(dir / "fig_all_types.csv");
    write_plot_data_csv(reports, all_types, all_file);
    std::vector<int> top11 = top_types_by_total(reports.front(), 11);
    auto top_file = create(dir / "fig_top11.csv");
    write_plot_data_csv(reports, top11, top_file);
    log << "report: wrote fig_top11.csv (" << top11.size() << " types) and fig_all_types.csv ("
        << all_types.size() << " types)\n";
  }
}

}  // namespace crimenet
