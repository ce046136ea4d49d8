#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "crimenet/errors.hpp"
#include "crimenet/io.hpp"
#include "crimenet/pipeline.hpp"
#include "test_util.hpp"

using namespace crimenet;
namespace fs = std::filesystem;

namespace {

PipelineConfig desk_config(const std::string& out_dir, std::uint64_t seed = 7) {
  PipelineConfig config;
  config.synthetic = true;
  config.plan.seed = seed;
  config.plan.communities = 8;
  config.plan.crime_types = 3;
  config.plan.request_types = 32;
  config.plan.request_subset_size = 8;
  config.plan.request_rate_min = 40.0;
  config.plan.police_stations = 2;
  config.out_dir = out_dir;
  return config;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("cube bundles round-trip through save and load") {
  auto cube = testutil::small_cube();
  fs::path dir = temp_dir("crimenet_cube_rt");
  save_cube(dir.string(), cube);
  MonthlyCube loaded = load_cube(dir.string());

  CHECK(loaded.span == cube.span);
  CHECK(loaded.types.labels == cube.types.labels);
  CHECK(loaded.request_types == cube.request_types);
  for (int i = 0; i < cube.span.count; ++i) {
    CHECK((loaded.crime_counts[i] - cube.crime_counts[i]).cwiseAbs().sum() == 0);
    CHECK((loaded.service_calls[i] - cube.service_calls[i]).cwiseAbs().sum() == 0);
    CHECK((loaded.visits_by_library[i] - cube.visits_by_library[i]).cwiseAbs().sum() == 0);
  }
  CHECK((loaded.adjacency - cube.adjacency).cwiseAbs().sum() == 0);
  CHECK(loaded.schools.size() == cube.schools.size());
  CHECK(loaded.schools[0].act == cube.schools[0].act);
  CHECK(loaded.stations[0].communities == cube.stations[0].communities);
  CHECK((loaded.police_count - cube.police_count).cwiseAbs().sum() == 0);

  SUBCASE("missing files raise IncompleteBundle") {
    fs::remove(dir / "cube_crimes.csv");
    CHECK_THROWS_AS(load_cube(dir.string()), IncompleteBundle);
  }
}

TEST_CASE("model files reproduce predictions bit for bit") {
  testutil::Rng rng(3);
  fs::path dir = temp_dir("crimenet_models_rt");

  Matrix x(10, 2);
  Vector y(10);
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = rng.uniform(-1, 1);
    x(i, 1) = rng.uniform(-1, 1);
    y[i] = std::sin(3 * x(i, 0)) - x(i, 1);
  }

  PolyRegModel poly = fit_polyreg(x, y);
  save_polyreg((dir / "poly.json").string(), poly);
  PolyRegModel poly_back = load_polyreg((dir / "poly.json").string());
  SvrModel svr = fit_svr(x, y, {});
  save_svr((dir / "svr.json").string(), svr);
  SvrModel svr_back = load_svr((dir / "svr.json").string());
  ArModel ar = fit_ar(y, 2, LagMode::monthly);
  save_ar((dir / "ar.json").string(), ar);
  ArModel ar_back = load_ar((dir / "ar.json").string());

  for (int k = 0; k < 10; ++k) {
    Vector probe = x.row(k).transpose();
    CHECK(predict_polyreg(poly, probe) == predict_polyreg(poly_back, probe));
    CHECK(predict_svr(svr, probe) == predict_svr(svr_back, probe));
  }
  auto f1 = forecast_ar(ar, y, 4);
  auto f2 = forecast_ar(ar_back, y, 4);
  for (int h = 0; h < 4; ++h) CHECK(f1[h] == f2[h]);

  SUBCASE("kind mismatch is a data error") {
    CHECK_THROWS_AS(load_svr((dir / "poly.json").string()), DataError);
  }
}

TEST_CASE("synthetic run completes and writes every report") {
  fs::path dir = temp_dir("crimenet_run");
  PipelineConfig config = desk_config(dir.string());
  std::ostringstream log;
  RunOutcome outcome = run_pipeline(config, log);

  // 3 models x 2 variants of rmse rows per type
  CHECK(outcome.reports.size() == 2);
  for (const auto& report : outcome.reports) CHECK(report.rows.size() == 3 * 3);
  for (const char* name :
       {"rmse_summary.csv", "boxstats.csv", "predictions.csv", "comparison.csv",
        "fig_top11.csv", "fig_all_types.csv", "manifest.json", "config_resolved.json",
        "similarity_full.csv", "neighbors_full.csv", "similarity_only_crime.csv"}) {
    CHECK(fs::exists(dir / name));
  }
  // prediction set covers exactly (test months x communities x types x models x variants)
  CHECK(outcome.predictions.entries.size() == 12u * 8 * 3 * 3 * 2);

  SUBCASE("the AR baseline is identical across variants") {
    for (const auto& entry : outcome.predictions.entries) {
      if (entry.model != ModelKind::ar || entry.variant != Variant::full) continue;
      bool found = false;
      for (const auto& other : outcome.predictions.entries) {
        if (other.model == ModelKind::ar && other.variant == Variant::only_crime &&
            other.month_index == entry.month_index &&
            other.community_id == entry.community_id &&
            other.type_index == entry.type_index) {
          CHECK(other.predicted == entry.predicted);
          found = true;
          break;
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("reruns with the same config are byte-identical") {
  fs::path dir_a = temp_dir("crimenet_det_a");
  fs::path dir_b = temp_dir("crimenet_det_b");
  std::ostringstream log;
  run_pipeline(desk_config(dir_a.string(), 12345), log);
  run_pipeline(desk_config(dir_b.string(), 12345), log);
  for (const char* name : {"rmse_summary.csv", "boxstats.csv", "predictions.csv",
                           "comparison.csv", "fig_top11.csv", "fig_all_types.csv"}) {
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }
}

TEST_CASE("config replay from the resolved snapshot is identical") {
  fs::path dir_a = temp_dir("crimenet_replay_a");
  fs::path dir_b = temp_dir("crimenet_replay_b");
  std::ostringstream log;
  run_pipeline(desk_config(dir_a.string(), 99), log);

  PipelineConfig replay = load_config((dir_a / "config_resolved.json").string());
  replay.out_dir = dir_b.string();
  run_pipeline(replay, log);
  CHECK(slurp(dir_a / "predictions.csv") == slurp(dir_b / "predictions.csv"));
  CHECK(slurp(dir_a / "rmse_summary.csv") == slurp(dir_b / "rmse_summary.csv"));
}

TEST_CASE("only-crime-only runs restrict the similarity input layers") {
  fs::path dir = temp_dir("crimenet_oc");
  PipelineConfig config = desk_config(dir.string());
  config.variants = {Variant::only_crime};
  config.dump_networks = true;
  std::ostringstream log;
  RunOutcome outcome = run_pipeline(config, log);
  CHECK(outcome.reports.size() == 1);
  CHECK_FALSE(fs::exists(dir / "comparison.csv"));
  CHECK_FALSE(fs::exists(dir / "similarity_full.csv"));
  // dumped edge lists contain no school/library/request nodes
  std::string edges = slurp(dir / "networks" / "only_crime_2011-01.edges");
  CHECK(edges.find("school") == std::string::npos);
  CHECK(edges.find("library") == std::string::npos);
  CHECK(edges.find("request") == std::string::npos);
  CHECK(edges.find("police") != std::string::npos);
}

TEST_CASE("report rebuilds comparisons and figure data from a run directory") {
  fs::path dir = temp_dir("crimenet_report");
  std::ostringstream log;
  run_pipeline(desk_config(dir.string(), 5), log);
  fs::remove(dir / "comparison.csv");
  fs::remove(dir / "fig_top11.csv");

  std::ostringstream report_log;
  cmd_report(dir.string(), report_log);
  CHECK(fs::exists(dir / "comparison.csv"));
  CHECK(fs::exists(dir / "fig_top11.csv"));
  CHECK(report_log.str().find("full-network wins") != std::string::npos);

  SUBCASE("top-11 grouping holds 11 types when more exist") {
    // 3 synthetic types -> the full list; the row count still matches
    std::string fig = slurp(dir / "fig_top11.csv");
    long lines = std::count(fig.begin(), fig.end(), '\n');
    CHECK(lines == 1 + 3 * 3 * 2);  // header + types x models x variants
  }

  SUBCASE("an empty directory is an incomplete bundle") {
    fs::path empty = temp_dir("crimenet_report_empty");
    CHECK_THROWS_AS(cmd_report(empty.string(), report_log), IncompleteBundle);
  }
}

TEST_CASE("single-variant bundles skip the comparison with a notice") {
  fs::path dir = temp_dir("crimenet_report_single");
  PipelineConfig config = desk_config(dir.string(), 6);
  config.variants = {Variant::full};
  std::ostringstream log;
  run_pipeline(config, log);
  std::ostringstream report_log;
  cmd_report(dir.string(), report_log);
  CHECK(report_log.str().find("comparison skipped") != std::string::npos);
  CHECK(fs::exists(dir / "fig_all_types.csv"));
}

TEST_CASE("next-month alignment runs end to end") {
  fs::path dir = temp_dir("crimenet_align1");
  PipelineConfig config = desk_config(dir.string(), 17);
  config.alignment = 1;
  config.models = {ModelKind::polyreg};
  config.dump_datasets = true;
  std::ostringstream log;
  RunOutcome outcome = run_pipeline(config, log);
  CHECK(outcome.predictions.entries.size() == 12u * 8 * 3 * 1 * 2);
  CHECK(fs::exists(dir / "datasets" / "full_TYPE_000.csv"));
}

TEST_CASE("annual AR mode runs end to end") {
  fs::path dir = temp_dir("crimenet_ar_annual");
  PipelineConfig config = desk_config(dir.string(), 23);
  config.models = {ModelKind::ar};
  config.ar_mode = LagMode::annual;
  std::ostringstream log;
  RunOutcome outcome = run_pipeline(config, log);
  CHECK(outcome.predictions.entries.size() == 12u * 8 * 3 * 1 * 2);
  for (const auto& entry : outcome.predictions.entries) CHECK(std::isfinite(entry.predicted));
}

TEST_CASE("synth writes the cube bundle and the planted ground truth") {
  fs::path dir = temp_dir("crimenet_synthcmd");
  PipelineConfig config = desk_config(dir.string(), 31);
  std::ostringstream log;
  cmd_synth(config, log);
  CHECK(fs::exists(dir / "cube" / "cube_meta.json"));
  CHECK(fs::exists(dir / "ground_truth.json"));
  std::string truth = slurp(dir / "ground_truth.json");
  CHECK(truth.find("\"sigma\"") != std::string::npos);
  CHECK(truth.find("\"beta\"") != std::string::npos);
}

TEST_CASE("raw CSV sources flow through ingest into a runnable cube") {
  fs::path dir = temp_dir("crimenet_csv_ingest");
  fs::path data = dir / "data";
  fs::create_directories(data);

  // two years of monthly records for two communities and two types
  {
    std::ofstream crimes(data / "crimes.csv");
    crimes << "Date,Primary Type,Community Area\n";
    for (int year = 2011; year <= 2015; ++year) {
      for (int month = 1; month <= 12; ++month) {
        std::string mm = (month < 10 ? "0" : "") + std::to_string(month);
        for (int k = 0; k < 3; ++k)
          crimes << mm << "/10/" << year << " 01:00:00 PM,THEFT,1\n";
        crimes << mm << "/11/" << year << " 01:00:00 AM,ASSAULT,2\n";
      }
    }
  }
  {
    std::ofstream districts(data / "police_district.csv");
    districts << "DISTRICT,COMMUNITY AREAS\n12,1;2\n";
    std::ofstream stations(data / "police_station.csv");
    stations << "DISTRICT\n12\n";
    std::ofstream adjacency(data / "adjacency.csv");
    adjacency << "COMMUNITY AREA,NEIGHBORS\n1,2\n";
  }

  PipelineConfig config;
  config.data_paths["crimes"] = (data / "crimes.csv").string();
  config.data_paths["police_district"] = (data / "police_district.csv").string();
  config.data_paths["police_station"] = (data / "police_station.csv").string();
  config.data_paths["adjacency"] = (data / "adjacency.csv").string();
  config.out_dir = (dir / "out").string();

  std::ostringstream log;
  cmd_ingest(config, log);
  // the report carries per-type annual totals
  CHECK(log.str().find("THEFT: 2011=36") != std::string::npos);
  CHECK(log.str().find("ASSAULT: 2011=12") != std::string::npos);

  MonthlyCube cube = load_cube((dir / "out" / "cube").string());
  CHECK(cube.types.labels == std::vector<std::string>{"ASSAULT", "THEFT"});
  CHECK(cube.crime_count(0, 1, cube.types.index_of("THEFT")) == 3);
  CHECK(cube.police_count[0] == 1);

  // a full run from the persisted bundle completes and reports both variants
  PipelineConfig run_config;
  run_config.cube_dir = (dir / "out" / "cube").string();
  run_config.out_dir = (dir / "out2").string();
  RunOutcome outcome = run_pipeline(run_config, log);
  CHECK(outcome.reports.size() == 2);
  CHECK(fs::exists(dir / "out2" / "comparison.csv"));
}

TEST_CASE("config validation rejects bad spans and missing paths") {
  PipelineConfig config = desk_config("/tmp/unused");
  config.test_begin = Month{2014, 6};  // overlaps training
  CHECK_THROWS_AS(validate_config(config), ConfigError);

  config = desk_config("/tmp/unused");
  config.synthetic = false;
  config.data_paths["crimes"] = "/nonexistent/crimes.csv";
  CHECK_THROWS_AS(validate_config(config), ConfigError);

  config = desk_config("/tmp/unused");
  config.models.clear();
  CHECK_THROWS_AS(validate_config(config), ConfigError);
}

TEST_CASE("ingest persists a cube bundle that run can consume") {
  fs::path dir = temp_dir("crimenet_ingest_run");
  PipelineConfig config = desk_config(dir.string(), 21);
  std::ostringstream log;
  cmd_ingest(config, log);
  CHECK(fs::exists(dir / "cube" / "cube_meta.json"));

  PipelineConfig from_bundle = desk_config((dir / "out2").string(), 21);
  from_bundle.synthetic = false;
  from_bundle.cube_dir = (dir / "cube").string();
  RunOutcome outcome = run_pipeline(from_bundle, log);
  CHECK(outcome.reports.size() == 2);
}
