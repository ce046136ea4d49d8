#include "crimenet/config.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "crimenet/errors.hpp"

namespace crimenet {

using nlohmann::json;

namespace {

Month month_field(const json& j, const char* key, Month fallback) {
  if (!j.contains(key)) return fallback;
  auto parsed = parse_month(j.at(key).get<std::string>());
  if (!parsed) throw ConfigError(std::string("bad month in config field ") + key);
  return *parsed;
}

}  // namespace

void set_variants(PipelineConfig& config, const std::string& flag_value) {
  if (flag_value == "full") {
    config.variants = {Variant::full};
  } else if (flag_value == "only-crime" || flag_value == "only_crime") {
    config.variants = {Variant::only_crime};
  } else if (flag_value == "both") {
    config.variants = {Variant::full, Variant::only_crime};
  } else {
    throw ConfigError("unknown variant '" + flag_value + "'");
  }
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse failure: " + std::string(e.what()));
  }

  PipelineConfig config;
  try {
    if (j.contains("cube")) config.cube_dir = j.at("cube").get<std::string>();
    if (j.contains("synthetic")) {
      config.synthetic = true;
      const json& s = j.at("synthetic");
      SynthPlan& plan = config.plan;
      if (s.contains("seed")) plan.seed = s.at("seed").get<std::uint64_t>();
      if (s.contains("communities")) plan.communities = s.at("communities").get<int>();
      if (s.contains("crime_types")) plan.crime_types = s.at("crime_types").get<int>();
      if (s.contains("request_types")) plan.request_types = s.at("request_types").get<int>();
      if (s.contains("police_stations")) plan.police_stations = s.at("police_stations").get<int>();
      if (s.contains("schools_per_community"))
        plan.schools_per_community = s.at("schools_per_community").get<int>();
      if (s.contains("start")) plan.start = month_field(s, "start", plan.start);
      if (s.contains("months")) plan.months = s.at("months").get<int>();
      if (s.contains("base_min")) plan.base_min = s.at("base_min").get<double>();
      if (s.contains("base_max")) plan.base_max = s.at("base_max").get<double>();
      if (s.contains("seasonal_amplitude"))
        plan.seasonal_amplitude = s.at("seasonal_amplitude").get<double>();
      if (s.contains("beta")) plan.beta = s.at("beta").get<double>();
      if (s.contains("noise_sigma")) plan.noise_sigma = s.at("noise_sigma").get<double>();
      if (s.contains("visits_min")) plan.visits_min = s.at("visits_min").get<double>();
      if (s.contains("visits_max")) plan.visits_max = s.at("visits_max").get<double>();
      if (s.contains("visits_step_sigma"))
        plan.visits_step_sigma = s.at("visits_step_sigma").get<double>();
      if (s.contains("request_rate_min"))
        plan.request_rate_min = s.at("request_rate_min").get<double>();
      if (s.contains("request_rate_max"))
        plan.request_rate_max = s.at("request_rate_max").get<double>();
      if (s.contains("request_noise_sigma"))
        plan.request_noise_sigma = s.at("request_noise_sigma").get<double>();
      if (s.contains("request_subset_size"))
        plan.request_subset_size = s.at("request_subset_size").get<int>();
    }
    if (j.contains("data")) {
      for (auto& [key, value] : j.at("data").items())
        config.data_paths[key] = value.get<std::string>();
    }
    if (j.contains("span")) {
      const json& s = j.at("span");
      config.train_begin = month_field(s, "train_begin", config.train_begin);
      config.train_end = month_field(s, "train_end", config.train_end);
      config.test_begin = month_field(s, "test_begin", config.test_begin);
      config.test_end = month_field(s, "test_end", config.test_end);
    }
    if (j.contains("variant")) set_variants(config, j.at("variant").get<std::string>());
    if (j.contains("similarity")) {
      const json& s = j.at("similarity");
      if (s.contains("kind")) {
        auto kind = parse_similarity_kind(s.at("kind").get<std::string>());
        if (!kind) throw ConfigError("unknown similarity kind");
        config.similarity = *kind;
      }
      if (s.contains("rank_tol")) config.rank_tol = s.at("rank_tol").get<double>();
    }
    if (j.contains("alignment")) config.alignment = j.at("alignment").get<int>();
    if (j.contains("models")) {
      std::string list;
      for (const auto& m : j.at("models")) list += (list.empty() ? "" : ",") + m.get<std::string>();
      config.models = parse_model_list(list);
    }
    if (j.contains("svr")) {
      const json& s = j.at("svr");
      if (s.contains("C")) config.svr.C = s.at("C").get<double>();
      if (s.contains("epsilon")) config.svr.epsilon = s.at("epsilon").get<double>();
      if (s.contains("gamma")) config.svr.gamma = s.at("gamma").get<double>();
      if (s.contains("tol")) config.svr.tol = s.at("tol").get<double>();
      if (s.contains("max_pair_updates"))
        config.svr.max_pair_updates = s.at("max_pair_updates").get<long>();
    }
    if (j.contains("ar")) {
      const json& s = j.at("ar");
      if (s.contains("lag")) config.ar_lag = s.at("lag").get<int>();
      if (s.contains("lag_mode")) {
        std::string mode = s.at("lag_mode").get<std::string>();
        if (mode == "monthly") config.ar_mode = LagMode::monthly;
        else if (mode == "annual") config.ar_mode = LagMode::annual;
        else throw ConfigError("unknown ar lag_mode '" + mode + "'");
      }
    }
    if (j.contains("rmse_convention")) {
      std::string convention = j.at("rmse_convention").get<std::string>();
      if (convention == "paper") config.rmse_convention = RmseConvention::paper;
      else if (convention == "cells") config.rmse_convention = RmseConvention::cells;
      else throw ConfigError("unknown rmse convention '" + convention + "'");
    }
    if (j.contains("clamp_nonnegative"))
      config.clamp_nonnegative = j.at("clamp_nonnegative").get<bool>();
    if (j.contains("dump_networks")) config.dump_networks = j.at("dump_networks").get<bool>();
    if (j.contains("dump_datasets")) config.dump_datasets = j.at("dump_datasets").get<bool>();
    if (j.contains("out")) config.out_dir = j.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError("config field failure: " + std::string(e.what()));
  }
  return config;
}

void validate_config(const PipelineConfig& config) {
  if (months_between(config.train_begin, config.train_end) < 0)
    throw ConfigError("train range is reversed");
  if (months_between(config.test_begin, config.test_end) < 0)
    throw ConfigError("test range is reversed");
  if (months_between(config.train_end, config.test_begin) < 1)
    throw ConfigError("test range must start after the training range ends");
  if (config.alignment < 1) throw ConfigError("alignment must be >= 1");
  if (config.models.empty()) throw ConfigError("no models selected");
  if (config.variants.empty()) throw ConfigError("no variants selected");
  if (!(config.rank_tol > 0.0)) throw ConfigError("rank_tol must be positive");

  if (!config.synthetic && config.cube_dir.empty()) {
    if (config.data_paths.find("crimes") == config.data_paths.end())
      throw ConfigError("no crimes path, no synthetic plan, and no cube bundle");
    for (const auto& [key, path] : config.data_paths) {
      if (!std::filesystem::exists(path))
        throw ConfigError("data path for '" + key + "' does not exist: " + path);
    }
  }
}

std::string config_to_json(const PipelineConfig& config) {
  json j;
  if (!config.cube_dir.empty()) j["cube"] = config.cube_dir;
  if (config.synthetic) {
    const SynthPlan& plan = config.plan;
    j["synthetic"] = {
        {"seed", plan.seed},
        {"communities", plan.communities},
        {"crime_types", plan.crime_types},
        {"request_types", plan.request_types},
        {"police_stations", plan.police_stations},
        {"schools_per_community", plan.schools_per_community},
        {"start", format_month(plan.start)},
        {"months", plan.months},
        {"base_min", plan.base_min},
        {"base_max", plan.base_max},
        {"seasonal_amplitude", plan.seasonal_amplitude},
        {"beta", plan.beta},
        {"noise_sigma", plan.noise_sigma},
        {"visits_min", plan.visits_min},
        {"visits_max", plan.visits_max},
        {"visits_step_sigma", plan.visits_step_sigma},
        {"request_rate_min", plan.request_rate_min},
        {"request_rate_max", plan.request_rate_max},
        {"request_noise_sigma", plan.request_noise_sigma},
        {"request_subset_size", plan.request_subset_size},
    };
  }
  if (!config.data_paths.empty()) {
    json data;
    for (const auto& [key, path] : config.data_paths) data[key] = path;
    j["data"] = data;
  }
  j["span"] = {{"train_begin", format_month(config.train_begin)},
               {"train_end", format_month(config.train_end)},
               {"test_begin", format_month(config.test_begin)},
               {"test_end", format_month(config.test_end)}};
  j["variant"] = config.variants.size() == 2 ? "both" : to_string(config.variants.front());
  j["similarity"] = {{"kind", to_string(config.similarity)}, {"rank_tol", config.rank_tol}};
  j["alignment"] = config.alignment;
  json models = json::array();
  for (ModelKind m : config.models) models.push_back(to_string(m));
  j["models"] = models;
  json svr = {{"C", config.svr.C},
              {"epsilon", config.svr.epsilon},
              {"tol", config.svr.tol},
              {"max_pair_updates", config.svr.max_pair_updates}};
  if (config.svr.gamma) svr["gamma"] = *config.svr.gamma;
  j["svr"] = svr;
  j["ar"] = {{"lag", config.ar_lag}, {"lag_mode", to_string(config.ar_mode)}};
  j["rmse_convention"] = to_string(config.rmse_convention);
  j["clamp_nonnegative"] = config.clamp_nonnegative;
  j["dump_networks"] = config.dump_networks;
  j["dump_datasets"] = config.dump_datasets;
  j["out"] = config.out_dir;
  return j.dump(2);
}

}  // namespace crimenet
