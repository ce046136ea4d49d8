#include "crimenet/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "crimenet/csv.hpp"
#include "crimenet/errors.hpp"

namespace crimenet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream create(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream open_bundle_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IncompleteBundle("missing " + path.string());
  return in;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector json_to_vector(const json& arr) {
  Vector v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  return v;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace

void save_cube(const std::string& dir, const MonthlyCube& cube) {
  fs::create_directories(dir);
  const fs::path base(dir);

  json meta;
  meta["start"] = format_month(cube.span.first);
  meta["months"] = cube.span.count;
  meta["communities"] = cube.n_communities;
  meta["crime_types"] = cube.types.labels;
  meta["request_types"] = cube.request_types;
  create(base / "cube_meta.json") << meta.dump(2) << '\n';

  {
    auto out = create(base / "cube_crimes.csv");
    out << "month,community,type,count\n";
    for (int i = 0; i < cube.span.count; ++i) {
      for (int c = 1; c <= cube.n_communities; ++c) {
        for (int t = 0; t < cube.types.size(); ++t) {
          int count = cube.crime_counts[i](c - 1, t);
          if (count != 0)
            out << format_month(cube.span.at(i)) << ',' << c << ',' << cube.types.labels[t]
                << ',' << count << '\n';
        }
      }
    }
  }
  {
    auto out = create(base / "cube_libraries.csv");
    out << "name,community\n";
    for (const auto& lib : cube.libraries) out << lib.name << ',' << lib.community_id << '\n';
  }
  {
    auto out = create(base / "cube_library_visits.csv");
    out << "month,library,visits\n";
    for (int i = 0; i < cube.span.count; ++i) {
      for (size_t l = 0; l < cube.libraries.size(); ++l) {
        int visits = cube.visits_by_library[i][static_cast<int>(l)];
        if (visits != 0)
          out << format_month(cube.span.at(i)) << ',' << cube.libraries[l].name << ','
              << visits << '\n';
      }
    }
  }
  {
    auto out = create(base / "cube_service_calls.csv");
    out << "month,community,type,count\n";
    for (int i = 0; i < cube.span.count; ++i) {
      for (int c = 1; c <= cube.n_communities; ++c) {
        for (size_t r = 0; r < cube.request_types.size(); ++r) {
          int count = cube.service_calls[i](c - 1, static_cast<int>(r));
          if (count != 0)
            out << format_month(cube.span.at(i)) << ',' << c << ',' << cube.request_types[r]
                << ',' << count << '\n';
        }
      }
    }
  }
  {
    auto out = create(base / "cube_schools.csv");
    out << "school,community,act\n";
    for (const auto& school : cube.schools) {
      out << school.id << ',' << school.community_id << ',';
      if (school.act) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", *school.act);
        out << buf;
      }
      out << '\n';
    }
  }
  {
    auto out = create(base / "cube_stations.csv");
    out << "station,communities\n";
    for (const auto& station : cube.stations) {
      out << station.id << ',';
      for (size_t k = 0; k < station.communities.size(); ++k)
        out << (k ? ";" : "") << station.communities[k];
      out << '\n';
    }
  }
  {
    auto out = create(base / "cube_adjacency.csv");
    out << "a,b\n";
    for (int a = 0; a < cube.n_communities; ++a)
      for (int b = a + 1; b < cube.n_communities; ++b)
        if (cube.adjacency(a, b) != 0) out << (a + 1) << ',' << (b + 1) << '\n';
  }
}

MonthlyCube load_cube(const std::string& dir) {
  const fs::path base(dir);
  if (!fs::exists(base / "cube_meta.json"))
    throw IncompleteBundle("missing " + (base / "cube_meta.json").string());
  json meta = load_json((base / "cube_meta.json").string());

  MonthlyCube cube;
  auto start = parse_month(meta.at("start").get<std::string>());
  if (!start) throw DataError("bad start month in cube_meta.json");
  cube.span = MonthSpan{*start, meta.at("months").get<int>()};
  cube.n_communities = meta.at("communities").get<int>();
  cube.types.labels = meta.at("crime_types").get<std::vector<std::string>>();
  cube.request_types = meta.at("request_types").get<std::vector<std::string>>();

  const int n_c = cube.n_communities;
  cube.crime_counts.assign(cube.span.count, IntMatrix::Zero(n_c, cube.types.size()));
  cube.service_calls.assign(cube.span.count,
                            IntMatrix::Zero(n_c, static_cast<int>(cube.request_types.size())));
  cube.adjacency = IntMatrix::Zero(n_c, n_c);

  std::vector<std::string> fields;
  {
    auto in = open_bundle_file(base / "cube_crimes.csv");
    CsvReader csv(in);
    auto cols = csv.require_columns({"month", "community", "type", "count"});
    while (csv.next(fields)) {
      if (fields.size() == 1 && fields[0].empty()) continue;
      auto month = parse_month(fields[cols[0]]);
      int i = month ? cube.span.index_of(*month) : -1;
      int t = cube.types.index_of(fields[cols[2]]);
      if (i < 0 || t < 0) throw DataError("bad cube_crimes row");
      cube.crime_counts[i](std::stoi(fields[cols[1]]) - 1, t) = std::stoi(fields[cols[3]]);
    }
  }
  {
    auto in = open_bundle_file(base / "cube_libraries.csv");
    CsvReader csv(in);
    auto cols = csv.require_columns({"name", "community"});
    while (csv.next(fields)) {
      if (fields.size() == 1 && fields[0].empty()) continue;
      cube.libraries.push_back({fields[cols[0]], std::stoi(fields[cols[1]])});
    }
  }
  cube.visits_by_library.assign(cube.span.count,
                                IntVector::Zero(static_cast<int>(cube.libraries.size())));
  {
    auto in = open_bundle_file(base / "cube_library_visits.csv");
    CsvReader csv(in);
    auto cols = csv.require_columns({"month", "library", "visits"});
    while (csv.next(fields)) {
      if (fields.size() == 1 && fields[0].empty()) continue;
      auto month = parse_month(fields[cols[0]]);
      int i = month ? cube.span.index_of(*month) : -1;
      if (i < 0) throw DataError("bad cube_library_visits row");
      for (size_t l = 0; l < cube.libraries.size(); ++l) {
        if (cube.libraries[l].name == fields[cols[1]]) {
          cube.visits_by_library[i][static_cast<int>(l)] = std::stoi(fields[cols[2]]);
          break;
        }
      }
    }
  }
  {
    auto in = open_bundle_file(base / "cube_service_calls.csv");
    CsvReader csv(in);
    auto cols = csv.require_columns({"month", "community", "type", "count"});
    while (csv.next(fields)) {
      if (fields.size() == 1 && fields[0].empty()) continue;
      auto month = parse_month(fields[cols[0]]);
      int i = month ? cube.span.index_of(*month) : -1;
      auto it = std::find(cube.request_types.begin(), cube.request_types.end(), fields[cols[2]]);
      if (i < 0 || it == cube.request_types.end()) throw DataError("bad cube_service_calls row");
      cube.service_calls[i](std::stoi(fields[cols[1]]) - 1,
                            static_cast<int>(it - cube.request_types.begin())) =
          std::stoi(fields[cols[3]]);
    }
  }
  {
    auto in = open_bundle_file(base / "cube_schools.csv");
    CsvReader csv(in);
    auto cols = csv.require_columns({"school", "community", "act"});
    while (csv.next(fields)) {
      if (fields.size() == 1 && fields[0].empty()) continue;
      School school{fields[cols[0]], std::stoi(fields[cols[1]]), {}};
      if (!fields[cols[2]].empty()) school.act = std::stod(fields[cols[2]]);
      cube.schools.push_back(std::move(school));
    }
  }
  {
    auto in = open_bundle_file(base / "cube_stations.csv");
    CsvReader csv(in);
    auto cols = csv.require_columns({"station", "communities"});
    while (csv.next(fields)) {
      if (fields.size() == 1 && fields[0].empty()) continue;
      Station station{fields[cols[0]], {}};
      std::stringstream ss(fields[cols[1]]);
      std::string part;
      while (std::getline(ss, part, ';'))
        if (!part.empty()) station.communities.push_back(std::stoi(part));
      cube.stations.push_back(std::move(station));
    }
  }
  {
    auto in = open_bundle_file(base / "cube_adjacency.csv");
    CsvReader csv(in);
    auto cols = csv.require_columns({"a", "b"});
    while (csv.next(fields)) {
      if (fields.size() == 1 && fields[0].empty()) continue;
      int a = std::stoi(fields[cols[0]]) - 1;
      int b = std::stoi(fields[cols[1]]) - 1;
      cube.adjacency(a, b) = 1;
      cube.adjacency(b, a) = 1;
    }
  }

  cube.school_count = IntVector::Zero(n_c);
  for (const auto& school : cube.schools) cube.school_count[school.community_id - 1] += 1;
  cube.police_count = IntVector::Zero(n_c);
  for (const auto& station : cube.stations)
    for (int c : station.communities) cube.police_count[c - 1] += 1;
  return cube;
}

void save_ground_truth(const std::string& path, const SynthGroundTruth& truth) {
  json j;
  j["sigma"] = truth.sigma;
  j["beta"] = truth.beta;
  j["seasonal_amplitude"] = truth.seasonal_amplitude;
  json base = json::array();
  for (Eigen::Index c = 0; c < truth.base.rows(); ++c)
    base.push_back(vector_to_json(truth.base.row(c).transpose()));
  j["base"] = base;
  json lead = json::array();
  for (const auto& month : truth.lead_visits) {
    json row = json::array();
    for (Eigen::Index c = 0; c < month.size(); ++c) row.push_back(month[c]);
    lead.push_back(row);
  }
  j["lead_visits"] = lead;
  create(path) << j.dump(2) << '\n';
}

void save_polyreg(const std::string& path, const PolyRegModel& model) {
  json j;
  j["kind"] = "polyreg";
  j["dim"] = model.dim;
  j["coefficients"] = vector_to_json(model.coefficients);
  create(path) << j.dump(2) << '\n';
}

PolyRegModel load_polyreg(const std::string& path) {
  json j = load_json(path);
  if (j.at("kind") != "polyreg") throw DataError("not a polyreg model file: " + path);
  PolyRegModel model;
  model.dim = j.at("dim").get<int>();
  model.coefficients = json_to_vector(j.at("coefficients"));
  return model;
}

void save_svr(const std::string& path, const SvrModel& model) {
  json j;
  j["kind"] = "svr";
  j["C"] = model.C;
  j["epsilon"] = model.epsilon;
  j["gamma"] = model.gamma;
  j["bias"] = model.bias;
  j["dual_coeffs"] = vector_to_json(model.dual_coeffs);
  json svs = json::array();
  for (Eigen::Index v = 0; v < model.support_vectors.rows(); ++v)
    svs.push_back(vector_to_json(model.support_vectors.row(v).transpose()));
  j["support_vectors"] = svs;
  j["feature_dim"] = model.support_vectors.cols();
  create(path) << j.dump(2) << '\n';
}

SvrModel load_svr(const std::string& path) {
  json j = load_json(path);
  if (j.at("kind") != "svr") throw DataError("not an svr model file: " + path);
  SvrModel model;
  model.C = j.at("C").get<double>();
  model.epsilon = j.at("epsilon").get<double>();
  model.gamma = j.at("gamma").get<double>();
  model.bias = j.at("bias").get<double>();
  model.dual_coeffs = json_to_vector(j.at("dual_coeffs"));
  const auto& svs = j.at("support_vectors");
  const auto dim = j.at("feature_dim").get<Eigen::Index>();
  model.support_vectors.resize(static_cast<Eigen::Index>(svs.size()), dim);
  for (size_t v = 0; v < svs.size(); ++v)
    model.support_vectors.row(static_cast<Eigen::Index>(v)) = json_to_vector(svs[v]).transpose();
  return model;
}

void save_ar(const std::string& path, const ArModel& model) {
  json j;
  j["kind"] = "ar";
  j["lag"] = model.lag;
  j["lag_mode"] = to_string(model.mode);
  j["intercept"] = model.intercept;
  j["phi"] = vector_to_json(model.phi);
  create(path) << j.dump(2) << '\n';
}

ArModel load_ar(const std::string& path) {
  json j = load_json(path);
  if (j.at("kind") != "ar") throw DataError("not an ar model file: " + path);
  ArModel model;
  model.lag = j.at("lag").get<int>();
  model.mode = j.at("lag_mode") == "annual" ? LagMode::annual : LagMode::monthly;
  model.intercept = j.at("intercept").get<double>();
  model.phi = json_to_vector(j.at("phi"));
  return model;
}

}  // namespace crimenet
