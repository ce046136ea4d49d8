#include "crimenet/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "crimenet/csv.hpp"
#include "crimenet/errors.hpp"

namespace crimenet {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::optional<int> parse_int(const std::string& s) {
  std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  long v = std::strtol(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size()) return std::nullopt;
  return static_cast<int>(v);
}

std::optional<double> parse_real(const std::string& s) {
  std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return std::nullopt;
  return v;
}

bool valid_date(int year, int month, int day) {
  return year >= 1900 && year <= 2200 && month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

}  // namespace

std::optional<Date> parse_timestamp(const std::string& text) {
  std::string t = trim(text);
  if (t.size() >= 10) {
    // MM/DD/YYYY [hh:mm:ss AM|PM]
    if (t[2] == '/' && t[5] == '/') {
      int mo, d, y, hh, mi, ss;
      char ampm[3] = {0};
      int n = std::sscanf(t.c_str(), "%2d/%2d/%4d %2d:%2d:%2d %2s", &mo, &d, &y, &hh, &mi, &ss, ampm);
      if ((n == 3 || n == 7) && valid_date(y, mo, d)) {
        if (n == 7 && (hh < 1 || hh > 12 || mi > 59 || ss > 59 ||
                       (ampm[0] != 'A' && ampm[0] != 'P') || ampm[1] != 'M'))
          return std::nullopt;
        return Date{y, mo, d};
      }
      return std::nullopt;
    }
    // ISO-8601: YYYY-MM-DD with optional time part
    if (t[4] == '-' && t[7] == '-') {
      int y, mo, d;
      if (std::sscanf(t.c_str(), "%4d-%2d-%2d", &y, &mo, &d) == 3 && valid_date(y, mo, d)) {
        if (t.size() > 10 && t[10] != 'T' && t[10] != ' ') return std::nullopt;
        return Date{y, mo, d};
      }
    }
  }
  return std::nullopt;
}

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::library: return "library";
    case LayerKind::library_visits: return "library_visits";
    case LayerKind::school: return "school";
    case LayerKind::school_act: return "school_act";
    case LayerKind::police_station: return "police_station";
    case LayerKind::police_district: return "police_district";
    case LayerKind::service311: return "service311";
  }
  return "?";
}

std::optional<LayerKind> parse_layer_kind(const std::string& name) {
  for (LayerKind k : {LayerKind::library, LayerKind::library_visits, LayerKind::school,
                      LayerKind::school_act, LayerKind::police_station,
                      LayerKind::police_district, LayerKind::service311}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void LayerContext::absorb(const LayerTable& table) {
  switch (table.kind) {
    case LayerKind::library:
      for (const auto& row : table.rows) library_community[row.entity] = row.community_id;
      break;
    case LayerKind::school:
      for (const auto& row : table.rows) school_community[row.entity] = row.community_id;
      break;
    case LayerKind::police_district:
      for (const auto& row : table.rows) district_communities[row.entity].push_back(row.community_id);
      break;
    default:
      break;
  }
}

CrimeLoad load_crimes(const std::string& path, MonthSpan span, int n_communities) {
  auto in = open_or_throw(path);
  CsvReader csv(in);
  auto cols = csv.require_columns({"Date", "Primary Type", "Community Area"});

  CrimeLoad out;
  std::vector<std::string> fields;
  while (csv.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    ++out.stats.rows_total;
    size_t need = static_cast<size_t>(std::max({cols[0], cols[1], cols[2]})) + 1;
    if (fields.size() < need) {
      ++out.stats.malformed;
      continue;
    }
    auto date = parse_timestamp(fields[cols[0]]);
    std::string type = trim(fields[cols[1]]);
    auto community = parse_int(fields[cols[2]]);
    if (!date || type.empty() || !community || *community < 1 || *community > n_communities) {
      ++out.stats.malformed;
      continue;
    }
    if (!span.contains(Month{date->year, date->month})) {
      ++out.stats.out_of_span;
      continue;
    }
    out.records.push_back(CrimeRecord{*date, std::move(type), *community});
    ++out.stats.loaded;
  }
  return out;
}

namespace {

int checked_community(const std::string& field, int n_communities) {
  auto id = parse_int(field);
  if (!id || *id < 1 || *id > n_communities)
    throw UnknownCommunity("'" + field + "' outside 1.." + std::to_string(n_communities));
  return *id;
}

}  // namespace

LayerTable load_layer(LayerKind kind, const std::string& path, const LayerContext* context,
                      int n_communities) {
  auto in = open_or_throw(path);
  CsvReader csv(in);
  LayerTable table;
  table.kind = kind;
  std::vector<std::string> fields;

  auto field_at = [&](int col) -> std::string {
    return col < static_cast<int>(fields.size()) ? trim(fields[col]) : std::string();
  };
  auto resolve = [&](const std::map<std::string, int>& map, const std::string& key) -> int {
    auto it = map.find(key);
    return it == map.end() ? 0 : it->second;
  };

  switch (kind) {
    case LayerKind::library: {
      auto cols = csv.require_columns({"NAME", "COMMUNITY AREA"});
      while (csv.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        table.rows.push_back({field_at(cols[0]),
                              checked_community(field_at(cols[1]), n_communities),
                              std::nullopt, 0.0});
      }
      break;
    }
    case LayerKind::library_visits: {
      auto cols = csv.require_columns({"NAME", "MONTH", "VISITORS"});
      while (csv.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        std::string name = field_at(cols[0]);
        auto month = parse_month(field_at(cols[1]));
        auto visitors = parse_real(field_at(cols[2]));
        int community = context ? resolve(context->library_community, name) : 0;
        if (!month || !visitors || community == 0) {
          ++table.skipped;
          continue;
        }
        if (*visitors < 0) throw UnknownValue("negative visitor count for " + name);
        table.rows.push_back({name, community, *month, *visitors});
      }
      break;
    }
    case LayerKind::school: {
      auto cols = csv.require_columns({"SCHOOL ID", "COMMUNITY AREA"});
      while (csv.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        table.rows.push_back({field_at(cols[0]),
                              checked_community(field_at(cols[1]), n_communities),
                              std::nullopt, 0.0});
      }
      break;
    }
    case LayerKind::school_act: {
      auto cols = csv.require_columns({"SCHOOL ID", "AVG ACT"});
      while (csv.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        std::string id = field_at(cols[0]);
        auto score = parse_real(field_at(cols[1]));
        int community = context ? resolve(context->school_community, id) : 0;
        if (!score || community == 0) {
          ++table.skipped;
          continue;
        }
        if (*score < 0) throw UnknownValue("negative ACT score for school " + id);
        table.rows.push_back({id, community, std::nullopt, *score});
      }
      break;
    }
    case LayerKind::police_station: {
      auto cols = csv.require_columns({"DISTRICT"});
      while (csv.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        std::string district = field_at(cols[0]);
        // Community membership comes from the district table; a station row
        // on its own only declares the station.
        if (context) {
          auto it = context->district_communities.find(district);
          if (it != context->district_communities.end()) {
            for (int c : it->second) table.rows.push_back({district, c, std::nullopt, 0.0});
            continue;
          }
        }
        ++table.skipped;
      }
      break;
    }
    case LayerKind::police_district: {
      auto cols = csv.require_columns({"DISTRICT", "COMMUNITY AREAS"});
      while (csv.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        std::string district = field_at(cols[0]);
        std::string areas = field_at(cols[1]);
        std::stringstream ss(areas);
        std::string part;
        while (std::getline(ss, part, ';')) {
          part = trim(part);
          if (part.empty()) continue;
          table.rows.push_back({district, checked_community(part, n_communities),
                                std::nullopt, 0.0});
        }
      }
      break;
    }
    case LayerKind::service311: {
      auto cols = csv.require_columns({"TYPE", "COMMUNITY AREA", "MONTH", "COUNT"});
      while (csv.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        std::string type = field_at(cols[0]);
        int community = checked_community(field_at(cols[1]), n_communities);
        auto month = parse_month(field_at(cols[2]));
        auto count = parse_real(field_at(cols[3]));
        if (type.empty() || !month || !count) {
          ++table.skipped;
          continue;
        }
        if (*count < 0) throw UnknownValue("negative 311 count for " + type);
        table.rows.push_back({type, community, *month, *count});
      }
      break;
    }
  }
  return table;
}

IntMatrix load_adjacency(const std::string& path, int n_communities) {
  auto in = open_or_throw(path);
  CsvReader csv(in);
  auto cols = csv.require_columns({"COMMUNITY AREA", "NEIGHBORS"});
  IntMatrix adjacency = IntMatrix::Zero(n_communities, n_communities);
  std::vector<std::string> fields;
  while (csv.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    int c = checked_community(trim(fields[cols[0]]), n_communities);
    std::string list = cols[1] < static_cast<int>(fields.size()) ? fields[cols[1]] : "";
    std::stringstream ss(list);
    std::string part;
    while (std::getline(ss, part, ';')) {
      part = trim(part);
      if (part.empty()) continue;
      int b = checked_community(part, n_communities);
      if (b == c) continue;
      adjacency(c - 1, b - 1) = 1;
      adjacency(b - 1, c - 1) = 1;
    }
  }
  return adjacency;
}

int CrimeTypeRegistry::index_of(const std::string& label) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) return -1;
  return static_cast<int>(it - labels.begin());
}

CrimeTypeRegistry CrimeTypeRegistry::from_observed(const std::vector<CrimeRecord>& records) {
  std::set<std::string> seen;
  for (const auto& r : records) seen.insert(r.primary_type);
  CrimeTypeRegistry registry;
  registry.labels.assign(seen.begin(), seen.end());
  return registry;
}

int MonthlyCube::library_visits(int month_index, int community_id) const {
  int total = 0;
  for (size_t l = 0; l < libraries.size(); ++l) {
    if (libraries[l].community_id == community_id)
      total += visits_by_library[month_index][static_cast<int>(l)];
  }
  return total;
}

int MonthlyCube::service_calls_total(int month_index, int community_id) const {
  return service_calls[month_index].row(community_id - 1).sum();
}

MonthlyCube aggregate_monthly(const std::vector<CrimeRecord>& crimes,
                              const std::vector<LayerTable>& layers, MonthSpan span,
                              int n_communities, const IntMatrix* adjacency,
                              std::vector<std::string>* warnings) {
  if (span.count <= 0) throw SpanTooShort("aggregate_monthly needs a non-empty span");
  auto warn = [&](const std::string& message) {
    if (warnings) warnings->push_back(message);
  };

  const LayerTable* by_kind[7] = {};
  for (const auto& table : layers) {
    auto& slot = by_kind[static_cast<int>(table.kind)];
    if (slot) throw DataError("duplicate layer table of kind " + to_string(table.kind));
    slot = &table;
  }
  auto layer = [&](LayerKind kind) { return by_kind[static_cast<int>(kind)]; };

  MonthlyCube cube;
  cube.span = span;
  cube.n_communities = n_communities;
  cube.types = CrimeTypeRegistry::from_observed(crimes);

  cube.crime_counts.assign(span.count, IntMatrix::Zero(n_communities, cube.types.size()));
  for (const auto& record : crimes) {
    int i = span.index_of(Month{record.date.year, record.date.month});
    if (i < 0) continue;  // caller passed an out-of-span record; ignore
    int t = cube.types.index_of(record.primary_type);
    cube.crime_counts[i](record.community_id - 1, t) += 1;
  }

  // Libraries and their monthly visits.
  if (const auto* table = layer(LayerKind::library)) {
    for (const auto& row : table->rows) cube.libraries.push_back({row.entity, row.community_id});
    std::sort(cube.libraries.begin(), cube.libraries.end(),
              [](const Library& a, const Library& b) { return a.name < b.name; });
  } else {
    warn("no library table supplied; library layer is empty");
  }
  cube.visits_by_library.assign(span.count,
                                IntVector::Zero(static_cast<int>(cube.libraries.size())));
  if (const auto* table = layer(LayerKind::library_visits)) {
    for (const auto& row : table->rows) {
      int i = row.month ? span.index_of(*row.month) : -1;
      if (i < 0) continue;
      auto it = std::lower_bound(cube.libraries.begin(), cube.libraries.end(), row.entity,
                                 [](const Library& l, const std::string& n) { return l.name < n; });
      if (it == cube.libraries.end() || it->name != row.entity) continue;
      cube.visits_by_library[i][static_cast<int>(it - cube.libraries.begin())] +=
          static_cast<int>(std::llround(row.value));
    }
  } else {
    warn("no library_visits table supplied; visit counts are zero");
  }

  // Schools with their ACT scores (static across the span).
  if (const auto* table = layer(LayerKind::school)) {
    for (const auto& row : table->rows) cube.schools.push_back({row.entity, row.community_id, {}});
    std::sort(cube.schools.begin(), cube.schools.end(),
              [](const School& a, const School& b) { return a.id < b.id; });
    if (const auto* act = layer(LayerKind::school_act)) {
      for (const auto& row : act->rows) {
        auto it = std::lower_bound(cube.schools.begin(), cube.schools.end(), row.entity,
                                   [](const School& s, const std::string& n) { return s.id < n; });
        if (it != cube.schools.end() && it->id == row.entity) it->act = row.value;
      }
    } else {
      warn("no school_act table supplied; school edges will be absent");
    }
  } else {
    warn("no school table supplied; school layer is empty");
  }

  // Police stations and their direct coverage.
  {
    std::map<std::string, std::set<int>> coverage;
    if (const auto* districts = layer(LayerKind::police_district)) {
      for (const auto& row : districts->rows) coverage[row.entity].insert(row.community_id);
    }
    if (const auto* stations = layer(LayerKind::police_station)) {
      for (const auto& row : stations->rows) coverage.try_emplace(row.entity);
    }
    if (coverage.empty()) warn("no police tables supplied; police layer is empty");
    for (auto& [district, communities] : coverage) {
      Station s;
      s.id = district;
      s.communities.assign(communities.begin(), communities.end());
      cube.stations.push_back(std::move(s));
    }
  }

  // 311 request types and monthly call counts.
  if (const auto* table = layer(LayerKind::service311)) {
    std::set<std::string> kinds;
    for (const auto& row : table->rows) kinds.insert(row.entity);
    cube.request_types.assign(kinds.begin(), kinds.end());
    cube.service_calls.assign(span.count,
                              IntMatrix::Zero(n_communities, static_cast<int>(kinds.size())));
    for (const auto& row : table->rows) {
      int i = row.month ? span.index_of(*row.month) : -1;
      if (i < 0) continue;
      int r = static_cast<int>(std::lower_bound(cube.request_types.begin(),
                                                cube.request_types.end(), row.entity) -
                               cube.request_types.begin());
      cube.service_calls[i](row.community_id - 1, r) +=
          static_cast<int>(std::llround(row.value));
    }
  } else {
    warn("no service311 table supplied; 311 layer is zero");
    cube.service_calls.assign(span.count, IntMatrix::Zero(n_communities, 0));
  }

  cube.school_count = IntVector::Zero(n_communities);
  for (const auto& school : cube.schools) cube.school_count[school.community_id - 1] += 1;
  cube.police_count = IntVector::Zero(n_communities);
  for (const auto& station : cube.stations)
    for (int c : station.communities) cube.police_count[c - 1] += 1;

  if (adjacency) {
    if (adjacency->rows() != n_communities || adjacency->cols() != n_communities)
      throw DimensionMismatch("adjacency size does not match community count");
    cube.adjacency = *adjacency;
  } else {
    warn("no adjacency supplied; community border edges will be absent");
    cube.adjacency = IntMatrix::Zero(n_communities, n_communities);
  }

  return cube;
}

}  // namespace crimenet
