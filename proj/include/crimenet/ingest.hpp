#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crimenet/month.hpp"
#include "crimenet/types.hpp"

// Parsing of the city open-data CSV layouts and their aggregation into
// per-month cubes. All tables are immutable once built and safe to share
// read-only across workers.

namespace crimenet {

struct Date {
  int year = 0;
  int month = 1;
  int day = 1;
};

// Accepts the portal's "MM/DD/YYYY hh:mm:ss AM/PM" crime format and ISO-8601
// dates (time of day optional in both). Anything else is a malformed row.
std::optional<Date> parse_timestamp(const std::string& text);

struct CrimeRecord {
  Date date;
  std::string primary_type;
  int community_id = 0;  // 1..n_communities
};

enum class LayerKind {
  library,
  library_visits,
  school,
  school_act,
  police_station,
  police_district,
  service311,
};

std::string to_string(LayerKind kind);
std::optional<LayerKind> parse_layer_kind(const std::string& name);

struct LayerRow {
  std::string entity;          // library name / school id / district id / 311 type
  int community_id = 0;        // resolved, 1..n_communities (0 where not applicable)
  std::optional<Month> month;  // present for library_visits and service311
  double value = 0.0;          // visitors / ACT score / request count
};

struct LayerTable {
  LayerKind kind{};
  std::vector<LayerRow> rows;
  int skipped = 0;  // rows whose community could not be resolved
};

// Cross-table name -> community maps used to resolve rows whose own columns
// carry only an entity id (library visits, ACT scores, station districts).
struct LayerContext {
  std::map<std::string, int> library_community;
  std::map<std::string, int> school_community;
  std::map<std::string, std::vector<int>> district_communities;

  void absorb(const LayerTable& table);
};

struct CrimeLoadStats {
  long rows_total = 0;
  long loaded = 0;
  long malformed = 0;      // unparseable date / empty type / bad community
  long out_of_span = 0;    // valid rows outside the configured span
};

struct CrimeLoad {
  std::vector<CrimeRecord> records;
  CrimeLoadStats stats;
};

CrimeLoad load_crimes(const std::string& path, MonthSpan span, int n_communities = 77);

LayerTable load_layer(LayerKind kind, const std::string& path,
                      const LayerContext* context = nullptr, int n_communities = 77);

// Border-sharing input (one row per community, semicolon-separated neighbor
// ids); result is symmetric with a zero diagonal.
IntMatrix load_adjacency(const std::string& path, int n_communities = 77);

// Dense label <-> index maps for the crime primary types observed in the
// data, ordered lexicographically.
struct CrimeTypeRegistry {
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(labels.size()); }
  int index_of(const std::string& label) const;
  static CrimeTypeRegistry from_observed(const std::vector<CrimeRecord>& records);
};

struct Library {
  std::string name;
  int community_id = 0;
};

struct School {
  std::string id;
  int community_id = 0;
  std::optional<double> act;
};

struct Station {
  std::string id;
  std::vector<int> communities;  // sorted, unique, direct district coverage
};

// Everything the monthly networks and feature vectors are built from.
// Counts are month-major; community ids are 1-based throughout the API.
struct MonthlyCube {
  MonthSpan span;
  int n_communities = 77;
  CrimeTypeRegistry types;
  std::vector<std::string> request_types;  // sorted 311 type labels

  std::vector<IntMatrix> crime_counts;     // [month](community-1, type)
  std::vector<IntMatrix> service_calls;    // [month](community-1, request_type)

  std::vector<Library> libraries;
  std::vector<IntVector> visits_by_library;  // [month](library)

  std::vector<School> schools;
  std::vector<Station> stations;

  IntVector school_count;  // per community
  IntVector police_count;  // per community
  IntMatrix adjacency;     // 0/1, symmetric, zero diagonal

  int crime_count(int month_index, int community_id, int type_index) const {
    return crime_counts[month_index](community_id - 1, type_index);
  }
  // month x community view of the per-library visit counts
  int library_visits(int month_index, int community_id) const;
  int service_calls_total(int month_index, int community_id) const;
};

// Counts records per (month, community, type), attaches the static layers and
// replicates them across the span. Missing layers degrade to zeros, one
// warning each. Order of the input records does not matter.
MonthlyCube aggregate_monthly(const std::vector<CrimeRecord>& crimes,
                              const std::vector<LayerTable>& layers, MonthSpan span,
                              int n_communities = 77,
                              const IntMatrix* adjacency = nullptr,
                              std::vector<std::string>* warnings = nullptr);

}  // namespace crimenet
