#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "crimenet/ingest.hpp"
#include "crimenet/network.hpp"

// Per-crime-type RMSE in the paper convention (squared error summed over the
// 12 test months and all communities, divided by the total crime count of the
// type, then rooted), box statistics over the per-cell absolute errors, and
// the full vs only-crime comparison tables.

namespace crimenet {

enum class ModelKind { ar, polyreg, svr };

std::string to_string(ModelKind kind);
std::vector<ModelKind> parse_model_list(const std::string& csv_list);  // "polyreg,svr,ar"

enum class RmseConvention { paper, cells };

std::string to_string(RmseConvention convention);

struct PredictionEntry {
  int month_index = 0;
  int community_id = 0;
  int type_index = 0;
  ModelKind model{};
  Variant variant{};
  double actual = 0.0;
  double predicted = 0.0;
};

struct PredictionSet {
  std::vector<PredictionEntry> entries;
};

// Throws ZeroCrimeType when the type's test-span total is zero (the
// paper-convention denominator would vanish), EmptyInput when no entries
// match.
double rmse_per_type(const PredictionSet& preds, int type_index, ModelKind model,
                     Variant variant, RmseConvention convention = RmseConvention::paper);

struct BoxStats {
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

// Quantiles by linear interpolation at fractional rank p*(n-1).
BoxStats box_stats(std::vector<double> values);

struct RmseRow {
  int type_index = 0;
  ModelKind model{};
  double rmse = 0.0;
  BoxStats box;
};

struct RmseReport {
  Variant variant{};
  RmseConvention convention{};
  std::vector<std::string> type_labels;
  std::vector<long> test_totals;    // per type, actual counts over the test span
  std::vector<int> excluded_types;  // zero-total types, dropped from rows
  std::vector<RmseRow> rows;        // type-major, models in fixed order
};

RmseReport build_rmse_report(const PredictionSet& preds, const CrimeTypeRegistry& registry,
                             Variant variant, RmseConvention convention);

// The n types with the largest test totals, largest first (ties by label order).
std::vector<int> top_types_by_total(const RmseReport& report, int n = 11);

struct ComparisonRow {
  int type_index = 0;
  ModelKind model{};
  double rmse_full = 0.0;
  double rmse_only_crime = 0.0;
  double delta = 0.0;     // full - only_crime
  double relative = 0.0;  // delta / only_crime
  int winner = 0;         // +1 full, -1 only_crime, 0 tie
};

struct VariantComparison {
  std::vector<std::string> type_labels;
  std::vector<ComparisonRow> rows;
  std::map<ModelKind, int> full_wins;  // types where full < only_crime
};

// Requires the same (type, model) keys on both sides; KeyMismatch otherwise.
VariantComparison compare_variants(const RmseReport& full, const RmseReport& only_crime);

void write_rmse_summary_csv(const std::vector<RmseReport>& reports, std::ostream& out);
void write_boxstats_csv(const std::vector<RmseReport>& reports, std::ostream& out);
void write_predictions_csv(const PredictionSet& preds, const CrimeTypeRegistry& registry,
                           MonthSpan span, std::ostream& out);
void write_comparison_csv(const VariantComparison& comparison, std::ostream& out);

// Plot-ready box data, optionally restricted to the given types (e.g. top-11),
// ordered by descending test total.
void write_plot_data_csv(const std::vector<RmseReport>& reports,
                         const std::vector<int>& type_order, std::ostream& out);

}  // namespace crimenet
