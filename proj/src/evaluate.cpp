#include "crimenet/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>

#include "crimenet/errors.hpp"

namespace crimenet {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::ar: return "ar";
    case ModelKind::polyreg: return "polyreg";
    case ModelKind::svr: return "svr";
  }
  return "?";
}

std::vector<ModelKind> parse_model_list(const std::string& csv_list) {
  std::vector<ModelKind> models;
  std::stringstream ss(csv_list);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part == "ar") models.push_back(ModelKind::ar);
    else if (part == "polyreg") models.push_back(ModelKind::polyreg);
    else if (part == "svr") models.push_back(ModelKind::svr);
    else if (!part.empty()) throw ConfigError("unknown model kind '" + part + "'");
  }
  if (models.empty()) throw ConfigError("empty model list");
  std::sort(models.begin(), models.end());
  models.erase(std::unique(models.begin(), models.end()), models.end());
  return models;
}

std::string to_string(RmseConvention convention) {
  return convention == RmseConvention::paper ? "paper" : "cells";
}

double rmse_per_type(const PredictionSet& preds, int type_index, ModelKind model,
                     Variant variant, RmseConvention convention) {
  double squared = 0.0;
  double total_actual = 0.0;
  long cells = 0;
  for (const auto& entry : preds.entries) {
    if (entry.type_index != type_index || entry.model != model || entry.variant != variant)
      continue;
    const double err = entry.actual - entry.predicted;
    squared += err * err;
    total_actual += entry.actual;
    ++cells;
  }
  if (cells == 0) throw EmptyInput("no predictions for the requested slice");
  if (convention == RmseConvention::paper) {
    if (total_actual <= 0.0)
      throw ZeroCrimeType("type " + std::to_string(type_index) + " has no crimes in the test span");
    return std::sqrt(squared / total_actual);
  }
  return std::sqrt(squared / static_cast<double>(cells));
}

BoxStats box_stats(std::vector<double> values) {
  if (values.empty()) throw EmptyInput("box_stats");
  std::sort(values.begin(), values.end());
  const auto quantile = [&](double p) {
    const double rank = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<size_t>(rank);
    const double frac = rank - static_cast<double>(lo);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + frac * (values[lo + 1] - values[lo]);
  };
  return BoxStats{values.front(), quantile(0.25), quantile(0.5), quantile(0.75), values.back()};
}

RmseReport build_rmse_report(const PredictionSet& preds, const CrimeTypeRegistry& registry,
                             Variant variant, RmseConvention convention) {
  RmseReport report;
  report.variant = variant;
  report.convention = convention;
  report.type_labels = registry.labels;
  report.test_totals.assign(registry.size(), 0);

  std::set<ModelKind> model_set;
  for (const auto& entry : preds.entries) {
    if (entry.variant == variant) model_set.insert(entry.model);
  }
  std::vector<ModelKind> models(model_set.begin(), model_set.end());
  if (models.empty()) return report;

  // Test totals from a single model's slice so each cell counts once.
  for (const auto& entry : preds.entries) {
    if (entry.variant == variant && entry.model == models.front())
      report.test_totals[entry.type_index] += static_cast<long>(entry.actual);
  }

  for (int t = 0; t < registry.size(); ++t) {
    if (report.test_totals[t] <= 0) {
      report.excluded_types.push_back(t);
      continue;
    }
    for (ModelKind model : models) {
      RmseRow row;
      row.type_index = t;
      row.model = model;
      row.rmse = rmse_per_type(preds, t, model, variant, convention);
      std::vector<double> abs_errors;
      for (const auto& entry : preds.entries) {
        if (entry.type_index == t && entry.model == model && entry.variant == variant)
          abs_errors.push_back(std::abs(entry.actual - entry.predicted));
      }
      row.box = box_stats(std::move(abs_errors));
      report.rows.push_back(row);
    }
  }
  return report;
}

std::vector<int> top_types_by_total(const RmseReport& report, int n) {
  std::vector<int> types;
  for (int t = 0; t < static_cast<int>(report.test_totals.size()); ++t) {
    if (report.test_totals[t] > 0) types.push_back(t);
  }
  std::stable_sort(types.begin(), types.end(), [&](int a, int b) {
    if (report.test_totals[a] != report.test_totals[b])
      return report.test_totals[a] > report.test_totals[b];
    return a < b;
  });
  if (static_cast<int>(types.size()) > n) types.resize(n);
  return types;
}

VariantComparison compare_variants(const RmseReport& full, const RmseReport& only_crime) {
  auto keys = [](const RmseReport& report) {
    std::vector<std::pair<int, ModelKind>> out;
    for (const auto& row : report.rows) out.emplace_back(row.type_index, row.model);
    return out;
  };
  if (keys(full) != keys(only_crime))
    throw KeyMismatch("reports carry different (type, model) keys");

  VariantComparison comparison;
  comparison.type_labels = full.type_labels;
  for (size_t r = 0; r < full.rows.size(); ++r) {
    const RmseRow& f = full.rows[r];
    const RmseRow& o = only_crime.rows[r];
    ComparisonRow row;
    row.type_index = f.type_index;
    row.model = f.model;
    row.rmse_full = f.rmse;
    row.rmse_only_crime = o.rmse;
    row.delta = f.rmse - o.rmse;
    row.relative = o.rmse != 0.0 ? row.delta / o.rmse : 0.0;
    row.winner = f.rmse < o.rmse ? 1 : (f.rmse > o.rmse ? -1 : 0);
    if (row.winner == 1) comparison.full_wins[f.model] += 1;
    comparison.rows.push_back(row);
  }
  return comparison;
}

namespace {

void print_real(std::ostream& out, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  out << buf;
}

}  // namespace

void write_rmse_summary_csv(const std::vector<RmseReport>& reports, std::ostream& out) {
  out << "type,model,variant,rmse\n";
  for (const auto& report : reports) {
    for (const auto& row : report.rows) {
      out << report.type_labels[row.type_index] << ',' << to_string(row.model) << ','
          << to_string(report.variant) << ',';
      print_real(out, row.rmse);
      out << '\n';
    }
  }
}

void write_boxstats_csv(const std::vector<RmseReport>& reports, std::ostream& out) {
  out << "type,model,variant,min,q1,median,q3,max\n";
  for (const auto& report : reports) {
    for (const auto& row : report.rows) {
      out << report.type_labels[row.type_index] << ',' << to_string(row.model) << ','
          << to_string(report.variant);
      for (double v : {row.box.min, row.box.q1, row.box.median, row.box.q3, row.box.max}) {
        out << ',';
        print_real(out, v);
      }
      out << '\n';
    }
  }
}

void write_predictions_csv(const PredictionSet& preds, const CrimeTypeRegistry& registry,
                           MonthSpan span, std::ostream& out) {
  out << "month,community,type,model,variant,actual,predicted\n";
  for (const auto& entry : preds.entries) {
    out << format_month(span.at(entry.month_index)) << ',' << entry.community_id << ','
        << registry.labels[entry.type_index] << ',' << to_string(entry.model) << ','
        << to_string(entry.variant) << ',' << static_cast<long>(entry.actual) << ',';
    print_real(out, entry.predicted);
    out << '\n';
  }
}

void write_comparison_csv(const VariantComparison& comparison, std::ostream& out) {
  out << "type,model,rmse_full,rmse_only_crime,delta,relative,winner\n";
  for (const auto& row : comparison.rows) {
    out << comparison.type_labels[row.type_index] << ',' << to_string(row.model) << ',';
    print_real(out, row.rmse_full);
    out << ',';
    print_real(out, row.rmse_only_crime);
    out << ',';
    print_real(out, row.delta);
    out << ',';
    print_real(out, row.relative);
    out << ',' << (row.winner == 1 ? "full" : (row.winner == -1 ? "only_crime" : "tie")) << '\n';
  }
}

void write_plot_data_csv(const std::vector<RmseReport>& reports,
                         const std::vector<int>& type_order, std::ostream& out) {
  out << "type,model,variant,min,q1,median,q3,max\n";
  for (int t : type_order) {
    for (const auto& report : reports) {
      for (const auto& row : report.rows) {
        if (row.type_index != t) continue;
        out << report.type_labels[t] << ',' << to_string(row.model) << ','
            << to_string(report.variant);
        for (double v : {row.box.min, row.box.q1, row.box.median, row.box.q3, row.box.max}) {
          out << ',';
          print_real(out, v);
        }
        out << '\n';
      }
    }
  }
}

}  // namespace crimenet
