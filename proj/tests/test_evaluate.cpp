#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "crimenet/errors.hpp"
#include "crimenet/evaluate.hpp"
#include "test_util.hpp"

using namespace crimenet;

namespace {

// 924 cells (77 communities x 12 months), one type, all residuals resid,
// actuals chosen so the type total matches.
PredictionSet uniform_residual_set(double actual, double resid, int type = 0) {
  PredictionSet preds;
  for (int month = 0; month < 12; ++month) {
    for (int c = 1; c <= 77; ++c) {
      PredictionEntry entry;
      entry.month_index = month;
      entry.community_id = c;
      entry.type_index = type;
      entry.model = ModelKind::svr;
      entry.variant = Variant::full;
      entry.actual = actual;
      entry.predicted = actual - resid;
      preds.entries.push_back(entry);
    }
  }
  return preds;
}

}  // namespace

TEST_CASE("perfect predictions have zero RMSE") {
  PredictionSet preds = uniform_residual_set(3.0, 0.0);
  CHECK(rmse_per_type(preds, 0, ModelKind::svr, Variant::full) == 0.0);
}

TEST_CASE("all-cells-off-by-one against a planted total") {
  // Σ err² = 924; paper denominator is the type total.
  PredictionSet preds = uniform_residual_set(57319.0 / 924.0, 1.0);
  double expected = std::sqrt(924.0 / 57319.0);
  CHECK(rmse_per_type(preds, 0, ModelKind::svr, Variant::full) ==
        doctest::Approx(expected).epsilon(1e-9));
  // frozen from the formula: sqrt(924/57319) = 0.126966 to 6 significant digits
  CHECK(rmse_per_type(preds, 0, ModelKind::svr, Variant::full) ==
        doctest::Approx(0.126966).epsilon(5e-6));
}

TEST_CASE("single-cell universe") {
  PredictionSet preds;
  PredictionEntry entry;
  entry.actual = 4.0;
  entry.predicted = 6.0;
  entry.model = ModelKind::ar;
  entry.variant = Variant::full;
  preds.entries.push_back(entry);
  CHECK(rmse_per_type(preds, 0, ModelKind::ar, Variant::full) == doctest::Approx(1.0));
}

TEST_CASE("zero-total types raise ZeroCrimeType; empty slices raise EmptyInput") {
  PredictionSet preds = uniform_residual_set(0.0, 1.0);
  CHECK_THROWS_AS(rmse_per_type(preds, 0, ModelKind::svr, Variant::full), ZeroCrimeType);
  CHECK_THROWS_AS(rmse_per_type(preds, 1, ModelKind::svr, Variant::full), EmptyInput);
  // the cells convention stays defined at zero totals
  CHECK(rmse_per_type(preds, 0, ModelKind::svr, Variant::full, RmseConvention::cells) ==
        doctest::Approx(1.0));
}

TEST_CASE("rmse is permutation invariant and strictly monotone in any cell error") {
  testutil::Rng rng(7);
  PredictionSet preds;
  for (int k = 0; k < 50; ++k) {
    PredictionEntry entry;
    entry.month_index = k % 12;
    entry.community_id = k % 7 + 1;
    entry.actual = 1 + rng.uniform_int(20);
    entry.predicted = entry.actual + rng.normal();
    entry.model = ModelKind::polyreg;
    entry.variant = Variant::only_crime;
    preds.entries.push_back(entry);
  }
  double base = rmse_per_type(preds, 0, ModelKind::polyreg, Variant::only_crime);

  PredictionSet shuffled = preds;
  std::reverse(shuffled.entries.begin(), shuffled.entries.end());
  CHECK(rmse_per_type(shuffled, 0, ModelKind::polyreg, Variant::only_crime) ==
        doctest::Approx(base));

  preds.entries[10].predicted += 3.0 * std::abs(preds.entries[10].predicted -
                                                preds.entries[10].actual) + 1.0;
  CHECK(rmse_per_type(preds, 0, ModelKind::polyreg, Variant::only_crime) > base);
}

TEST_CASE("box statistics") {
  BoxStats odd = box_stats({1, 2, 3, 4, 5});
  CHECK(odd.min == 1.0);
  CHECK(odd.q1 == 2.0);
  CHECK(odd.median == 3.0);
  CHECK(odd.q3 == 4.0);
  CHECK(odd.max == 5.0);

  BoxStats single = box_stats({7.5});
  CHECK(single.min == 7.5);
  CHECK(single.q1 == 7.5);
  CHECK(single.median == 7.5);
  CHECK(single.q3 == 7.5);
  CHECK(single.max == 7.5);

  // fractional ranks p*(n-1) on 4 values
  BoxStats even = box_stats({1, 2, 3, 4});
  CHECK(even.q1 == doctest::Approx(1.75));
  CHECK(even.median == doctest::Approx(2.5));
  CHECK(even.q3 == doctest::Approx(3.25));

  CHECK_THROWS_AS(box_stats({}), EmptyInput);
}

TEST_CASE("box extremes equal the sample extremes") {
  testutil::Rng rng(9);
  std::vector<double> values;
  for (int k = 0; k < 31; ++k) values.push_back(rng.uniform(-10, 10));
  BoxStats stats = box_stats(values);
  CHECK(stats.min == *std::min_element(values.begin(), values.end()));
  CHECK(stats.max == *std::max_element(values.begin(), values.end()));
  CHECK(stats.q1 <= stats.median);
  CHECK(stats.median <= stats.q3);
}

namespace {

RmseReport report_with(Variant variant, std::vector<double> rmse_by_type) {
  RmseReport report;
  report.variant = variant;
  report.convention = RmseConvention::paper;
  for (size_t t = 0; t < rmse_by_type.size(); ++t) {
    report.type_labels.push_back("T" + std::to_string(t));
    report.test_totals.push_back(100 * (static_cast<long>(t) + 1));
    RmseRow row;
    row.type_index = static_cast<int>(t);
    row.model = ModelKind::svr;
    row.rmse = rmse_by_type[t];
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace

TEST_CASE("compare_variants deltas, winners and antisymmetry") {
  RmseReport full = report_with(Variant::full, {0.8, 1.0, 1.2});
  RmseReport crime = report_with(Variant::only_crime, {1.0, 1.0, 1.1});

  VariantComparison comparison = compare_variants(full, crime);
  CHECK(comparison.rows[0].delta == doctest::Approx(-0.2));
  CHECK(comparison.rows[0].relative == doctest::Approx(-0.2));
  CHECK(comparison.rows[0].winner == 1);
  CHECK(comparison.rows[1].winner == 0);
  CHECK(comparison.rows[2].winner == -1);
  CHECK(comparison.full_wins[ModelKind::svr] == 1);

  VariantComparison swapped = compare_variants(crime, full);
  for (size_t r = 0; r < comparison.rows.size(); ++r) {
    CHECK(swapped.rows[r].delta == doctest::Approx(-comparison.rows[r].delta));
    CHECK(swapped.rows[r].winner == -comparison.rows[r].winner);
  }

  SUBCASE("identical reports tie everywhere") {
    VariantComparison same = compare_variants(full, report_with(Variant::only_crime, {0.8, 1.0, 1.2}));
    for (const auto& row : same.rows) {
      CHECK(row.delta == 0.0);
      CHECK(row.winner == 0);
    }
  }

  SUBCASE("mismatched keys are rejected") {
    RmseReport missing = report_with(Variant::only_crime, {1.0, 1.0});
    CHECK_THROWS_AS(compare_variants(full, missing), KeyMismatch);
  }
}

TEST_CASE("top-11 filter keeps the most frequent types in order") {
  RmseReport report;
  report.variant = Variant::full;
  for (int t = 0; t < 14; ++t) {
    report.type_labels.push_back("T" + std::to_string(t));
    report.test_totals.push_back((t * 7) % 13 * 100 + 1);  // distinct-ish totals
  }
  auto top = top_types_by_total(report, 11);
  REQUIRE(top.size() == 11);
  for (size_t k = 1; k < top.size(); ++k)
    CHECK(report.test_totals[top[k - 1]] >= report.test_totals[top[k]]);
  // all excluded types have totals <= the retained minimum
  long cutoff = report.test_totals[top.back()];
  int kept = 0;
  for (int t = 0; t < 14; ++t)
    if (report.test_totals[t] > cutoff) ++kept;
  CHECK(kept <= 11);
}

TEST_CASE("csv writers emit headers and 9-digit reals") {
  RmseReport report = report_with(Variant::full, {0.123456789123});
  report.rows[0].box = BoxStats{0, 0.25, 0.5, 0.75, 1};
  std::ostringstream summary;
  write_rmse_summary_csv({report}, summary);
  CHECK(summary.str() == "type,model,variant,rmse\nT0,svr,full,0.123456789\n");

  std::ostringstream box;
  write_boxstats_csv({report}, box);
  CHECK(box.str() ==
        "type,model,variant,min,q1,median,q3,max\nT0,svr,full,0,0.25,0.5,0.75,1\n");
}
