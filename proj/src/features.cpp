#include "crimenet/features.hpp"

#include <cstdio>
#include <ostream>

#include "crimenet/errors.hpp"

namespace crimenet {

MinMaxParams fit_minmax(const Matrix& x_train) {
  MinMaxParams params;
  params.col_min = x_train.colwise().minCoeff();
  params.col_max = x_train.colwise().maxCoeff();
  return params;
}

Vector apply_minmax(const Vector& x, const MinMaxParams& params) {
  if (x.size() != params.col_min.size())
    throw DimensionMismatch("feature vector vs min-max parameters");
  Vector out(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    double range = params.col_max[j] - params.col_min[j];
    out[j] = range == 0.0 ? 1.0 : (x[j] - params.col_min[j]) / range;
  }
  return out;
}

Matrix apply_minmax_rows(const Matrix& x, const MinMaxParams& params) {
  if (x.cols() != params.col_min.size())
    throw DimensionMismatch("feature matrix vs min-max parameters");
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    out.row(i) = apply_minmax(x.row(i).transpose(), params).transpose();
  return out;
}

int feature_dimension(const MonthlyCube& cube) { return 3 * cube.types.size() + 12; }

Vector build_feature_vector(const MonthlyCube& cube, int month_index, int community_id,
                            const TopKNeighbors& neighbors) {
  if (month_index < 0 || month_index >= cube.span.count)
    throw MonthOutOfSpan(std::to_string(month_index));
  const int a = neighbors.first(community_id);
  const int b = neighbors.second(community_id);
  const int n_t = cube.types.size();

  Vector x(feature_dimension(cube));
  const IntMatrix& counts = cube.crime_counts[month_index];
  int pos = 0;
  for (int id : {community_id, a, b}) {
    for (int t = 0; t < n_t; ++t) x[pos++] = counts(id - 1, t);
  }
  for (int id : {community_id, a, b}) x[pos++] = cube.police_count[id - 1];
  for (int id : {community_id, a, b}) x[pos++] = cube.library_visits(month_index, id);
  for (int id : {community_id, a, b}) x[pos++] = cube.school_count[id - 1];
  for (int id : {community_id, a, b}) x[pos++] = cube.service_calls_total(month_index, id);
  return x;
}

namespace {

void check_split(const MonthlyCube& cube, const TrainTestSplit& split, int alignment) {
  if (alignment < 1) throw SpanTooShort("alignment must be >= 1");
  if (split.train_begin < 0 || split.train_count <= 0 || split.test_count <= 0 ||
      split.train_begin + split.train_count > split.test_begin ||
      split.test_begin + split.test_count > cube.span.count)
    throw SpanTooShort("train/test ranges must be disjoint, in order, inside the span");
  if (split.train_count < alignment + 12)
    throw SpanTooShort("training span must cover at least alignment + 12 months");
  if (split.test_begin - alignment < 0)
    throw SpanTooShort("test features would reach before the span");
}

}  // namespace

DesignMatrices build_design_matrices(const MonthlyCube& cube, const TopKNeighbors& neighbors,
                                     const TrainTestSplit& split, int alignment) {
  check_split(cube, split, alignment);
  const int n_c = cube.n_communities;
  const int dim = feature_dimension(cube);

  DesignMatrices design;
  const int train_months = split.train_count - alignment;
  design.x_train_raw.resize(static_cast<Eigen::Index>(train_months) * n_c, dim);
  design.x_test_raw.resize(static_cast<Eigen::Index>(split.test_count) * n_c, dim);

  Eigen::Index row = 0;
  for (int i = split.train_begin; i + alignment < split.train_begin + split.train_count; ++i) {
    for (int c = 1; c <= n_c; ++c, ++row) {
      design.x_train_raw.row(row) = build_feature_vector(cube, i, c, neighbors).transpose();
      design.train_keys.push_back({i + alignment, c});
    }
  }
  row = 0;
  for (int j = split.test_begin; j < split.test_begin + split.test_count; ++j) {
    for (int c = 1; c <= n_c; ++c, ++row) {
      design.x_test_raw.row(row) =
          build_feature_vector(cube, j - alignment, c, neighbors).transpose();
      design.test_keys.push_back({j, c});
    }
  }
  return design;
}

SupervisedDataset build_dataset(const MonthlyCube& cube, const TopKNeighbors& neighbors,
                                int type_index, const TrainTestSplit& split, int alignment) {
  DesignMatrices design = build_design_matrices(cube, neighbors, split, alignment);

  SupervisedDataset dataset;
  dataset.minmax = fit_minmax(design.x_train_raw);
  dataset.x_train = apply_minmax_rows(design.x_train_raw, dataset.minmax);
  dataset.x_test = apply_minmax_rows(design.x_test_raw, dataset.minmax);
  dataset.train_keys = std::move(design.train_keys);
  dataset.test_keys = std::move(design.test_keys);

  dataset.y_train.resize(static_cast<Eigen::Index>(dataset.train_keys.size()));
  for (size_t r = 0; r < dataset.train_keys.size(); ++r) {
    const SampleKey& key = dataset.train_keys[r];
    dataset.y_train[static_cast<Eigen::Index>(r)] =
        cube.crime_count(key.month_index, key.community_id, type_index);
  }
  dataset.y_test.resize(static_cast<Eigen::Index>(dataset.test_keys.size()));
  for (size_t r = 0; r < dataset.test_keys.size(); ++r) {
    const SampleKey& key = dataset.test_keys[r];
    dataset.y_test[static_cast<Eigen::Index>(r)] =
        cube.crime_count(key.month_index, key.community_id, type_index);
  }
  return dataset;
}

void write_dataset_csv(const MonthlyCube& cube, const SupervisedDataset& dataset,
                       std::ostream& out) {
  out << "month,community,y";
  for (Eigen::Index j = 0; j < dataset.x_train.cols(); ++j) out << ",f_" << j;
  out << '\n';
  char buf[64];
  auto dump = [&](const Matrix& x, const Vector& y, const std::vector<SampleKey>& keys) {
    for (size_t r = 0; r < keys.size(); ++r) {
      auto row = static_cast<Eigen::Index>(r);
      out << format_month(cube.span.at(keys[r].month_index)) << ',' << keys[r].community_id
          << ',' << y[row];
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.9g", x(row, j));
        out << ',' << buf;
      }
      out << '\n';
    }
  };
  dump(dataset.x_train, dataset.y_train, dataset.train_keys);
  dump(dataset.x_test, dataset.y_test, dataset.test_keys);
}

}  // namespace crimenet
