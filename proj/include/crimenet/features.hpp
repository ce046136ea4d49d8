#pragma once

#include <iosfwd>
#include <vector>

#include "crimenet/ingest.hpp"
#include "crimenet/similarity.hpp"
#include "crimenet/types.hpp"

// Per-(month, community) feature vectors and the aligned train/test matrices.
// Layout of one vector, with (a, b) the fixed top-2 neighbors of c:
//
//   [ crimes(c) | crimes(a) | crimes(b) | police(c,a,b) | library_visits(c,a,b)
//     | schools(c,a,b) | service_calls(c,a,b) ]
//
// dimension 3*|T| + 12. Features are min-max normalized with parameters
// fitted on the training rows only; targets stay raw counts.

namespace crimenet {

struct MinMaxParams {
  Vector col_min;
  Vector col_max;
};

MinMaxParams fit_minmax(const Matrix& x_train);

// (x - min) / (max - min) per column; constant columns map to 1; values
// outside the fitted range are not clipped.
Vector apply_minmax(const Vector& x, const MinMaxParams& params);
Matrix apply_minmax_rows(const Matrix& x, const MinMaxParams& params);

int feature_dimension(const MonthlyCube& cube);

Vector build_feature_vector(const MonthlyCube& cube, int month_index, int community_id,
                            const TopKNeighbors& neighbors);

struct SampleKey {
  int month_index = 0;   // target month
  int community_id = 0;
};

// Month index ranges into the cube span; test must follow training.
struct TrainTestSplit {
  int train_begin = 0;
  int train_count = 0;
  int test_begin = 0;
  int test_count = 0;
};

struct SupervisedDataset {
  Matrix x_train;  // normalized
  Matrix x_test;
  Vector y_train;  // raw counts
  Vector y_test;
  MinMaxParams minmax;
  std::vector<SampleKey> train_keys;
  std::vector<SampleKey> test_keys;
};

// Samples pair features at month i with the count at month i+alignment;
// training rows keep both months inside the training range, test rows target
// each test month. Row order is month-major then community id.
SupervisedDataset build_dataset(const MonthlyCube& cube, const TopKNeighbors& neighbors,
                                int type_index, const TrainTestSplit& split,
                                int alignment = 12);

// Shared design matrices for all crime types (X does not depend on the type);
// build_dataset slices targets out of this.
struct DesignMatrices {
  Matrix x_train_raw;
  Matrix x_test_raw;
  std::vector<SampleKey> train_keys;
  std::vector<SampleKey> test_keys;
};

DesignMatrices build_design_matrices(const MonthlyCube& cube, const TopKNeighbors& neighbors,
                                     const TrainTestSplit& split, int alignment);

// Debug dump, one row per sample: month,community,y,f_0..f_{D-1}.
void write_dataset_csv(const MonthlyCube& cube, const SupervisedDataset& dataset,
                       std::ostream& out);

}  // namespace crimenet
