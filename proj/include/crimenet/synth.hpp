#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crimenet/ingest.hpp"

// Deterministic synthetic cubes of the same shape as the real data, with a
// planted cross-layer signal for desk-scale testing: crime counts of every
// type in community c at month i are
//
//   round(base[c][t] + seasonal(i) + beta * library_visits[i-12][sigma(c)] + noise)
//
// where sigma is a planted similar-community pairing. The pairing is also
// planted into the 311 layer (paired communities request the same subset of
// service types at the same rates), so the fused network can recover sigma
// while the crime-only network cannot.

namespace crimenet {

struct SynthPlan {
  std::uint64_t seed = 7;
  int communities = 77;
  int crime_types = 5;
  int request_types = 8;
  int police_stations = 8;
  int schools_per_community = 2;
  Month start{2011, 1};
  int months = 60;

  double base_min = 8.0;
  double base_max = 12.0;
  double seasonal_amplitude = 3.0;
  double beta = 0.5;
  double noise_sigma = 1.0;

  double visits_min = 40.0;
  double visits_max = 160.0;
  double visits_step_sigma = 8.0;

  double request_rate_min = 20.0;
  double request_rate_max = 100.0;
  double request_noise_sigma = 2.0;
  int request_subset_size = 3;  // service types each community pair uses
};

struct SynthGroundTruth {
  std::vector<int> sigma;  // planted similar community per community (1-based ids)
  double beta = 0.0;
  double seasonal_amplitude = 0.0;
  Matrix base;                       // communities x types
  std::vector<IntVector> lead_visits;  // 12 pre-span months of per-community visits
};

struct SynthResult {
  MonthlyCube cube;
  SynthGroundTruth truth;
};

// Pure function of the plan (the seed included). Throws InvalidPlan on
// non-positive dimensions.
SynthResult generate_synthetic(const SynthPlan& plan);

// seasonal(i) used by the generator; exposed so oracles can regress on it.
double synth_seasonal(const SynthPlan& plan, int month_index);

}  // namespace crimenet
