#pragma once

// Shared helpers for the test binaries: a seeded RNG with stable
// distributions, random graph builders, and a small hand-assembled cube.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "crimenet/ingest.hpp"
#include "crimenet/types.hpp"

namespace testutil {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  int uniform_int(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
  double normal() {
    double u1 = uniform01();
    if (u1 <= 0.0) u1 = 5e-324;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * uniform01());
  }

 private:
  std::mt19937_64 engine_;
};

// Symmetric weighted adjacency of a random graph (no connectivity guarantee).
inline crimenet::Matrix random_weighted_adjacency(Rng& rng, int n, double edge_prob = 0.4,
                                                  double w_lo = 0.1, double w_hi = 10.0) {
  crimenet::Matrix w = crimenet::Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform01() < edge_prob) {
        double weight = rng.uniform(w_lo, w_hi);
        w(i, j) = w(j, i) = weight;
      }
    }
  }
  return w;
}

// Connected unit-weight graph: random attachment tree plus extra edges.
inline crimenet::Matrix random_connected_unit_graph(Rng& rng, int n, int extra_edges = 3) {
  crimenet::Matrix w = crimenet::Matrix::Zero(n, n);
  for (int v = 1; v < n; ++v) {
    int parent = rng.uniform_int(v);
    w(v, parent) = w(parent, v) = 1.0;
  }
  for (int e = 0; e < extra_edges; ++e) {
    int a = rng.uniform_int(n);
    int b = rng.uniform_int(n);
    if (a != b) w(a, b) = w(b, a) = 1.0;
  }
  return w;
}

// Tiny deterministic cube: 4 communities in a path, 2 crime types, 2 stations,
// a library and a school each in communities 1 and 2, one 311 type.
inline crimenet::MonthlyCube small_cube(int months = 3) {
  using namespace crimenet;
  MonthlyCube cube;
  cube.span = MonthSpan{Month{2011, 1}, months};
  cube.n_communities = 4;
  cube.types.labels = {"ASSAULT", "THEFT"};
  cube.request_types = {"POT_HOLE"};

  cube.crime_counts.assign(months, IntMatrix::Zero(4, 2));
  cube.service_calls.assign(months, IntMatrix::Zero(4, 1));
  for (int i = 0; i < months; ++i) {
    // community 1 heavy on THEFT, community 3 on ASSAULT
    cube.crime_counts[i](0, 1) = 3 + i;
    cube.crime_counts[i](2, 0) = 2;
    cube.crime_counts[i](3, 1) = 1;
    cube.service_calls[i](1, 0) = 5;
  }

  cube.libraries = {{"LIB_A", 1}};
  cube.visits_by_library.assign(months, IntVector::Zero(1));
  for (int i = 0; i < months; ++i) cube.visits_by_library[i][0] = 40 + 10 * i;

  cube.schools = {{"SCH_A", 2, 21.5}};
  cube.stations = {{"P_0", {1, 2}}, {"P_1", {4}}};

  cube.adjacency = IntMatrix::Zero(4, 4);
  auto connect = [&](int a, int b) {
    cube.adjacency(a - 1, b - 1) = 1;
    cube.adjacency(b - 1, a - 1) = 1;
  };
  connect(1, 2);
  connect(2, 3);
  connect(3, 4);

  cube.school_count = IntVector::Zero(4);
  for (const auto& school : cube.schools) cube.school_count[school.community_id - 1] += 1;
  cube.police_count = IntVector::Zero(4);
  for (const auto& station : cube.stations)
    for (int c : station.communities) cube.police_count[c - 1] += 1;
  return cube;
}

}  // namespace testutil
