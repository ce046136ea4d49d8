#include "crimenet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "crimenet/errors.hpp"

namespace crimenet {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Distributions are hand-rolled on top of the raw engine so that a given seed
// produces the same cube on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  int uniform_int(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
  double normal(double sigma) {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 <= 0.0) u1 = 5e-324;
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

std::string padded(const char* prefix, int value, int width = 3) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, value);
  return buf;
}

int round_count(double x) {
  long v = std::lround(x);
  return v < 0 ? 0 : static_cast<int>(v);
}

}  // namespace

double synth_seasonal(const SynthPlan& plan, int month_index) {
  int month_of_year = (plan.start.month - 1 + month_index) % 12;
  return plan.seasonal_amplitude * std::sin(2.0 * kPi * month_of_year / 12.0);
}

SynthResult generate_synthetic(const SynthPlan& plan) {
  if (plan.communities <= 0 || plan.crime_types <= 0 || plan.months <= 0 ||
      plan.request_types <= 0 || plan.police_stations <= 0 || plan.schools_per_community < 0)
    throw InvalidPlan("non-positive dimension in synthetic plan");

  const int n_c = plan.communities;
  const int n_t = plan.crime_types;
  const int n_r = plan.request_types;
  const int n_p = std::min(plan.police_stations, n_c);
  const int subset = std::min(plan.request_subset_size, n_r);

  Rng rng(plan.seed);

  // Planted similar-community pairing: shuffle, then pair consecutive slots.
  // An odd leftover community draws its signal from the first slot but has no
  // partner of its own.
  std::vector<int> order(n_c);
  for (int c = 0; c < n_c; ++c) order[c] = c;
  for (int c = n_c - 1; c > 0; --c) std::swap(order[c], order[rng.uniform_int(c + 1)]);

  std::vector<int> sigma(n_c, 0);
  std::vector<int> group(n_c, 0);
  const int n_pairs = n_c / 2;
  for (int k = 0; k < n_pairs; ++k) {
    int a = order[2 * k], b = order[2 * k + 1];
    sigma[a] = b;
    sigma[b] = a;
    group[a] = group[b] = k;
  }
  if (n_c % 2 == 1) {
    int leftover = order[n_c - 1];
    sigma[leftover] = order[0];
    group[leftover] = n_pairs;  // its own 311 profile
  }

  Matrix base(n_c, n_t);
  for (int c = 0; c < n_c; ++c)
    for (int t = 0; t < n_t; ++t) base(c, t) = rng.uniform(plan.base_min, plan.base_max);

  // Per-community library visits, random walk with a 12-month lead so the
  // planted lag reaches before the span.
  const int lead = 12;
  std::vector<std::vector<double>> visits(n_c, std::vector<double>(lead + plan.months));
  for (int c = 0; c < n_c; ++c) {
    visits[c][0] = rng.uniform(plan.visits_min, plan.visits_max);
    for (int i = 1; i < lead + plan.months; ++i) {
      double v = visits[c][i - 1] + rng.normal(plan.visits_step_sigma);
      visits[c][i] = v < 0.0 ? 0.0 : v;
    }
  }

  // 311 request profile per pair group: a characteristic subset of request
  // types with per-type rates shared by both pair members. Subsets are dealt
  // round-robin from one shuffled deck, so groups stay disjoint while request
  // types last.
  const int n_groups = n_pairs + (n_c % 2);
  std::vector<int> deck(n_r);
  for (int r = 0; r < n_r; ++r) deck[r] = r;
  for (int r = n_r - 1; r > 0; --r) std::swap(deck[r], deck[rng.uniform_int(r + 1)]);
  std::vector<std::vector<double>> group_rate(n_groups, std::vector<double>(n_r, 0.0));
  for (int g = 0; g < n_groups; ++g) {
    for (int s = 0; s < subset; ++s) {
      int hub = deck[(g * subset + s) % n_r];
      group_rate[g][hub] = rng.uniform(plan.request_rate_min, plan.request_rate_max);
    }
  }

  std::vector<double> group_act(n_groups);
  for (int g = 0; g < n_groups; ++g) group_act[g] = rng.uniform(17.0, 28.0);

  MonthlyCube cube;
  cube.span = MonthSpan{plan.start, plan.months};
  cube.n_communities = n_c;
  for (int t = 0; t < n_t; ++t) cube.types.labels.push_back(padded("TYPE_", t));
  for (int r = 0; r < n_r; ++r) cube.request_types.push_back(padded("REQ_", r));

  cube.crime_counts.assign(plan.months, IntMatrix::Zero(n_c, n_t));
  for (int i = 0; i < plan.months; ++i) {
    double seasonal = synth_seasonal(plan, i);
    for (int c = 0; c < n_c; ++c) {
      double planted = plan.beta * visits[sigma[c]][i];  // index i == span month i-12 + lead
      for (int t = 0; t < n_t; ++t) {
        double value = base(c, t) + seasonal + planted + rng.normal(plan.noise_sigma);
        cube.crime_counts[i](c, t) = round_count(value);
      }
    }
  }

  cube.service_calls.assign(plan.months, IntMatrix::Zero(n_c, n_r));
  for (int i = 0; i < plan.months; ++i) {
    for (int c = 0; c < n_c; ++c) {
      const auto& rates = group_rate[group[c]];
      for (int r = 0; r < n_r; ++r) {
        if (rates[r] <= 0.0) continue;
        cube.service_calls[i](c, r) = round_count(rates[r] + rng.normal(plan.request_noise_sigma));
      }
    }
  }

  for (int c = 0; c < n_c; ++c) cube.libraries.push_back({padded("LIB_", c + 1), c + 1});
  cube.visits_by_library.assign(plan.months, IntVector::Zero(n_c));
  for (int i = 0; i < plan.months; ++i)
    for (int c = 0; c < n_c; ++c)
      cube.visits_by_library[i][c] = round_count(visits[c][lead + i]);

  for (int c = 0; c < n_c; ++c) {
    for (int s = 0; s < plan.schools_per_community; ++s) {
      double act = group_act[group[c]] + rng.normal(0.5);
      cube.schools.push_back({padded("SCH_", c * plan.schools_per_community + s, 4), c + 1,
                              act < 1.0 ? 1.0 : act});
    }
  }

  for (int p = 0; p < n_p; ++p) cube.stations.push_back({padded("P_", p, 2), {}});
  for (int c = 0; c < n_c; ++c) {
    int p = static_cast<int>(static_cast<long>(c) * n_p / n_c);
    cube.stations[p].communities.push_back(c + 1);
  }

  cube.adjacency = IntMatrix::Zero(n_c, n_c);
  if (n_c > 1) {
    for (int c = 0; c < n_c; ++c) {
      int next = (c + 1) % n_c;
      if (next == c) continue;
      cube.adjacency(c, next) = 1;
      cube.adjacency(next, c) = 1;
    }
  }

  cube.school_count = IntVector::Zero(n_c);
  for (const auto& school : cube.schools) cube.school_count[school.community_id - 1] += 1;
  cube.police_count = IntVector::Zero(n_c);
  for (const auto& station : cube.stations)
    for (int c : station.communities) cube.police_count[c - 1] += 1;

  SynthGroundTruth truth;
  truth.sigma.resize(n_c);
  for (int c = 0; c < n_c; ++c) truth.sigma[c] = sigma[c] + 1;
  truth.beta = plan.beta;
  truth.seasonal_amplitude = plan.seasonal_amplitude;
  truth.base = base;
  truth.lead_visits.assign(lead, IntVector::Zero(n_c));
  for (int i = 0; i < lead; ++i)
    for (int c = 0; c < n_c; ++c) truth.lead_visits[i][c] = round_count(visits[c][i]);

  return SynthResult{std::move(cube), std::move(truth)};
}

}  // namespace crimenet
