#include "crimenet/network.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>

#include "crimenet/errors.hpp"

namespace crimenet {

std::string to_string(Layer layer) {
  switch (layer) {
    case Layer::community: return "community";
    case Layer::crime_type: return "crime_type";
    case Layer::school: return "school";
    case Layer::police: return "police";
    case Layer::library: return "library";
    case Layer::request_type: return "request_type";
  }
  return "?";
}

std::string to_string(Variant variant) {
  return variant == Variant::full ? "full" : "only_crime";
}

int MultiLayerNetwork::ordinal(NodeId node) const {
  int layer = static_cast<int>(node.layer);
  int within = node.layer == Layer::community ? node.index - 1 : node.index;
  if (within < 0 || within >= layer_count[layer]) return -1;
  return layer_offset[layer] + within;
}

Matrix MultiLayerNetwork::adjacency_matrix() const {
  Matrix w = Matrix::Zero(node_count(), node_count());
  for (const Edge& e : edges) {
    w(e.u, e.v) = e.weight;
    w(e.v, e.u) = e.weight;
  }
  return w;
}

double MultiLayerNetwork::total_weight() const {
  double total = 0.0;
  for (const Edge& e : edges) total += e.weight;
  return total;
}

double MultiLayerNetwork::find_weight(NodeId a, NodeId b) const {
  int u = ordinal(a), v = ordinal(b);
  if (u < 0 || v < 0) return 0.0;
  if (u > v) std::swap(u, v);
  for (const Edge& e : edges) {
    if (e.u == u && e.v == v) return e.weight;
  }
  return 0.0;
}

Vector minmax_normalize_layer(const Vector& weights) {
  if (weights.size() == 0) throw EmptyLayer("minmax_normalize_layer");
  double lo = weights.minCoeff();
  double hi = weights.maxCoeff();
  if (hi == lo) return Vector::Ones(weights.size());
  return (weights.array() - lo) / (hi - lo);
}

std::vector<std::vector<int>> stations_by_community(const MonthlyCube& cube) {
  std::vector<std::vector<int>> map(cube.n_communities);
  for (size_t p = 0; p < cube.stations.size(); ++p) {
    for (int c : cube.stations[p].communities) map[c - 1].push_back(static_cast<int>(p));
  }
  return map;
}

Matrix police_crime_weights(const MonthlyCube& cube, int month_index,
                            const std::vector<std::vector<int>>& stations_by_community) {
  if (month_index < 0 || month_index >= cube.span.count)
    throw MonthOutOfSpan(std::to_string(month_index));
  if (static_cast<int>(stations_by_community.size()) != cube.n_communities)
    throw DimensionMismatch("stations_by_community size");
  for (int c = 0; c < cube.n_communities; ++c) {
    if (stations_by_community[c].empty())
      throw UnmappedCommunity("community " + std::to_string(c + 1) + " has no station");
  }
  Matrix weights = Matrix::Zero(static_cast<Eigen::Index>(cube.stations.size()),
                                cube.types.size());
  const IntMatrix& counts = cube.crime_counts[month_index];
  for (int c = 0; c < cube.n_communities; ++c) {
    for (int p : stations_by_community[c]) {
      for (int t = 0; t < cube.types.size(); ++t) weights(p, t) += counts(c, t);
    }
  }
  return weights;
}

namespace {

// One edge family: raw weights collected first, min-max normalized together.
struct FamilyBuilder {
  std::vector<Edge> edges;

  void add(int u, int v, double raw) {
    if (raw <= 0.0) return;  // zero raw weight -> absent edge
    if (u > v) std::swap(u, v);
    edges.push_back({u, v, raw});
  }

  void normalize_into(std::vector<Edge>& out) {
    if (edges.empty()) return;
    Vector raw(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) raw[static_cast<Eigen::Index>(i)] = edges[i].weight;
    Vector normalized = minmax_normalize_layer(raw);
    for (size_t i = 0; i < edges.size(); ++i) {
      edges[i].weight = normalized[static_cast<Eigen::Index>(i)];
      out.push_back(edges[i]);
    }
    edges.clear();
  }
};

}  // namespace

MultiLayerNetwork build_network(const MonthlyCube& cube, int month_index, Variant variant) {
  if (month_index < 0 || month_index >= cube.span.count)
    throw MonthOutOfSpan(std::to_string(month_index) + " not in span of " +
                         std::to_string(cube.span.count) + " months");

  const bool full = variant == Variant::full;
  const int n_c = cube.n_communities;
  const int n_t = cube.types.size();
  const int n_s = full ? static_cast<int>(cube.schools.size()) : 0;
  const int n_p = static_cast<int>(cube.stations.size());
  const int n_l = full ? static_cast<int>(cube.libraries.size()) : 0;
  const int n_r = full ? static_cast<int>(cube.request_types.size()) : 0;

  MultiLayerNetwork net;
  net.variant = variant;
  net.month_index = month_index;
  net.layer_count = {n_c, n_t, n_s, n_p, n_l, n_r};
  int offset = 0;
  for (int layer = 0; layer < 6; ++layer) {
    net.layer_offset[layer] = offset;
    offset += net.layer_count[layer];
  }
  net.nodes.reserve(offset);
  for (int c = 1; c <= n_c; ++c) net.nodes.push_back({Layer::community, c});
  for (int t = 0; t < n_t; ++t) net.nodes.push_back({Layer::crime_type, t});
  for (int s = 0; s < n_s; ++s) net.nodes.push_back({Layer::school, s});
  for (int p = 0; p < n_p; ++p) net.nodes.push_back({Layer::police, p});
  for (int l = 0; l < n_l; ++l) net.nodes.push_back({Layer::library, l});
  for (int r = 0; r < n_r; ++r) net.nodes.push_back({Layer::request_type, r});

  auto community_ord = [&](int id) { return id - 1; };
  auto type_ord = [&](int t) { return net.layer_offset[1] + t; };
  auto school_ord = [&](int s) { return net.layer_offset[2] + s; };
  auto police_ord = [&](int p) { return net.layer_offset[3] + p; };
  auto library_ord = [&](int l) { return net.layer_offset[4] + l; };
  auto request_ord = [&](int r) { return net.layer_offset[5] + r; };

  const IntMatrix& counts = cube.crime_counts[month_index];
  FamilyBuilder family;

  // community-crime: this month's counts
  for (int c = 0; c < n_c; ++c)
    for (int t = 0; t < n_t; ++t) family.add(c, type_ord(t), counts(c, t));
  family.normalize_into(net.edges);

  // community-community: shared borders, uniform raw weight
  for (int a = 0; a < n_c; ++a)
    for (int b = a + 1; b < n_c; ++b)
      if (cube.adjacency(a, b) != 0) family.add(a, b, 1.0);
  family.normalize_into(net.edges);

  // school-community: ACT score of the school
  if (full) {
    for (int s = 0; s < n_s; ++s) {
      const School& school = cube.schools[s];
      if (school.act) family.add(school_ord(s), community_ord(school.community_id), *school.act);
    }
    family.normalize_into(net.edges);
  }

  // police-community: direct district coverage, then neighbors of covered
  // communities that no station reaches directly
  {
    std::vector<char> covered(n_c, 0);
    for (int p = 0; p < n_p; ++p)
      for (int c : cube.stations[p].communities) covered[c - 1] = 1;
    std::set<std::pair<int, int>> added;
    for (int p = 0; p < n_p; ++p) {
      for (int c : cube.stations[p].communities) {
        family.add(police_ord(p), community_ord(c), 1.0);
        for (int b = 0; b < n_c; ++b) {
          if (cube.adjacency(c - 1, b) != 0 && !covered[b] &&
              added.insert({p, b}).second) {
            family.add(police_ord(p), b, 1.0);
          }
        }
      }
    }
    family.normalize_into(net.edges);
  }

  // police-crime: counts summed over the station's covered communities
  for (int p = 0; p < n_p; ++p) {
    for (int t = 0; t < n_t; ++t) {
      double w = 0.0;
      for (int c : cube.stations[p].communities) w += counts(c - 1, t);
      family.add(police_ord(p), type_ord(t), w);
    }
  }
  family.normalize_into(net.edges);

  // library-community: this month's visitors
  if (full) {
    const IntVector& visits = cube.visits_by_library[month_index];
    for (int l = 0; l < n_l; ++l)
      family.add(library_ord(l), community_ord(cube.libraries[l].community_id), visits[l]);
    family.normalize_into(net.edges);
  }

  // request-community: this month's 311 calls per type
  if (full) {
    const IntMatrix& calls = cube.service_calls[month_index];
    for (int c = 0; c < n_c; ++c)
      for (int r = 0; r < n_r; ++r) family.add(c, request_ord(r), calls(c, r));
    family.normalize_into(net.edges);
  }

  return net;
}

void write_edge_list(const MultiLayerNetwork& net, std::ostream& out) {
  char buf[64];
  for (const Edge& e : net.edges) {
    const NodeId& u = net.nodes[e.u];
    const NodeId& v = net.nodes[e.v];
    std::snprintf(buf, sizeof(buf), "%.9g", e.weight);
    out << to_string(u.layer) << ':' << u.index << ',' << to_string(v.layer) << ':' << v.index
        << ',' << buf << '\n';
  }
}

}  // namespace crimenet
