#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "crimenet/ingest.hpp"
#include "crimenet/types.hpp"

// Per-month multi-layer weighted undirected graphs over communities, crime
// types, schools, police stations, libraries and 311 request types. Edge
// weights are min-max normalized within each edge family; zero raw weights
// never become edges, but the minimum of a family with >= 2 distinct raw
// values normalizes to 0 and that edge is kept.

namespace crimenet {

enum class Layer : int {
  community = 0,
  crime_type = 1,
  school = 2,
  police = 3,
  library = 4,
  request_type = 5,
};

std::string to_string(Layer layer);

struct NodeId {
  Layer layer{};
  int index = 0;  // community id (1-based) for communities, 0-based otherwise

  friend bool operator==(const NodeId&, const NodeId&) = default;
};

enum class Variant { full, only_crime };

std::string to_string(Variant variant);

struct Edge {
  int u = 0;  // node ordinals, u < v
  int v = 0;
  double weight = 0.0;
};

struct MultiLayerNetwork {
  Variant variant{};
  int month_index = 0;
  std::vector<NodeId> nodes;  // communities first, so ordinal(c) == c-1
  std::vector<Edge> edges;
  std::array<int, 6> layer_offset{};
  std::array<int, 6> layer_count{};

  int node_count() const { return static_cast<int>(nodes.size()); }
  int ordinal(NodeId node) const;
  int community_ordinal(int community_id) const { return community_id - 1; }

  Matrix adjacency_matrix() const;
  double total_weight() const;

  // 0 when the pair is not an edge; intended for tests and debugging.
  double find_weight(NodeId a, NodeId b) const;
};

// (w - min) / (max - min); a constant family maps to all ones. Throws
// EmptyLayer on an empty input.
Vector minmax_normalize_layer(const Vector& weights);

MultiLayerNetwork build_network(const MonthlyCube& cube, int month_index, Variant variant);

// Raw police-crime family: weight(p, t) = sum over communities served by p of
// that month's counts. stations_by_community is indexed by community-1 and
// must be total (UnmappedCommunity otherwise).
Matrix police_crime_weights(const MonthlyCube& cube, int month_index,
                            const std::vector<std::vector<int>>& stations_by_community);

std::vector<std::vector<int>> stations_by_community(const MonthlyCube& cube);

// Debug export, one `u_layer:u_index,v_layer:v_index,weight` line per edge.
void write_edge_list(const MultiLayerNetwork& net, std::ostream& out);

}  // namespace crimenet
