#include "crimenet/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "crimenet/errors.hpp"
#include "crimenet/linalg.hpp"

namespace crimenet {

std::optional<SimilarityKind> parse_similarity_kind(const std::string& name) {
  if (name == "cosine") return SimilarityKind::cosine;
  if (name == "raw") return SimilarityKind::raw;
  if (name == "inverse_commute") return SimilarityKind::inverse_commute;
  return std::nullopt;
}

std::string to_string(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::cosine: return "cosine";
    case SimilarityKind::raw: return "raw";
    case SimilarityKind::inverse_commute: return "inverse_commute";
  }
  return "?";
}

Matrix laplacian(const MultiLayerNetwork& net) {
  if (net.node_count() == 0) throw EmptyInput("laplacian of an empty network");
  return laplacian_from_adjacency(net.adjacency_matrix());
}

Matrix transition_matrix(const MultiLayerNetwork& net) {
  if (net.node_count() == 0) throw EmptyInput("transition matrix of an empty network");
  return row_stochastic(net.adjacency_matrix());
}

CommunitySimilarity similarity_matrix(const MultiLayerNetwork& net, SimilarityKind kind,
                                      double rank_tol) {
  const int n_c = net.layer_count[static_cast<int>(Layer::community)];
  Matrix lap_pinv = pseudo_inverse(laplacian(net), rank_tol);
  Matrix block = lap_pinv.topLeftCorner(n_c, n_c);

  CommunitySimilarity sim;
  sim.month = net.month_index;
  sim.m = Matrix::Identity(n_c, n_c);

  switch (kind) {
    case SimilarityKind::cosine: {
      // Isolated communities (zero diagonal in L+) keep a zero row apart from
      // the unit diagonal.
      constexpr double kIsolated = 1e-12;
      for (int i = 0; i < n_c; ++i) {
        if (block(i, i) <= kIsolated) continue;
        for (int j = i + 1; j < n_c; ++j) {
          if (block(j, j) <= kIsolated) continue;
          double value = block(i, j) / std::sqrt(block(i, i) * block(j, j));
          value = std::clamp(value, -1.0, 1.0);
          sim.m(i, j) = sim.m(j, i) = value;
        }
      }
      break;
    }
    case SimilarityKind::raw:
      sim.m = 0.5 * (block + block.transpose());
      break;
    case SimilarityKind::inverse_commute: {
      const double volume = 2.0 * net.total_weight();
      for (int i = 0; i < n_c; ++i) {
        for (int j = i + 1; j < n_c; ++j) {
          double commute = commute_time(block, volume, i, j);
          double value = commute > 1e-12 ? 1.0 / commute : 0.0;
          sim.m(i, j) = sim.m(j, i) = value;
        }
      }
      break;
    }
  }
  return sim;
}

CommunitySimilarity aggregate_similarities(const std::vector<CommunitySimilarity>& matrices) {
  if (matrices.empty()) throw EmptyInput("aggregate_similarities");
  const auto rows = matrices.front().m.rows();
  const auto cols = matrices.front().m.cols();
  Matrix sum = Matrix::Zero(rows, cols);
  for (const auto& sim : matrices) {
    if (sim.m.rows() != rows || sim.m.cols() != cols)
      throw DimensionMismatch("similarity matrices of different sizes");
    sum += sim.m;
  }
  CommunitySimilarity aggregate;
  aggregate.m = sum / static_cast<double>(matrices.size());
  aggregate.month = std::nullopt;
  return aggregate;
}

std::vector<int> top_k_similar(const CommunitySimilarity& sim, int community_id, int k) {
  const int n_c = static_cast<int>(sim.m.rows());
  if (k >= n_c) throw DimensionMismatch("k must be below the community count");
  std::vector<int> others;
  others.reserve(n_c - 1);
  for (int c = 1; c <= n_c; ++c)
    if (c != community_id) others.push_back(c);
  // Highest similarity first, lower id wins ties.
  std::stable_sort(others.begin(), others.end(), [&](int a, int b) {
    double sa = sim.m(community_id - 1, a - 1);
    double sb = sim.m(community_id - 1, b - 1);
    if (sa != sb) return sa > sb;
    return a < b;
  });
  others.resize(k);
  return others;
}

TopKNeighbors top_two_neighbors(const CommunitySimilarity& sim) {
  TopKNeighbors neighbors;
  const int n_c = static_cast<int>(sim.m.rows());
  neighbors.pairs.resize(n_c);
  for (int c = 1; c <= n_c; ++c) {
    auto top = top_k_similar(sim, c, 2);
    neighbors.pairs[c - 1] = {top[0], top[1]};
  }
  return neighbors;
}

void write_similarity_csv(const CommunitySimilarity& sim, std::ostream& out) {
  const int n_c = static_cast<int>(sim.m.rows());
  for (int c = 1; c <= n_c; ++c) out << (c > 1 ? "," : "") << 'c' << c;
  out << '\n';
  char buf[64];
  for (int i = 0; i < n_c; ++i) {
    for (int j = 0; j < n_c; ++j) {
      std::snprintf(buf, sizeof(buf), "%.9g", sim.m(i, j));
      out << (j > 0 ? "," : "") << buf;
    }
    out << '\n';
  }
}

void write_neighbors_csv(const TopKNeighbors& neighbors, std::ostream& out) {
  out << "community,first,second\n";
  for (size_t c = 0; c < neighbors.pairs.size(); ++c) {
    out << (c + 1) << ',' << neighbors.pairs[c][0] << ',' << neighbors.pairs[c][1] << '\n';
  }
}

}  // namespace crimenet
