#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "crimenet/network.hpp"
#include "crimenet/types.hpp"

// Random-walk similarity between communities from the pseudoinverse of the
// full multi-layer graph Laplacian, restricted to the community block. The
// default similarity is the cosine of L+ entries; raw entries and inverse
// commute time sit behind the same switch.

namespace crimenet {

enum class SimilarityKind { cosine, raw, inverse_commute };

std::optional<SimilarityKind> parse_similarity_kind(const std::string& name);
std::string to_string(SimilarityKind kind);

struct CommunitySimilarity {
  Matrix m;                      // n_communities x n_communities, symmetric
  std::optional<int> month;      // single-month matrix; nullopt == aggregate
};

Matrix laplacian(const MultiLayerNetwork& net);

// Row-stochastic random-walk transition matrix over the full node set.
Matrix transition_matrix(const MultiLayerNetwork& net);

CommunitySimilarity similarity_matrix(const MultiLayerNetwork& net,
                                      SimilarityKind kind = SimilarityKind::cosine,
                                      double rank_tol = 1e-9);

// Element-wise mean. Throws DimensionMismatch on ragged input, EmptyInput on
// an empty list.
CommunitySimilarity aggregate_similarities(const std::vector<CommunitySimilarity>& matrices);

// The k distinct communities (ids) most similar to c, ties broken by lower
// community id.
std::vector<int> top_k_similar(const CommunitySimilarity& sim, int community_id, int k = 2);

struct TopKNeighbors {
  std::vector<std::array<int, 2>> pairs;  // indexed by community-1, ids 1-based

  int first(int community_id) const { return pairs[community_id - 1][0]; }
  int second(int community_id) const { return pairs[community_id - 1][1]; }
};

TopKNeighbors top_two_neighbors(const CommunitySimilarity& sim);

// CSV exports: similarity as a header-labeled square table, neighbors as
// community,first,second rows.
void write_similarity_csv(const CommunitySimilarity& sim, std::ostream& out);
void write_neighbors_csv(const TopKNeighbors& neighbors, std::ostream& out);

}  // namespace crimenet
