#pragma once

#include <cstdint>
#include <vector>

#include "treecross/rng.hpp"
#include "treecross/tree.hpp"

namespace treecross {

/// A potential crossing: chords {a,c} and {b,d} with a < b < c < d.
struct CrossingIndex {
  Vertex a = 0;
  Vertex b = 0;
  Vertex c = 0;
  Vertex d = 0;

  constexpr auto operator<=>(const CrossingIndex&) const = default;
};

/// Sorts four distinct labels into an index. Throws std::invalid_argument on
/// repeated labels.
CrossingIndex make_crossing_index(Vertex w, Vertex x, Vertex y, Vertex z);

/// True iff the two indices share no vertex.
bool vertex_disjoint(const CrossingIndex& i, const CrossingIndex& j);

/// All C(n,4) indices in lexicographic order.
std::vector<CrossingIndex> all_crossing_indices(int n);

/// Uniform over the C(n,4) indices. n >= 4.
CrossingIndex sample_crossing_index(int n, Rng& rng);

/// Strict interleaving of two chords in circular order. Chords sharing an
/// endpoint never cross.
constexpr bool chords_cross(Edge e, Edge f) {
  return (e.u < f.u && f.u < e.v && e.v < f.v) || (f.u < e.u && e.u < f.v && f.v < e.v);
}

/// Y_j: both {a,c} and {b,d} are edges of the tree.
bool has_crossing_at(const LabeledTree& tree, const CrossingIndex& j);

/// Pairwise chord test over the n-1 edges, O(n^2).
std::int64_t count_crossings_naive(const LabeledTree& tree);

/// Sweep over left endpoints with a Fenwick tree on right endpoints,
/// O(n log n). Same value as count_crossings_naive.
std::int64_t count_crossings_fast(const LabeledTree& tree);

/// Indices j with has_crossing_at(tree, j), sorted.
std::vector<CrossingIndex> list_crossings(const LabeledTree& tree);

}  // namespace treecross
