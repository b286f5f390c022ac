#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treecross/rng.hpp"

namespace treecross {

/// Vertex label, 1-based.
using Vertex = int;

/// Undirected edge stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  constexpr auto operator<=>(const Edge&) const = default;
};

/// Normalizes the pair so that u < v. Throws std::invalid_argument on a loop.
Edge make_edge(Vertex a, Vertex b);

/// Returns a description of the first violated tree invariant, or nullopt if
/// `edges` is a spanning tree on 1..n (n-1 distinct edges, connected, acyclic).
std::optional<std::string> tree_defect(int n, std::span<const Edge> edges);

/// A spanning tree on vertices 1..n, immutable after construction.
class LabeledTree {
 public:
  /// Validates and normalizes. Throws std::invalid_argument on any defect.
  static LabeledTree from_edges(int n, std::vector<Edge> edges);

  int vertex_count() const { return n_; }
  /// Sorted ascending.
  std::span<const Edge> edges() const { return edges_; }

  bool has_edge(Vertex a, Vertex b) const;

  /// adjacency()[v] lists the neighbours of v; index 0 is unused.
  std::vector<std::vector<Vertex>> adjacency() const;

  /// The unique path from `from` to `to`, both endpoints included.
  std::vector<Vertex> path(Vertex from, Vertex to) const;

  /// this + added - removed. `removed` must lie on the cycle closed by `added`.
  LabeledTree exchange(Edge added, Edge removed) const;

  friend bool operator==(const LabeledTree&, const LabeledTree&) = default;

 private:
  LabeledTree(int n, std::vector<Edge> sorted_edges) : n_(n), edges_(std::move(sorted_edges)) {}

  friend LabeledTree prufer_to_tree(std::span<const Vertex> code);

  int n_ = 0;
  std::vector<Edge> edges_;
};

/// Prüfer code of a tree on n = code.size() + 2 vertices, symbols in 1..n.
using PruferCode = std::vector<Vertex>;

/// Decodes by repeatedly removing the smallest-labelled leaf. Linear time.
LabeledTree prufer_to_tree(std::span<const Vertex> code);

/// Inverse of prufer_to_tree. Linear time.
PruferCode tree_to_prufer(const LabeledTree& tree);

/// n - 2 independent uniform symbols in 1..n.
PruferCode sample_prufer(int n, Rng& rng);

/// A uniformly random labelled tree on n >= 2 vertices.
LabeledTree sample_uniform_tree(int n, Rng& rng);

namespace detail {

/// Calls emit(leaf, parent) for every pruning step of the tree coded by
/// `code`, in decoding order; the last call attaches the final leaf to n.
/// `degree` is scratch space, resized as needed. Returns early (false) as
/// soon as emit returns false.
template <class Emit>
bool for_each_prufer_edge(std::span<const Vertex> code, std::vector<int>& degree, Emit&& emit) {
  const int n = static_cast<int>(code.size()) + 2;
  degree.assign(static_cast<std::size_t>(n) + 1, 1);
  for (Vertex x : code) ++degree[x];

  Vertex ptr = 1;
  while (degree[ptr] != 1) ++ptr;
  Vertex leaf = ptr;
  for (Vertex x : code) {
    if (!emit(leaf, x)) return false;
    if (--degree[x] == 1 && x < ptr) {
      leaf = x;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  return emit(leaf, n);
}

/// Whether the tree coded by `code` contains both edges. Edges must be
/// vertex-disjoint. Stops at the first pruning of an endpoint of each edge:
/// once one endpoint is gone the other can no longer attach to it.
bool prufer_tree_has_edges(std::span<const Vertex> code, Edge first, Edge second, std::vector<int>& degree);

}  // namespace detail

/// Every labelled tree on n vertices, in lexicographic Prüfer-code order.
/// Guard: 2 <= n <= 8 (GuardError otherwise).
class TreeRange {
 public:
  explicit TreeRange(int n);

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = LabeledTree;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    LabeledTree operator*() const { return prufer_to_tree(code_); }
    const PruferCode& code() const { return code_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(const iterator& other) const { return done_ == other.done_; }

   private:
    friend class TreeRange;
    PruferCode code_;
    int n_ = 0;
    bool done_ = true;
  };

  iterator begin() const;
  iterator end() const { return {}; }

  /// n^(n-2).
  std::uint64_t size() const;

 private:
  int n_;
};

inline TreeRange enumerate_trees(int n) { return TreeRange(n); }

/// True iff every edge of `forest` is an edge of `tree`.
bool contains_forest(const LabeledTree& tree, std::span<const Edge> forest);

/// Text format: first line `n`, then n-1 lines `u v` with u < v.
void write_tree_text(std::ostream& out, const LabeledTree& tree);
LabeledTree read_tree_text(std::istream& in);

}  // namespace treecross
