#include "treecross/crossings.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "treecross/errors.hpp"

namespace treecross {

namespace {

class Fenwick {
 public:
  explicit Fenwick(int size) : tree_(static_cast<std::size_t>(size) + 1, 0) {}

  void add(int pos) {
    for (; pos < static_cast<int>(tree_.size()); pos += pos & -pos) ++tree_[pos];
  }

  // Number of inserted positions <= pos.
  std::int64_t prefix(int pos) const {
    std::int64_t sum = 0;
    for (; pos > 0; pos -= pos & -pos) sum += tree_[pos];
    return sum;
  }

 private:
  std::vector<std::int64_t> tree_;
};

}  // namespace

CrossingIndex make_crossing_index(Vertex w, Vertex x, Vertex y, Vertex z) {
  std::array<Vertex, 4> v{w, x, y, z};
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end())
    throw std::invalid_argument("crossing index needs four distinct vertices");
  return {v[0], v[1], v[2], v[3]};
}

bool vertex_disjoint(const CrossingIndex& i, const CrossingIndex& j) {
  const std::array<Vertex, 4> vi{i.a, i.b, i.c, i.d};
  for (Vertex v : {j.a, j.b, j.c, j.d})
    if (std::find(vi.begin(), vi.end(), v) != vi.end()) return false;
  return true;
}

std::vector<CrossingIndex> all_crossing_indices(int n) {
  std::vector<CrossingIndex> out;
  for (Vertex a = 1; a <= n; ++a)
    for (Vertex b = a + 1; b <= n; ++b)
      for (Vertex c = b + 1; c <= n; ++c)
        for (Vertex d = c + 1; d <= n; ++d) out.push_back({a, b, c, d});
  return out;
}

CrossingIndex sample_crossing_index(int n, Rng& rng) {
  if (n < 4) throw GuardError("sample_crossing_index: n must be at least 4");
  // Four distinct labels drawn in sequence; sorting makes every 4-subset
  // equally likely.
  std::array<Vertex, 4> v{};
  for (std::size_t k = 0; k < v.size(); ++k) {
    Vertex x;
    do {
      x = rng.uniform_int(1, n);
    } while (std::find(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), x) != v.begin() + static_cast<std::ptrdiff_t>(k));
    v[k] = x;
  }
  return make_crossing_index(v[0], v[1], v[2], v[3]);
}

bool has_crossing_at(const LabeledTree& tree, const CrossingIndex& j) {
  return tree.has_edge(j.a, j.c) && tree.has_edge(j.b, j.d);
}

std::int64_t count_crossings_naive(const LabeledTree& tree) {
  const auto edges = tree.edges();
  std::int64_t count = 0;
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t k = i + 1; k < edges.size(); ++k)
      if (chords_cross(edges[i], edges[k])) ++count;
  return count;
}

std::int64_t count_crossings_fast(const LabeledTree& tree) {
  // Edges are sorted by left endpoint. A chord (x,y) crosses every earlier
  // chord (u,v) with u < x < v < y; chords with u == x share an endpoint, so
  // a whole group of equal left endpoints is queried before any is inserted.
  const auto edges = tree.edges();
  Fenwick rights(tree.vertex_count());
  std::int64_t count = 0;
  std::size_t group = 0;
  while (group < edges.size()) {
    std::size_t end = group;
    while (end < edges.size() && edges[end].u == edges[group].u) ++end;
    const Vertex x = edges[group].u;
    for (std::size_t k = group; k < end; ++k) count += rights.prefix(edges[k].v - 1) - rights.prefix(x);
    for (std::size_t k = group; k < end; ++k) rights.add(edges[k].v);
    group = end;
  }
  return count;
}

std::vector<CrossingIndex> list_crossings(const LabeledTree& tree) {
  const auto edges = tree.edges();
  std::vector<CrossingIndex> out;
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t k = i + 1; k < edges.size(); ++k)
      if (chords_cross(edges[i], edges[k])) out.push_back(make_crossing_index(edges[i].u, edges[i].v, edges[k].u, edges[k].v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace treecross
