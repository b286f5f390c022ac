#include "treecross/tree.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "treecross/errors.hpp"

namespace treecross {

namespace {

// Union-find over 1..n, enough for one acyclicity pass.
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n) + 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

Edge make_edge(Vertex a, Vertex b) {
  if (a == b) throw std::invalid_argument("self-loop at vertex " + std::to_string(a));
  return a < b ? Edge{a, b} : Edge{b, a};
}

std::optional<std::string> tree_defect(int n, std::span<const Edge> edges) {
  if (n < 1) return "vertex count must be at least 1";
  if (static_cast<long long>(edges.size()) != n - 1)
    return "expected " + std::to_string(n - 1) + " edges, got " + std::to_string(edges.size());
  for (const Edge& e : edges) {
    if (e.u < 1 || e.v < 1 || e.u > n || e.v > n)
      return "edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "} out of range";
    if (e.u == e.v) return "self-loop at vertex " + std::to_string(e.u);
  }
  std::vector<Edge> sorted(edges.begin(), edges.end());
  for (Edge& e : sorted)
    if (e.u > e.v) std::swap(e.u, e.v);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return "duplicate edge";
  // n-1 distinct edges without a cycle span all n vertices.
  DisjointSets sets(n);
  for (const Edge& e : sorted)
    if (!sets.unite(e.u, e.v))
      return "cycle through edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
  return std::nullopt;
}

LabeledTree LabeledTree::from_edges(int n, std::vector<Edge> edges) {
  if (auto defect = tree_defect(n, edges)) throw std::invalid_argument("not a tree: " + *defect);
  for (Edge& e : edges)
    if (e.u > e.v) std::swap(e.u, e.v);
  std::sort(edges.begin(), edges.end());
  return LabeledTree(n, std::move(edges));
}

bool LabeledTree::has_edge(Vertex a, Vertex b) const {
  if (a == b) return false;
  const Edge e = a < b ? Edge{a, b} : Edge{b, a};
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

std::vector<std::vector<Vertex>> LabeledTree::adjacency() const {
  std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(n_) + 1);
  for (const Edge& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  return adj;
}

std::vector<Vertex> LabeledTree::path(Vertex from, Vertex to) const {
  if (from < 1 || to < 1 || from > n_ || to > n_) throw std::invalid_argument("path endpoint out of range");
  const auto adj = adjacency();
  std::vector<Vertex> parent(static_cast<std::size_t>(n_) + 1, 0);
  std::vector<Vertex> queue{to};
  parent[to] = to;
  for (std::size_t head = 0; head < queue.size() && parent[from] == 0; ++head) {
    const Vertex x = queue[head];
    for (Vertex y : adj[x]) {
      if (parent[y] == 0) {
        parent[y] = x;
        queue.push_back(y);
      }
    }
  }
  // Walking parents from `from` leads back to `to`.
  std::vector<Vertex> out{from};
  for (Vertex x = from; x != to;) {
    x = parent[x];
    out.push_back(x);
  }
  return out;
}

LabeledTree LabeledTree::exchange(Edge added, Edge removed) const {
  added = make_edge(added.u, added.v);
  removed = make_edge(removed.u, removed.v);
  std::vector<Edge> next;
  next.reserve(edges_.size());
  bool found = false;
  for (const Edge& e : edges_) {
    if (e == removed) {
      found = true;
      continue;
    }
    next.push_back(e);
  }
  if (!found) throw std::invalid_argument("exchange: removed edge not in tree");
  next.insert(std::lower_bound(next.begin(), next.end(), added), added);
  return from_edges(n_, std::move(next));
}

LabeledTree prufer_to_tree(std::span<const Vertex> code) {
  const int n = static_cast<int>(code.size()) + 2;
  for (Vertex x : code)
    if (x < 1 || x > n)
      throw std::invalid_argument("Prüfer symbol " + std::to_string(x) + " outside 1.." + std::to_string(n));
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) - 1);
  std::vector<int> degree;
  detail::for_each_prufer_edge(code, degree, [&](Vertex leaf, Vertex parent) {
    edges.push_back(leaf < parent ? Edge{leaf, parent} : Edge{parent, leaf});
    return true;
  });
  std::sort(edges.begin(), edges.end());
  return LabeledTree(n, std::move(edges));
}

PruferCode tree_to_prufer(const LabeledTree& tree) {
  const int n = tree.vertex_count();
  if (n < 2) throw std::invalid_argument("Prüfer code needs n >= 2");
  const auto adj = tree.adjacency();

  // Root at n; parent[v] is v's neighbour towards n.
  std::vector<Vertex> parent(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Vertex> stack{n};
  parent[n] = n;
  while (!stack.empty()) {
    const Vertex x = stack.back();
    stack.pop_back();
    for (Vertex y : adj[x]) {
      if (parent[y] == 0) {
        parent[y] = x;
        stack.push_back(y);
      }
    }
  }

  std::vector<int> degree(static_cast<std::size_t>(n) + 1, 0);
  for (Vertex v = 1; v <= n; ++v) degree[v] = static_cast<int>(adj[v].size());

  PruferCode code(static_cast<std::size_t>(n) - 2);
  Vertex ptr = 1;
  while (degree[ptr] != 1) ++ptr;
  Vertex leaf = ptr;
  for (auto& symbol : code) {
    const Vertex next = parent[leaf];
    symbol = next;
    if (--degree[next] == 1 && next < ptr) {
      leaf = next;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  return code;
}

namespace detail {

bool prufer_tree_has_edges(std::span<const Vertex> code, Edge first, Edge second, std::vector<int>& degree) {
  int pending = 2;
  bool first_open = true, second_open = true;
  // The root n is never pruned, so each edge is settled when its other
  // endpoint is pruned.
  detail::for_each_prufer_edge(code, degree, [&](Vertex leaf, Vertex parent) {
    if (first_open && (leaf == first.u || leaf == first.v)) {
      if (parent != (leaf == first.u ? first.v : first.u)) return false;
      first_open = false;
      --pending;
    } else if (second_open && (leaf == second.u || leaf == second.v)) {
      if (parent != (leaf == second.u ? second.v : second.u)) return false;
      second_open = false;
      --pending;
    }
    return pending > 0;
  });
  return pending == 0;
}

}  // namespace detail

PruferCode sample_prufer(int n, Rng& rng) {
  if (n < 2) throw GuardError("sample_prufer: n must be at least 2");
  PruferCode code(static_cast<std::size_t>(n) - 2);
  rng.fill_uniform(code, 1, n);
  return code;
}

LabeledTree sample_uniform_tree(int n, Rng& rng) { return prufer_to_tree(sample_prufer(n, rng)); }

TreeRange::TreeRange(int n) : n_(n) {
  if (n < 2 || n > 8) throw GuardError("enumerate_trees: n must be in 2..8, got " + std::to_string(n));
}

TreeRange::iterator TreeRange::begin() const {
  iterator it;
  it.n_ = n_;
  it.code_.assign(static_cast<std::size_t>(n_) - 2, 1);
  it.done_ = false;
  return it;
}

TreeRange::iterator& TreeRange::iterator::operator++() {
  // Odometer increment, last position fastest.
  for (auto pos = code_.size(); pos-- > 0;) {
    if (code_[pos] < n_) {
      ++code_[pos];
      return *this;
    }
    code_[pos] = 1;
  }
  done_ = true;
  return *this;
}

std::uint64_t TreeRange::size() const {
  std::uint64_t total = 1;
  for (int i = 0; i < n_ - 2; ++i) total *= static_cast<std::uint64_t>(n_);
  return total;
}

bool contains_forest(const LabeledTree& tree, std::span<const Edge> forest) {
  return std::all_of(forest.begin(), forest.end(),
                     [&](const Edge& e) { return tree.has_edge(e.u, e.v); });
}

void write_tree_text(std::ostream& out, const LabeledTree& tree) {
  out << tree.vertex_count() << '\n';
  for (const Edge& e : tree.edges()) out << e.u << ' ' << e.v << '\n';
}

LabeledTree read_tree_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("tree text: missing vertex count");
  int n = 0;
  {
    std::istringstream head(line);
    if (!(head >> n) || n < 2) throw std::invalid_argument("tree text: bad vertex count '" + line + "'");
  }
  std::vector<Edge> edges;
  for (int i = 0; i < n - 1; ++i) {
    if (!std::getline(in, line)) throw std::invalid_argument("tree text: expected " + std::to_string(n - 1) + " edge lines");
    std::istringstream row(line);
    Edge e;
    std::string extra;
    if (!(row >> e.u >> e.v) || (row >> extra))
      throw std::invalid_argument("tree text: bad edge line '" + line + "'");
    if (e.u >= e.v) throw std::invalid_argument("tree text: edge line must have u < v: '" + line + "'");
    edges.push_back(e);
  }
  return LabeledTree::from_edges(n, std::move(edges));
}

}  // namespace treecross
