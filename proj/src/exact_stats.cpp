#include "treecross/exact_stats.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "treecross/crossings.hpp"
#include "treecross/errors.hpp"

namespace treecross {

namespace {

BigInt binomial(long n, long k) {
  if (k < 0 || n < k) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

BigInt power(long base, unsigned long exponent) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), exponent);
  return out;
}

void require_enumerable(int n, const char* what) {
  if (n < 4 || n > 7)
    throw GuardError(std::string(what) + ": n must be in 4..7, got " + std::to_string(n));
}

// Vertex count of one component; throws unless the edges form a tree on
// the vertices they touch.
std::set<Vertex> component_vertices(int n, const ForestComponent& component) {
  if (component.empty()) throw std::invalid_argument("forest component has no edges");
  std::set<Vertex> vertices;
  for (const Edge& e : component) {
    if (e.u < 1 || e.v < 1 || e.u > n || e.v > n) throw std::invalid_argument("forest edge outside 1..n");
    if (e.u == e.v) throw std::invalid_argument("forest edge is a self-loop");
    vertices.insert(e.u);
    vertices.insert(e.v);
  }
  // Relabel to 1..k and reuse the spanning-tree check.
  std::vector<Vertex> labels(vertices.begin(), vertices.end());
  auto rank = [&](Vertex v) {
    return static_cast<Vertex>(std::lower_bound(labels.begin(), labels.end(), v) - labels.begin()) + 1;
  };
  std::vector<Edge> local;
  local.reserve(component.size());
  for (const Edge& e : component) local.push_back({rank(e.u), rank(e.v)});
  if (auto defect = tree_defect(static_cast<int>(labels.size()), local))
    throw std::invalid_argument("forest component is not a tree: " + *defect);
  return vertices;
}

}  // namespace

Rational forest_probability(int n, std::span<const ForestComponent> forest) {
  if (n < 1) throw GuardError("forest_probability: n must be positive");
  std::set<Vertex> seen;
  BigInt product = 1;
  unsigned long edge_total = 0;
  for (const ForestComponent& component : forest) {
    const auto vertices = component_vertices(n, component);
    for (Vertex v : vertices)
      if (!seen.insert(v).second)
        throw std::invalid_argument("forest components overlap at vertex " + std::to_string(v));
    product *= static_cast<unsigned long>(vertices.size());
    edge_total += component.size();
  }
  Rational p(product, power(n, edge_total));
  p.canonicalize();
  return p;
}

Rational edge_probability(int n) {
  if (n < 2) throw GuardError("edge_probability: n must be at least 2");
  Rational p(2, n);
  p.canonicalize();
  return p;
}

Rational exact_mean(int n) {
  if (n < 1) throw GuardError("exact_mean: n must be positive");
  if (n < 4) return 0;
  Rational mean(BigInt(n - 1) * (n - 2) * (n - 3), BigInt(6) * n);
  mean.canonicalize();
  return mean;
}

Rational exact_variance(int n) {
  if (n < 4) throw GuardError("exact_variance: n must be at least 4, got " + std::to_string(n));
  const Rational x(n);
  Rational var = x * x * x / 45 - Rational(3, 40) * x * x - Rational(17, 72) * x + Rational(35, 24) -
                 Rational(1003, 360) / x + Rational(157, 60) / (x * x) - 1 / (x * x * x);
  var.canonicalize();
  return var;
}

BigInt neighborhood_size(int n) {
  if (n < 4) throw GuardError("neighborhood_size: n must be at least 4");
  return binomial(n, 4) - binomial(n - 4, 4);
}

Rational neighborhood_size_polynomial(int n) {
  const Rational x(n);
  Rational out = Rational(2, 3) * x * x * x - 7 * x * x + Rational(79, 3) * x - 35;
  out.canonicalize();
  return out;
}

std::map<std::int64_t, std::uint64_t> crossing_count_distribution(int n) {
  require_enumerable(n, "crossing_count_distribution");
  std::map<std::int64_t, std::uint64_t> counts;
  for (const LabeledTree& tree : enumerate_trees(n)) ++counts[count_crossings_fast(tree)];
  return counts;
}

ExactMoments enumeration_moments(int n) {
  require_enumerable(n, "enumeration_moments");
  const auto counts = crossing_count_distribution(n);
  BigInt total = 0, sum = 0, sum_sq = 0;
  for (const auto& [k, c] : counts) {
    const BigInt kk(static_cast<long>(k));
    const BigInt cc(static_cast<unsigned long>(c));
    total += cc;
    sum += kk * cc;
    sum_sq += kk * kk * cc;
  }
  ExactMoments m;
  m.n = n;
  m.mean = Rational(sum, total);
  m.mean.canonicalize();
  Rational second(sum_sq, total);
  second.canonicalize();
  m.variance = second - m.mean * m.mean;
  return m;
}

Rational enumeration_containment(int n, std::span<const Edge> forest) {
  std::uint64_t hits = 0;
  const TreeRange trees(n);
  for (const LabeledTree& tree : trees)
    if (contains_forest(tree, forest)) ++hits;
  Rational p(BigInt(static_cast<unsigned long>(hits)), BigInt(static_cast<unsigned long>(trees.size())));
  p.canonicalize();
  return p;
}

}  // namespace treecross
