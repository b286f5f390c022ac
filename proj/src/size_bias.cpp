#include "treecross/size_bias.hpp"

#include <stdexcept>
#include <string>

#include "treecross/errors.hpp"
#include "treecross/exact_stats.hpp"

namespace treecross {

namespace {

void require_range(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi)
    throw GuardError(std::string(what) + ": n must be in " + std::to_string(lo) + ".." + std::to_string(hi) +
                     ", got " + std::to_string(n));
}

SizeBiasLaw normalized_law(int n, const std::map<std::int64_t, Rational>& mass) {
  SizeBiasLaw law;
  law.n = n;
  for (const auto& [k, p] : mass)
    if (p != 0) law.pmf[k] = p;
  return law;
}

}  // namespace

std::vector<LabeledTree> rewire_outcomes(const LabeledTree& t, Vertex u, Vertex v) {
  if (u == v) throw std::invalid_argument("rewire_pair: u and v must differ");
  const int n = t.vertex_count();
  if (u < 1 || v < 1 || u > n || v > n) throw std::invalid_argument("rewire_pair: vertex out of range");
  if (t.has_edge(u, v)) return {t};
  const auto path = t.path(u, v);
  const auto last = path.size() - 1;
  const Edge chord = make_edge(u, v);
  return {t.exchange(chord, make_edge(path[0], path[1])),
          t.exchange(chord, make_edge(path[last - 1], path[last]))};
}

LabeledTree rewire_pair(const LabeledTree& t, Vertex u, Vertex v, Rng& rng) {
  auto outcomes = rewire_outcomes(t, u, v);
  if (outcomes.size() == 1) return std::move(outcomes.front());
  return std::move(outcomes[rng.coin() ? 1 : 0]);
}

std::vector<WeightedTree> biased_tree_outcomes(const LabeledTree& t, const CrossingIndex& j) {
  if (j.d > t.vertex_count()) throw std::invalid_argument("crossing index outside the tree");
  if (has_crossing_at(t, j)) return {{t, Rational(1)}};
  std::vector<WeightedTree> out;
  const auto first = rewire_outcomes(t, j.a, j.c);
  for (const LabeledTree& mid : first) {
    const auto second = rewire_outcomes(mid, j.b, j.d);
    Rational w(1, static_cast<long>(first.size() * second.size()));
    w.canonicalize();
    for (const LabeledTree& result : second) {
      // The (b,d) step only deletes edges touching b or d, so {a,c} survives.
      if (!has_crossing_at(result, j)) throw InvariantError("biased tree lost the crossing at the chosen index");
      out.push_back({result, w});
    }
  }
  return out;
}

LabeledTree construct_biased_tree(const LabeledTree& t, const CrossingIndex& j, Rng& rng) {
  if (j.d > t.vertex_count()) throw std::invalid_argument("crossing index outside the tree");
  if (has_crossing_at(t, j)) return t;
  LabeledTree result = rewire_pair(rewire_pair(t, j.a, j.c, rng), j.b, j.d, rng);
  if (!has_crossing_at(result, j)) throw InvariantError("biased tree lost the crossing at the chosen index");
  return result;
}

CouplingOutcome sample_coupling(int n, Rng& rng) {
  if (n < 4) throw GuardError("sample_coupling: n must be at least 4");
  LabeledTree tree = sample_uniform_tree(n, rng);
  const CrossingIndex index = sample_crossing_index(n, rng);
  LabeledTree biased = construct_biased_tree(tree, index, rng);
  const auto x = count_crossings_fast(tree);
  const auto x_s = count_crossings_fast(biased);
  return {std::move(tree), index, std::move(biased), x, x_s};
}

CouplingOutcome rejection_size_bias_sample(int n, Rng& rng, std::uint64_t* attempts, std::uint64_t retry_cap) {
  if (n < 4) throw GuardError("rejection_size_bias_sample: n must be at least 4");
  LabeledTree tree = sample_uniform_tree(n, rng);
  const CrossingIndex index = sample_crossing_index(n, rng);
  const Edge first{index.a, index.c};
  const Edge second{index.b, index.d};

  std::vector<int> scratch;
  PruferCode code(static_cast<std::size_t>(n) - 2);
  for (std::uint64_t draw = 1; draw <= retry_cap; ++draw) {
    rng.fill_uniform(code, 1, n);
    if (detail::prufer_tree_has_edges(code, first, second, scratch)) {
      if (attempts) *attempts = draw;
      LabeledTree biased = prufer_to_tree(code);
      const auto x = count_crossings_fast(tree);
      const auto x_s = count_crossings_fast(biased);
      return {std::move(tree), index, std::move(biased), x, x_s};
    }
  }
  throw InvariantError("rejection sampler hit its retry cap of " + std::to_string(retry_cap) + " draws");
}

SizeBiasLaw size_bias_law_oracle(int n) {
  require_range(n, 4, 7, "size_bias_law_oracle");
  const auto counts = crossing_count_distribution(n);
  BigInt weighted_total = 0;
  for (const auto& [k, c] : counts) weighted_total += BigInt(static_cast<long>(k)) * static_cast<unsigned long>(c);
  std::map<std::int64_t, Rational> mass;
  for (const auto& [k, c] : counts) {
    Rational p(BigInt(static_cast<long>(k)) * static_cast<unsigned long>(c), weighted_total);
    p.canonicalize();
    mass[k] = p;
  }
  return normalized_law(n, mass);
}

SizeBiasLaw rejection_law_exact(int n) {
  require_range(n, 4, 7, "rejection_law_exact");
  // For each index, the histogram of X over the trees crossing there.
  std::map<CrossingIndex, std::map<std::int64_t, std::uint64_t>> conditional;
  for (const LabeledTree& tree : enumerate_trees(n)) {
    const auto crossings = list_crossings(tree);
    const auto x = static_cast<std::int64_t>(crossings.size());
    for (const CrossingIndex& j : crossings) ++conditional[j][x];
  }
  const auto indices = all_crossing_indices(n);
  std::map<std::int64_t, Rational> mass;
  for (const CrossingIndex& j : indices) {
    const auto& hist = conditional.at(j);
    std::uint64_t hits = 0;
    for (const auto& [x, c] : hist) hits += c;
    for (const auto& [x, c] : hist) {
      Rational p(BigInt(static_cast<unsigned long>(c)), BigInt(static_cast<unsigned long>(hits)) * static_cast<unsigned long>(indices.size()));
      p.canonicalize();
      mass[x] += p;
    }
  }
  return normalized_law(n, mass);
}

CouplingEnumeration enumerate_coupling(int n) {
  require_range(n, 4, 6, "enumerate_coupling");
  const auto indices = all_crossing_indices(n);
  const TreeRange trees(n);
  const Rational tree_weight(1, static_cast<long>(trees.size()));
  const Rational index_weight(1, static_cast<long>(indices.size()));

  CouplingEnumeration out;
  std::map<std::int64_t, Rational> mass;
  // Per X-value: number of trees and the sum of E[D | T] over them.
  std::map<std::int64_t, std::pair<std::uint64_t, Rational>> by_count;
  Rational sum_sq_given_tree = 0;
  Rational mean_diff = 0;

  for (const LabeledTree& tree : trees) {
    const auto x = count_crossings_fast(tree);
    Rational conditional_diff = 0;  // E[X^s - X | T]
    for (const CrossingIndex& j : indices) {
      for (const WeightedTree& w : biased_tree_outcomes(tree, j)) {
        const auto x_s = count_crossings_fast(w.tree);
        const auto diff = x_s - x;
        out.max_abs_diff = std::max(out.max_abs_diff, diff < 0 ? -diff : diff);
        const Rational p = index_weight * w.weight;
        mass[x_s] += tree_weight * p;
        conditional_diff += p * static_cast<long>(diff);
      }
    }
    auto& slot = by_count[x];
    slot.first += 1;
    slot.second += conditional_diff;
    sum_sq_given_tree += tree_weight * conditional_diff * conditional_diff;
    mean_diff += tree_weight * conditional_diff;
  }

  Rational sum_sq_given_count = 0;
  for (const auto& [x, slot] : by_count) {
    const Rational cond = slot.second / static_cast<unsigned long>(slot.first);
    sum_sq_given_count += tree_weight * static_cast<unsigned long>(slot.first) * cond * cond;
  }
  out.marginal = normalized_law(n, mass);
  out.psi_squared = sum_sq_given_count - mean_diff * mean_diff;
  out.psi_squared_given_tree = sum_sq_given_tree - mean_diff * mean_diff;
  if (out.psi_squared > out.psi_squared_given_tree)
    throw InvariantError("Var(E[D|X]) exceeds Var(E[D|T])");
  return out;
}

SizeBiasLaw coupling_marginal_exact(int n) { return enumerate_coupling(n).marginal; }

Rational psi_exact(int n) { return enumerate_coupling(n).psi_squared; }

Rational total_variation(const SizeBiasLaw& p, const SizeBiasLaw& q) {
  std::map<std::int64_t, Rational> diff = p.pmf;
  for (const auto& [k, mass] : q.pmf) diff[k] -= mass;
  Rational sum = 0;
  for (const auto& [k, d] : diff) sum += abs(d);
  return sum / 2;
}

Rational total_mass(const SizeBiasLaw& law) {
  Rational sum = 0;
  for (const auto& [k, p] : law.pmf) sum += p;
  return sum;
}

}  // namespace treecross
