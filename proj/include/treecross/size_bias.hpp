#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "treecross/crossings.hpp"
#include "treecross/rational.hpp"
#include "treecross/rng.hpp"
#include "treecross/tree.hpp"

namespace treecross {

/// One draw of (T, I, T^s) with the crossing counts of both trees.
struct CouplingOutcome {
  LabeledTree tree;
  CrossingIndex index;
  LabeledTree biased_tree;
  std::int64_t x = 0;
  std::int64_t x_s = 0;
};

/// Exact distribution of a crossing count, as k -> P(k). Zero masses omitted.
struct SizeBiasLaw {
  int n = 0;
  std::map<std::int64_t, Rational> pmf;
};

struct WeightedTree {
  LabeledTree tree;
  Rational weight;
};

/// Largest possible |X^s - X|: two removed and two added edges, each
/// crossing at most n-3 others.
constexpr std::int64_t coupling_bound(int n) { return 4 * (static_cast<std::int64_t>(n) - 3); }

/// The equally likely results of inserting chord {u,v}. If the edge is
/// present, the tree itself. Otherwise t + {u,v} minus the first or the last
/// edge of the u-v path.
std::vector<LabeledTree> rewire_outcomes(const LabeledTree& t, Vertex u, Vertex v);

/// One draw from rewire_outcomes. Throws std::invalid_argument if u == v.
LabeledTree rewire_pair(const LabeledTree& t, Vertex u, Vertex v, Rng& rng);

/// Every tree the biased-tree construction can return for (t, j), with its
/// probability: t itself when it already crosses at j, else rewiring (a,c)
/// then (b,d). Throws InvariantError if a result lacks the crossing.
std::vector<WeightedTree> biased_tree_outcomes(const LabeledTree& t, const CrossingIndex& j);

LabeledTree construct_biased_tree(const LabeledTree& t, const CrossingIndex& j, Rng& rng);

/// T uniform, I uniform and independent of T, T^s by construction. n >= 4.
CouplingOutcome sample_coupling(int n, Rng& rng);

inline constexpr std::uint64_t kRejectionRetryCap = 10'000'000;

/// T uniform and I uniform as in sample_coupling; T^s is a fresh uniform
/// tree, redrawn until it crosses at I. Throws InvariantError after
/// `retry_cap` failed draws. Writes the number of draws to `attempts`.
CouplingOutcome rejection_size_bias_sample(int n, Rng& rng, std::uint64_t* attempts = nullptr,
                                           std::uint64_t retry_cap = kRejectionRetryCap);

/// pmf(k) = k P(X_n = k) / E[X_n] from the enumerated law of X_n.
/// Guard 4 <= n <= 7.
SizeBiasLaw size_bias_law_oracle(int n);

/// Exact law of the count of a uniform tree conditioned to cross at I, I
/// uniform: the law the rejection sampler draws from. Guard 4 <= n <= 7.
SizeBiasLaw rejection_law_exact(int n);

/// Everything exact enumeration of the constructive coupling yields.
struct CouplingEnumeration {
  SizeBiasLaw marginal;                 // law of X^s
  Rational psi_squared;                 // Var(E[X^s - X | X])
  Rational psi_squared_given_tree;      // Var(E[X^s - X | T]) >= psi_squared
  std::int64_t max_abs_diff = 0;        // over all reachable (T, I, branch)
};

/// Enumerates every tree, index and deletion branch. Guard 4 <= n <= 6.
CouplingEnumeration enumerate_coupling(int n);

/// Law of X^s under the construction. Guard 4 <= n <= 6.
SizeBiasLaw coupling_marginal_exact(int n);

/// Psi^2 = Var(E[X^s - X | X]) for the constructive coupling. Guard 4 <= n <= 6.
Rational psi_exact(int n);

Rational total_variation(const SizeBiasLaw& p, const SizeBiasLaw& q);

Rational total_mass(const SizeBiasLaw& law);

/// Expectation of f(k) under the law.
template <class F>
Rational expectation(const SizeBiasLaw& law, F&& f) {
  Rational sum = 0;
  for (const auto& [k, p] : law.pmf) sum += p * f(k);
  return sum;
}

}  // namespace treecross
