#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "treecross/rational.hpp"
#include "treecross/tree.hpp"

namespace treecross {

/// One tree component of a forest, given by its edges.
using ForestComponent = std::vector<Edge>;

/// Probability that a uniform labelled tree on n vertices contains every
/// component: (product of component sizes) / n^(total edges). Isolated
/// vertices are implicit. Components must be vertex-disjoint trees inside
/// 1..n (std::invalid_argument otherwise).
Rational forest_probability(int n, std::span<const ForestComponent> forest);

/// P(u ~ v) for a fixed pair: 2/n. n >= 2.
Rational edge_probability(int n);

/// E[X_n] = C(n,4) * 4/n^2 = (n-1)(n-2)(n-3)/(6n); zero for n < 4.
Rational exact_mean(int n);

/// Var(X_n) as the closed-form Laurent polynomial in n. n >= 4.
Rational exact_variance(int n);

/// Number of indices sharing at least one vertex with a fixed index:
/// C(n,4) - C(n-4,4). n >= 4.
BigInt neighborhood_size(int n);

/// The cubic form (2/3)n^3 - 7n^2 + (79/3)n - 35 of neighborhood_size.
Rational neighborhood_size_polynomial(int n);

struct ExactMoments {
  int n = 0;
  Rational mean;
  Rational variance;
};

/// Number of trees on n vertices with exactly k crossings, for every k that
/// occurs. Full enumeration; guard 4 <= n <= 7.
std::map<std::int64_t, std::uint64_t> crossing_count_distribution(int n);

/// Exact mean and variance of X_n over all n^(n-2) trees. Guard 4 <= n <= 7.
ExactMoments enumeration_moments(int n);

/// Fraction of all trees on n vertices containing every edge of `forest`.
/// Guard 2 <= n <= 8.
Rational enumeration_containment(int n, std::span<const Edge> forest);

}  // namespace treecross
