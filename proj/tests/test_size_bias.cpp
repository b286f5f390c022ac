#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "treecross/errors.hpp"
#include "treecross/exact_stats.hpp"
#include "treecross/size_bias.hpp"

using namespace treecross;

namespace {

LabeledTree path_tree(int n) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.push_back({v, v + 1});
  return LabeledTree::from_edges(n, edges);
}

std::size_t edges_not_in(const LabeledTree& t, const LabeledTree& other) {
  return static_cast<std::size_t>(std::count_if(t.edges().begin(), t.edges().end(),
                                                 [&](const Edge& e) { return !other.has_edge(e.u, e.v); }));
}

Rational ratio(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

// Law of X from the enumerated distribution, as a SizeBiasLaw.
SizeBiasLaw law_of_x(int n) {
  const auto counts = crossing_count_distribution(n);
  std::uint64_t total = 0;
  for (const auto& [k, c] : counts) total += c;
  SizeBiasLaw law;
  law.n = n;
  for (const auto& [k, c] : counts) law.pmf[k] = ratio(static_cast<long>(c), static_cast<long>(total));
  return law;
}

// Empirical TV distance between sampled values and an exact law.
double empirical_tv(const std::map<std::int64_t, std::uint64_t>& hist, std::uint64_t samples, const SizeBiasLaw& law) {
  std::set<std::int64_t> support;
  for (const auto& [k, c] : hist) support.insert(k);
  for (const auto& [k, p] : law.pmf) support.insert(k);
  double tv = 0;
  for (auto k : support) {
    const auto it = hist.find(k);
    const double freq = it == hist.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(samples);
    const auto jt = law.pmf.find(k);
    const double p = jt == law.pmf.end() ? 0.0 : to_double(jt->second);
    tv += std::abs(freq - p);
  }
  return tv / 2;
}

}  // namespace

TEST_CASE("rewire_pair keeps an existing edge") {
  const auto t = path_tree(5);
  Rng rng(1);
  CHECK(rewire_pair(t, 2, 3, rng) == t);
  CHECK(rewire_outcomes(t, 3, 2).size() == 1);
  CHECK_THROWS_AS(rewire_pair(t, 2, 2, rng), std::invalid_argument);
  CHECK_THROWS_AS(rewire_pair(t, 0, 2, rng), std::invalid_argument);
}

TEST_CASE("rewire_pair removes the first or last path edge with equal odds") {
  const auto t = path_tree(5);
  const auto first = t.exchange({1, 4}, {1, 2});
  const auto last = t.exchange({1, 4}, {3, 4});
  const auto outcomes = rewire_outcomes(t, 1, 4);
  REQUIRE(outcomes.size() == 2);
  CHECK(outcomes[0] == first);
  CHECK(outcomes[1] == last);

  Rng rng(2);
  int hits_first = 0;
  const int runs = 10000;
  for (int i = 0; i < runs; ++i) {
    const auto r = rewire_pair(t, 1, 4, rng);
    REQUIRE((r == first || r == last));
    hits_first += r == first;
  }
  CHECK(std::abs(hits_first / double(runs) - 0.5) <= 0.02);
}

TEST_CASE("construction on the path 1-2-3-4 always ends with one crossing") {
  const auto t = path_tree(4);
  const CrossingIndex j{1, 2, 3, 4};
  const auto outcomes = biased_tree_outcomes(t, j);
  CHECK(outcomes.size() == 4);
  Rational mass = 0;
  for (const auto& w : outcomes) {
    CHECK(w.weight == ratio(1, 4));
    CHECK(has_crossing_at(w.tree, j));
    CHECK(count_crossings_fast(w.tree) == 1);
    mass += w.weight;
  }
  CHECK(mass == 1);

  Rng rng(3);
  for (int i = 0; i < 100; ++i) CHECK(count_crossings_fast(construct_biased_tree(t, j, rng)) == 1);
}

TEST_CASE("a tree already crossing at the index is returned unchanged") {
  const auto t = LabeledTree::from_edges(5, {{1, 3}, {2, 4}, {3, 5}, {4, 5}});
  Rng rng(4);
  CHECK(construct_biased_tree(t, {1, 2, 3, 4}, rng) == t);
  CHECK(biased_tree_outcomes(t, {1, 2, 3, 4}).size() == 1);
}

TEST_CASE("construction outcomes are valid distributions, every tree and index for n <= 5") {
  for (int n = 4; n <= 5; ++n) {
    for (const auto& t : enumerate_trees(n)) {
      for (const auto& j : all_crossing_indices(n)) {
        Rational mass = 0;
        for (const auto& w : biased_tree_outcomes(t, j)) {
          REQUIRE_FALSE(tree_defect(n, w.tree.edges()).has_value());
          REQUIRE(has_crossing_at(w.tree, j));
          REQUIRE(w.weight > 0);
          mass += w.weight;
        }
        REQUIRE(mass == 1);
      }
    }
  }
}

TEST_CASE("sampled couplings on n = 40 satisfy the structural invariants") {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const auto c = sample_coupling(40, rng);
    REQUIRE_FALSE(tree_defect(40, c.biased_tree.edges()).has_value());
    REQUIRE(has_crossing_at(c.biased_tree, c.index));
    REQUIRE(edges_not_in(c.biased_tree, c.tree) <= 2);
    REQUIRE(c.x == count_crossings_naive(c.tree));
    REQUIRE(c.x_s == count_crossings_naive(c.biased_tree));
    REQUIRE(c.x_s >= 1);
  }
}

TEST_CASE("constructive coupling difference stays within 4(n-3)") {
  Rng rng(6);
  for (int n = 4; n <= 100; ++n) {
    for (int i = 0; i < 200; ++i) {
      const auto c = sample_coupling(n, rng);
      REQUIRE(std::abs(c.x_s - c.x) <= coupling_bound(n));
    }
  }
  CHECK(coupling_bound(10) == 28);
  CHECK_THROWS_AS(sample_coupling(3, rng), GuardError);
}

TEST_CASE("n = 4: the size-biased count is always 1") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    CHECK(sample_coupling(4, rng).x_s == 1);
    CHECK(rejection_size_bias_sample(4, rng).x_s == 1);
  }
  const auto oracle = size_bias_law_oracle(4);
  CHECK(oracle.pmf == std::map<std::int64_t, Rational>{{1, 1}});
  CHECK(rejection_law_exact(4).pmf == oracle.pmf);
}

TEST_CASE("size-bias oracle is a probability law with mean E[X^2]/E[X]") {
  for (int n = 4; n <= 7; ++n) {
    const auto oracle = size_bias_law_oracle(n);
    const auto x_law = law_of_x(n);
    CHECK(total_mass(oracle) == 1);
    const Rational second = expectation(x_law, [](std::int64_t k) { return Rational(k * k); });
    const Rational first = expectation(x_law, [](std::int64_t k) { return Rational(k); });
    CHECK(expectation(oracle, [](std::int64_t k) { return Rational(k); }) == second / first);
    CHECK(first == exact_mean(n));
  }
}

TEST_CASE("rejection law satisfies E[X f(X)] = mu E[f(X^s)]") {
  for (int n = 4; n <= 7; ++n) {
    const auto x_law = law_of_x(n);
    const auto biased = rejection_law_exact(n);
    const Rational mu = exact_mean(n);
    std::vector<std::function<Rational(std::int64_t)>> tests{
        [](std::int64_t) { return Rational(1); },
        [](std::int64_t k) { return Rational(k); },
        [](std::int64_t k) { return Rational(k * k); },
    };
    for (std::int64_t level = 0; level <= 6; ++level)
      tests.push_back([level](std::int64_t k) { return Rational(k == level ? 1 : 0); });
    for (const auto& f : tests) {
      const Rational lhs = expectation(x_law, [&](std::int64_t k) -> Rational { return Rational(k) * f(k); });
      CHECK(lhs == mu * expectation(biased, f));
    }
    CHECK(total_variation(biased, size_bias_law_oracle(n)) == 0);
  }
}

TEST_CASE("constructive coupling marginal is exactly size-biased for n = 4..6") {
  for (int n = 4; n <= 6; ++n) {
    CAPTURE(n);
    CHECK(total_variation(coupling_marginal_exact(n), size_bias_law_oracle(n)) == 0);
  }
  CHECK_THROWS_AS(coupling_marginal_exact(7), GuardError);
}

TEST_CASE("rejection sampler at n = 5 matches the oracle") {
  Rng rng(8);
  const std::uint64_t samples = 100000;
  std::map<std::int64_t, std::uint64_t> hist;
  std::uint64_t attempts_total = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    std::uint64_t attempts = 0;
    const auto c = rejection_size_bias_sample(5, rng, &attempts);
    REQUIRE(has_crossing_at(c.biased_tree, c.index));
    attempts_total += attempts;
    ++hist[c.x_s];
  }
  CHECK(empirical_tv(hist, samples, size_bias_law_oracle(5)) <= 0.01);

  // Draws per sample are geometric with success probability 4/n^2.
  const double p = 4.0 / 25.0;
  const double mean_attempts = static_cast<double>(attempts_total) / static_cast<double>(samples);
  const double se = std::sqrt((1 - p) / (p * p) / static_cast<double>(samples));
  CHECK(std::abs(mean_attempts - 1 / p) <= 3 * se);
}

TEST_CASE("rejection acceptance rate at n = 12") {
  Rng rng(9);
  const std::uint64_t samples = 5000;
  std::uint64_t attempts_total = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    std::uint64_t attempts = 0;
    rejection_size_bias_sample(12, rng, &attempts);
    attempts_total += attempts;
  }
  const double p = 4.0 / 144.0;
  const double rate = static_cast<double>(samples) / static_cast<double>(attempts_total);
  // Delta method: SE(rate) ~ p * sqrt((1 - p) / samples).
  CHECK(std::abs(rate - p) <= 3 * p * std::sqrt((1 - p) / static_cast<double>(samples)));
}

TEST_CASE("rejection sampler reports a retry-cap failure") {
  Rng rng(10);
  CHECK_THROWS_AS(rejection_size_bias_sample(300, rng, nullptr, 1), InvariantError);
  CHECK_THROWS_AS(rejection_size_bias_sample(3, rng), GuardError);
}

TEST_CASE("crossings at vertex-disjoint indices are independent at n = 8") {
  const int n = 8;
  const CrossingIndex i{1, 3, 5, 7}, j{2, 4, 6, 8};
  REQUIRE(vertex_disjoint(i, j));
  const std::vector<Edge> yi{{i.a, i.c}, {i.b, i.d}};
  const std::vector<Edge> yj{{j.a, j.c}, {j.b, j.d}};
  std::vector<Edge> both = yi;
  both.insert(both.end(), yj.begin(), yj.end());
  const Rational pi = enumeration_containment(n, yi);
  const Rational pj = enumeration_containment(n, yj);
  CHECK(pi == ratio(4, n * n));
  CHECK(enumeration_containment(n, both) / pi == pj);

  // Sharing a vertex breaks independence.
  const CrossingIndex k{1, 2, 4, 6};
  const std::vector<Edge> yk{{k.a, k.c}, {k.b, k.d}};
  std::vector<Edge> overlap = yi;
  overlap.insert(overlap.end(), yk.begin(), yk.end());
  CHECK(enumeration_containment(n, overlap) != pi * enumeration_containment(n, yk));
}

TEST_CASE("Psi squared, exact") {
  CHECK(psi_exact(4) == ratio(3, 16));
  const auto five = enumerate_coupling(5);
  CHECK(five.psi_squared == ratio(6143, 27500));
  CHECK(five.psi_squared_given_tree == ratio(3311, 12500));
  for (int n = 4; n <= 6; ++n) {
    const auto e = enumerate_coupling(n);
    CHECK(e.psi_squared <= e.psi_squared_given_tree);
    CHECK(e.psi_squared <= Rational(2112 * n));
    CHECK(e.max_abs_diff <= coupling_bound(n));
  }
  CHECK_THROWS_AS(psi_exact(7), GuardError);
}

TEST_CASE("total_variation") {
  SizeBiasLaw p{5, {{1, ratio(1, 2)}, {2, ratio(1, 2)}}};
  SizeBiasLaw q{5, {{2, ratio(1, 4)}, {3, ratio(3, 4)}}};
  CHECK(total_variation(p, p) == 0);
  CHECK(total_variation(p, q) == ratio(3, 4));
  CHECK(total_variation(q, p) == ratio(3, 4));
}
