#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "normal_oracle.hpp"
#include "treecross/errors.hpp"
#include "treecross/exact_stats.hpp"
#include "treecross/normal_approx.hpp"

using namespace treecross;

namespace {

EmpiricalSummary summary_of(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  EmpiricalSummary s;
  s.n = 5;
  s.sample_count = samples.size();
  s.samples = std::move(samples);
  return s;
}

// sup |F_N - Phi| evaluated at every sample point from both sides and on a
// fine grid in between, with the empirical CDF recounted from scratch.
double kolmogorov_brute_force(const std::vector<double>& samples) {
  const double count = static_cast<double>(samples.size());
  auto ecdf = [&](double z, bool inclusive) {
    std::size_t below = 0;
    for (double s : samples) below += inclusive ? s <= z : s < z;
    return static_cast<double>(below) / count;
  };
  double best = 0;
  for (double s : samples) {
    const double phi = normal_cdf_reference(s);
    best = std::max({best, std::abs(ecdf(s, true) - phi), std::abs(ecdf(s, false) - phi)});
  }
  for (double z = -6; z <= 6; z += 0.001) best = std::max(best, std::abs(ecdf(z, true) - normal_cdf_reference(z)));
  return best;
}

}  // namespace

TEST_CASE("normal_cdf matches the 256-bit reference on [-8, 8]") {
  const int points = 10000;
  double worst = 0;
  for (int i = 0; i < points; ++i) {
    const double z = -8.0 + 16.0 * i / (points - 1);
    worst = std::max(worst, std::abs(normal_cdf(z) - normal_cdf_reference(z)));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("normal_cdf fixed values and shape") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(normal_cdf(1.959963985) - 0.975) < 1e-7);
  CHECK(normal_cdf(-8.0) < 1e-14);
  CHECK(normal_cdf(-8.0) > 0.0);
  CHECK(normal_cdf(40.0) == 1.0);
  CHECK(normal_cdf(-40.0) == 0.0);
  CHECK_THROWS_AS(normal_cdf(std::numeric_limits<double>::quiet_NaN()), std::domain_error);

  double previous = 0;
  for (double z = -10; z <= 10; z += 0.01) {
    const double phi = normal_cdf(z);
    CHECK(std::abs(phi + normal_cdf(-z) - 1.0) <= 1e-12);
    CHECK(phi >= previous);
    previous = phi;
  }
}

TEST_CASE("erfc_cody relative accuracy") {
  for (double x = 0.25; x < 26; x += 0.25) {
    CAPTURE(x);
    CHECK(std::abs(erfc_cody(x) / erfc_reference(x) - 1.0) < 1e-13);
    CHECK(std::abs(erfc_cody(-x) - (2.0 - erfc_reference(x))) < 1e-15);
  }
}

TEST_CASE("empirical_kolmogorov on fixed samples") {
  CHECK(empirical_kolmogorov(summary_of({0.0})) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(empirical_kolmogorov(summary_of({3.0, 3.0, 3.0})) == doctest::Approx(normal_cdf(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(empirical_kolmogorov(summary_of({})), std::invalid_argument);

  std::vector<double> values{0.3, -1.2, 2.2, 0.0, -0.4, 1.1, 0.9};
  const double sorted_ks = empirical_kolmogorov(summary_of(values));
  EmpiricalSummary unsorted;
  unsorted.samples = values;
  CHECK(empirical_kolmogorov(unsorted) == sorted_ks);
  std::reverse(values.begin(), values.end());
  CHECK(empirical_kolmogorov(summary_of(values)) == sorted_ks);
}

TEST_CASE("empirical_kolmogorov agrees with a brute-force search") {
  std::mt19937_64 engine(123);
  std::normal_distribution<double> skewed(0.3, 1.4);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> samples(100);
    for (double& s : samples) s = std::round(skewed(engine) * 4) / 4;  // ties included
    const double fast = empirical_kolmogorov(summary_of(samples));
    CHECK(std::abs(fast - kolmogorov_brute_force(samples)) < 1e-9);
  }
}

TEST_CASE("empirical_kolmogorov is small for normal samples") {
  std::mt19937_64 engine(321);
  std::normal_distribution<double> normal;
  std::vector<double> samples(100000);
  for (double& s : samples) s = normal(engine);
  CHECK(empirical_kolmogorov(summary_of(samples)) < 0.01);
}

TEST_CASE("theoretical bound, n = 10, from first principles") {
  const double n = 10;
  const double mu = 9.0 * 8.0 * 7.0 / 60.0;
  const double var = n * n * n / 45 - 3.0 / 40 * n * n - 17.0 / 72 * n + 35.0 / 24 - 1003.0 / 360 / n +
                     157.0 / 60 / (n * n) - 1 / (n * n * n);
  const double a = 28;
  const double psi = std::sqrt(2112.0 * 10);
  const double term1 = 6 * mu * a * a / std::pow(var, 1.5);
  const double term2 = 2 * mu * psi / var;

  const auto r = theoretical_bound(10);
  CHECK(r.mu == doctest::Approx(mu).epsilon(1e-12));
  CHECK(r.sigma * r.sigma == doctest::Approx(var).epsilon(1e-12));
  CHECK(r.a_bound == a);
  CHECK(r.term1 == doctest::Approx(term1).epsilon(1e-12));
  CHECK(r.term2 == doctest::Approx(term2).epsilon(1e-12));
  CHECK(r.total == doctest::Approx(term1 + term2).epsilon(1e-12));
  CHECK_THROWS_AS(theoretical_bound(4), GuardError);
}

TEST_CASE("theoretical bound decays like 1/sqrt(n)") {
  const double limit = 16 * std::pow(45.0, 1.5) + 15 * std::sqrt(2112.0);
  const auto far = theoretical_bound(100000);
  CHECK(std::abs(std::sqrt(100000.0) * far.total / limit - 1.0) < 0.1);
  double previous = std::numeric_limits<double>::infinity();
  for (int n = 100; n <= 100000; n = n * 3 / 2) {
    const auto r = theoretical_bound(n);
    CHECK(r.term1 > 0);
    CHECK(r.term2 > 0);
    CHECK(r.total < previous);
    previous = r.total;
  }
}

TEST_CASE("simulated moments at n = 100") {
  const int n = 100;
  const std::uint64_t samples = 100000;
  const auto s = simulate_standardized(n, samples, 77);
  const double mu = to_double(exact_mean(n));
  const double var = to_double(exact_variance(n));
  CHECK(s.sample_count == samples);
  CHECK(std::abs(s.mean - mu) <= 4 * std::sqrt(var / samples));
  CHECK(std::abs(s.variance / var - 1) <= 0.1);
  CHECK(std::is_sorted(s.samples.begin(), s.samples.end()));
}

TEST_CASE("simulation is deterministic for a fixed seed and thread count") {
  const auto first = simulate_standardized(30, 2000, 5, 2);
  const auto second = simulate_standardized(30, 2000, 5, 2);
  CHECK(first.samples == second.samples);
  const auto other = simulate_standardized(30, 2000, 6, 2);
  CHECK(first.samples != other.samples);
  CHECK_THROWS_AS(simulate_standardized(4, 10, 1), GuardError);
}

TEST_CASE("summarize_counts standardizes with the exact moments") {
  const std::vector<std::int64_t> counts{10, 20, 30};
  const auto s = summarize_counts(10, counts);
  const double mu = 8.4;
  const double sigma = std::sqrt(to_double(exact_variance(10)));
  CHECK(s.samples[0] == doctest::Approx((10 - mu) / sigma));
  CHECK(s.mean == doctest::Approx(20));
  CHECK(s.variance == doctest::Approx(100));
}

TEST_CASE("adjacency event") {
  Rng rng(13);
  const CrossingIndex i{1, 2, 3, 4}, j{5, 6, 7, 8};
  const auto small = adjacency_event_probability(20, i, j, 20000, rng);
  CHECK(small.value <= 1.0);
  CHECK(small.value > 0.0);

  const auto large = adjacency_event_probability(200, i, j, 20000, rng);
  CHECK(large.value <= 32.0 / 200 + 3 * large.standard_error);

  // With n = 8 the two indices cover every vertex, so a spanning tree must
  // join them.
  CHECK(adjacency_event_probability_exact(8, i, j) == 1);
  CHECK(adjacency_event_probability_exact(8, {1, 3, 5, 7}, {2, 4, 6, 8}) == 1);

  CHECK_THROWS_AS(adjacency_event_probability(20, i, {4, 5, 6, 7}, 10, rng), std::invalid_argument);
  CHECK_THROWS_AS(adjacency_event_probability_exact(8, i, {4, 5, 6, 7}), std::invalid_argument);
  CHECK_THROWS_AS(adjacency_event_probability_exact(9, i, j), GuardError);
}

TEST_CASE("indices_adjacent") {
  const auto t = LabeledTree::from_edges(8, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}});
  CHECK(indices_adjacent(t, {1, 2, 3, 4}, {5, 6, 7, 8}));
  CHECK(indices_adjacent(t, {1, 2, 3, 8}, {4, 5, 6, 7}));
  const auto star = LabeledTree::from_edges(9, {{9, 1}, {9, 2}, {9, 3}, {9, 4}, {9, 5}, {9, 6}, {9, 7}, {9, 8}});
  CHECK_FALSE(indices_adjacent(star, {1, 2, 3, 4}, {5, 6, 7, 8}));
}

TEST_CASE("rate_fit recovers synthetic slopes") {
  for (double slope : {-0.5, -1.0}) {
    std::vector<std::pair<double, double>> points;
    for (double n : {50.0, 100.0, 200.0, 400.0, 800.0}) points.emplace_back(n, 3.0 * std::pow(n, slope));
    const auto fit = rate_fit(points);
    CHECK(fit.slope == doctest::Approx(slope).epsilon(1e-12));
    CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-12));
  }
  const std::vector<std::pair<double, double>> two{{1, 1}, {2, 1}};
  CHECK_THROWS_AS(rate_fit(two), std::invalid_argument);
  const std::vector<std::pair<double, double>> zero{{1, 1}, {2, 0}, {3, 1}};
  CHECK_THROWS_AS(rate_fit(zero), std::invalid_argument);
  const std::vector<std::pair<double, double>> flat{{2, 1}, {2, 2}, {2, 3}};
  CHECK_THROWS_AS(rate_fit(flat), std::invalid_argument);
}
