#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "treecross/crossings.hpp"
#include "treecross/rational.hpp"
#include "treecross/rng.hpp"

namespace treecross {

/// Complementary error function, W. J. Cody's rational Chebyshev
/// approximations (Math. Comp. 1969) on |x| <= 0.46875, <= 4, and beyond.
double erfc_cody(double x);

/// Standard normal distribution function. Throws std::domain_error on NaN.
double normal_cdf(double z);

/// Standardized crossing counts W = (X - mu_n) / sigma_n, sorted ascending,
/// plus the raw sample moments of X.
struct EmpiricalSummary {
  int n = 0;
  std::uint64_t sample_count = 0;
  std::vector<double> samples;
  double mean = 0.0;      // of raw X
  double variance = 0.0;  // of raw X, unbiased
};

/// Standardizes raw counts with the exact mu_n and sigma_n. n >= 5.
EmpiricalSummary summarize_counts(int n, std::span<const std::int64_t> counts);

/// sup_z |F_N(z) - Phi(z)| for the empirical CDF of summary.samples.
double empirical_kolmogorov(const EmpiricalSummary& summary);

/// Right-hand side of the bounded-size-bias Kolmogorov bound with
/// A = 4(n-3) and Psi = sqrt(2112 n).
struct BoundReport {
  int n = 0;
  double mu = 0.0;
  double sigma = 0.0;
  double a_bound = 0.0;
  double psi_bound = 0.0;
  double term1 = 0.0;  // 6 mu A^2 / sigma^3
  double term2 = 0.0;  // 2 mu Psi / sigma^2
  double total = 0.0;
};

inline constexpr double kConditionalVarianceConstant = 2112.0;

/// n >= 5.
BoundReport theoretical_bound(int n);

/// Draws `samples` uniform trees split across `threads` workers (worker k
/// seeded by derive_seed(seed, k)), counts crossings with the fast counter,
/// and standardizes. Deterministic for a fixed (seed, threads).
EmpiricalSummary simulate_standardized(int n, std::uint64_t samples, std::uint64_t seed, unsigned threads = 1);

/// Monte Carlo estimate with its binomial standard error.
struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
};

/// True iff some u in i is adjacent to some v in j.
bool indices_adjacent(const LabeledTree& tree, const CrossingIndex& i, const CrossingIndex& j);

/// P(some vertex of i is adjacent to some vertex of j) for vertex-disjoint
/// i, j. The union bound gives 16 * 2/n = 32/n.
Estimate adjacency_event_probability(int n, const CrossingIndex& i, const CrossingIndex& j, std::uint64_t samples,
                                     Rng& rng);

/// Same event, exactly, over all trees. Guard 8 <= n <= 8 (the smallest n
/// with two disjoint indices, and the enumeration limit).
Rational adjacency_event_probability_exact(int n, const CrossingIndex& i, const CrossingIndex& j);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least squares of log(distance) on log(n). At least 3 points, distances > 0.
RateFit rate_fit(std::span<const std::pair<double, double>> points);

}  // namespace treecross
