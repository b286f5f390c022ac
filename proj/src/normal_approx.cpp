#include "treecross/normal_approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "treecross/errors.hpp"
#include "treecross/exact_stats.hpp"
#include "treecross/parallel.hpp"
#include "treecross/tree.hpp"

namespace treecross {

double erfc_cody(double x) {
  static constexpr double a[5] = {3.16112374387056560e00, 1.13864154151050156e02, 3.77485237685302021e02,
                                  3.20937758913846947e03, 1.85777706184603153e-1};
  static constexpr double b[4] = {2.36012909523441209e01, 2.44024637934444173e02, 1.28261652607737228e03,
                                  2.84423683343917062e03};
  static constexpr double c[9] = {5.64188496988670089e-1, 8.88314979438837594e00, 6.61191906371416295e01,
                                  2.98635138197400131e02, 8.81952221241769090e02, 1.71204761263407058e03,
                                  2.05107837782607147e03, 1.23033935479799725e03, 2.15311535474403846e-8};
  static constexpr double d[8] = {1.57449261107098347e01, 1.17693950891312499e02, 5.37181101862009858e02,
                                  1.62138957456669019e03, 3.29079923573345963e03, 4.36261909014324716e03,
                                  3.43936767414372164e03, 1.23033935480374942e03};
  static constexpr double p[6] = {3.05326634961232344e-1, 3.60344899949804439e-1, 1.25781726111229246e-1,
                                  1.60837851487422766e-2, 6.58749161529837803e-4, 1.63153871373020978e-2};
  static constexpr double q[5] = {2.56852019228982242e00, 1.87295284992346047e00, 5.27905102951428412e-1,
                                  6.05183413124413191e-2, 2.33520497626869185e-3};
  static constexpr double inv_sqrt_pi = 5.6418958354775628695e-1;
  static constexpr double xsmall = 1.11e-16;
  static constexpr double xbig = 26.543;

  const double y = std::fabs(x);
  double result;
  if (y <= 0.46875) {
    const double ysq = y > xsmall ? y * y : 0.0;
    double num = a[4] * ysq;
    double den = ysq;
    for (int i = 0; i < 3; ++i) {
      num = (num + a[i]) * ysq;
      den = (den + b[i]) * ysq;
    }
    // Small |x|: erfc = 1 - erf directly, sign included.
    return 1.0 - x * (num + a[3]) / (den + b[3]);
  }
  if (y <= 4.0) {
    double num = c[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + c[i]) * y;
      den = (den + d[i]) * y;
    }
    result = (num + c[7]) / (den + d[7]);
  } else if (y >= xbig) {
    result = 0.0;
  } else {
    const double ysq = 1.0 / (y * y);
    double num = p[5] * ysq;
    double den = ysq;
    for (int i = 0; i < 4; ++i) {
      num = (num + p[i]) * ysq;
      den = (den + q[i]) * ysq;
    }
    result = ysq * (num + p[4]) / (den + q[4]);
    result = (inv_sqrt_pi - result) / y;
  }
  if (result != 0.0) {
    // exp(-y^2) split so that the leading part is exact in binary.
    const double head = std::trunc(y * 16.0) / 16.0;
    const double del = (y - head) * (y + head);
    result = std::exp(-head * head) * std::exp(-del) * result;
  }
  return x < 0.0 ? 2.0 - result : result;
}

double normal_cdf(double z) {
  if (std::isnan(z)) throw std::domain_error("normal_cdf: NaN input");
  return 0.5 * erfc_cody(-z * 0.70710678118654752440);
}

EmpiricalSummary summarize_counts(int n, std::span<const std::int64_t> counts) {
  if (n < 5) throw GuardError("summarize_counts: n must be at least 5");
  if (counts.empty()) throw std::invalid_argument("summarize_counts: no samples");
  const double mu = to_double(exact_mean(n));
  const double sigma = std::sqrt(to_double(exact_variance(n)));

  EmpiricalSummary s;
  s.n = n;
  s.sample_count = counts.size();
  s.samples.reserve(counts.size());
  double sum = 0.0;
  for (auto x : counts) {
    sum += static_cast<double>(x);
    s.samples.push_back((static_cast<double>(x) - mu) / sigma);
  }
  std::sort(s.samples.begin(), s.samples.end());
  s.mean = sum / static_cast<double>(counts.size());
  double sq = 0.0;
  for (auto x : counts) sq += (static_cast<double>(x) - s.mean) * (static_cast<double>(x) - s.mean);
  s.variance = counts.size() > 1 ? sq / static_cast<double>(counts.size() - 1) : 0.0;
  return s;
}

double empirical_kolmogorov(const EmpiricalSummary& summary) {
  if (summary.samples.empty()) throw std::invalid_argument("empirical_kolmogorov: empty sample");
  std::vector<double> sorted = summary.samples;
  if (!std::is_sorted(sorted.begin(), sorted.end())) std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());
  double best = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double phi = normal_cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / count - phi;
    const double below = phi - static_cast<double>(i) / count;
    best = std::max({best, std::fabs(above), std::fabs(below)});
  }
  return best;
}

BoundReport theoretical_bound(int n) {
  if (n < 5) throw GuardError("theoretical_bound: n must be at least 5, got " + std::to_string(n));
  BoundReport r;
  r.n = n;
  r.mu = to_double(exact_mean(n));
  const double var = to_double(exact_variance(n));
  r.sigma = std::sqrt(var);
  r.a_bound = 4.0 * (n - 3);
  r.psi_bound = std::sqrt(kConditionalVarianceConstant * n);
  r.term1 = 6.0 * r.mu * r.a_bound * r.a_bound / (var * r.sigma);
  r.term2 = 2.0 * r.mu * r.psi_bound / var;
  r.total = r.term1 + r.term2;
  return r;
}

EmpiricalSummary simulate_standardized(int n, std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  if (n < 5) throw GuardError("simulate_standardized: n must be at least 5");
  if (samples < 1) throw GuardError("simulate_standardized: need at least one sample");
  auto shares = run_workers<std::vector<std::int64_t>>(threads, seed, samples, [n](Rng& rng, std::uint64_t count, unsigned) {
    std::vector<std::int64_t> xs;
    xs.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) xs.push_back(count_crossings_fast(sample_uniform_tree(n, rng)));
    return xs;
  });
  std::vector<std::int64_t> all;
  all.reserve(samples);
  for (const auto& share : shares) all.insert(all.end(), share.begin(), share.end());
  return summarize_counts(n, all);
}

bool indices_adjacent(const LabeledTree& tree, const CrossingIndex& i, const CrossingIndex& j) {
  auto side = [&](Vertex v) {
    if (v == i.a || v == i.b || v == i.c || v == i.d) return 1;
    if (v == j.a || v == j.b || v == j.c || v == j.d) return 2;
    return 0;
  };
  for (const Edge& e : tree.edges()) {
    const int su = side(e.u), sv = side(e.v);
    if (su != 0 && sv != 0 && su != sv) return true;
  }
  return false;
}

Estimate adjacency_event_probability(int n, const CrossingIndex& i, const CrossingIndex& j, std::uint64_t samples,
                                     Rng& rng) {
  if (!vertex_disjoint(i, j)) throw std::invalid_argument("adjacency_event_probability: indices share a vertex");
  if (std::max(i.d, j.d) > n) throw std::invalid_argument("adjacency_event_probability: index outside 1..n");
  if (samples < 1) throw GuardError("adjacency_event_probability: need at least one sample");
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s)
    if (indices_adjacent(sample_uniform_tree(n, rng), i, j)) ++hits;
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), samples};
}

Rational adjacency_event_probability_exact(int n, const CrossingIndex& i, const CrossingIndex& j) {
  if (n != 8) throw GuardError("adjacency_event_probability_exact: only n = 8 is enumerable with disjoint indices");
  if (!vertex_disjoint(i, j)) throw std::invalid_argument("adjacency_event_probability_exact: indices share a vertex");
  std::uint64_t hits = 0;
  const TreeRange trees(n);
  for (const LabeledTree& tree : trees)
    if (indices_adjacent(tree, i, j)) ++hits;
  Rational p(BigInt(static_cast<unsigned long>(hits)), BigInt(static_cast<unsigned long>(trees.size())));
  p.canonicalize();
  return p;
}

RateFit rate_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("rate_fit: need at least 3 points");
  double sx = 0, sy = 0;
  for (const auto& [n, dist] : points) {
    if (!(dist > 0.0)) throw std::invalid_argument("rate_fit: distances must be positive");
    if (!(n > 0.0)) throw std::invalid_argument("rate_fit: n must be positive");
    sx += std::log(n);
    sy += std::log(dist);
  }
  const double m = static_cast<double>(points.size());
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (const auto& [n, dist] : points) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(dist) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("rate_fit: all n are equal");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace treecross
