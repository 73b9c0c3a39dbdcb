#include "analysis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

#include "core/rng.hpp"

namespace mrl {

namespace {

// Midranks of the pooled sample, pooled = x ++ y.
std::vector<double> midranks(const std::vector<double>& pooled) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;  // average 1-based rank
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double u_from_ranks(const std::vector<double>& ranks, std::size_t nx) {
  double r1 = 0.0;
  for (std::size_t i = 0; i < nx; ++i) r1 += ranks[i];
  return r1 - static_cast<double>(nx) * (static_cast<double>(nx) + 1.0) / 2.0;
}

// Count subsets of size nx (the permuted "x" labels) whose U is at least as
// extreme as |u_obs - mu|, by depth-first enumeration over sorted ranks.
void count_extreme(const std::vector<double>& ranks, std::size_t nx, std::size_t from,
                   std::size_t chosen, double rank_sum, double mu, double r_shift,
                   double threshold, std::uint64_t& extreme) {
  if (chosen == nx) {
    const double u = rank_sum - r_shift;
    if (std::fabs(u - mu) >= threshold - 1e-9) ++extreme;
    return;
  }
  if (ranks.size() - from < nx - chosen) return;
  for (std::size_t i = from; i < ranks.size(); ++i) {
    count_extreme(ranks, nx, i + 1, chosen + 1, rank_sum + ranks[i], mu, r_shift,
                  threshold, extreme);
  }
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::uint64_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

MannWhitneyResult mann_whitney_u(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  if (x.empty() || y.empty()) throw EmptyInput("mann_whitney_u: empty sample");
  const std::size_t nx = x.size();
  const std::size_t ny = y.size();
  std::vector<double> pooled = x;
  pooled.insert(pooled.end(), y.begin(), y.end());
  const std::vector<double> ranks = midranks(pooled);

  MannWhitneyResult res;
  res.u = u_from_ranks(ranks, nx);
  const double nm = static_cast<double>(nx) * static_cast<double>(ny);
  const double mu = nm / 2.0;

  if (nm <= 200.0) {
    // Exact: enumerate all C(nx+ny, nx) rank configurations.
    std::vector<double> sorted_ranks = ranks;
    std::sort(sorted_ranks.begin(), sorted_ranks.end());
    const double r_shift = static_cast<double>(nx) * (static_cast<double>(nx) + 1.0) / 2.0;
    std::uint64_t extreme = 0;
    count_extreme(sorted_ranks, nx, 0, 0, 0.0, mu, r_shift, std::fabs(res.u - mu),
                  extreme);
    const std::uint64_t total = binomial(nx + ny, nx);
    res.p_two_sided = static_cast<double>(extreme) / static_cast<double>(total);
    res.exact = true;
    return res;
  }

  // Normal approximation with tie correction and continuity correction.
  const double n = static_cast<double>(nx + ny);
  double tie_term = 0.0;
  {
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      tie_term += t * t * t - t;
      i = j + 1;
    }
  }
  const double sigma2 = nm / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (sigma2 <= 0.0) {
    res.p_two_sided = 1.0;  // all values tied
    return res;
  }
  const double diff = std::fabs(res.u - mu);
  const double z = (diff - 0.5) / std::sqrt(sigma2);
  res.p_two_sided = std::min(1.0, 2.0 * normal_sf(std::max(z, 0.0)));
  return res;
}

MannWhitneyResult mann_whitney_permutation_oracle(const std::vector<double>& x,
                                                  const std::vector<double>& y) {
  if (x.empty() || y.empty()) throw EmptyInput("permutation oracle: empty sample");
  const std::size_t nx = x.size();
  std::vector<double> pooled = x;
  pooled.insert(pooled.end(), y.begin(), y.end());
  const std::vector<double> ranks = midranks(pooled);

  MannWhitneyResult res;
  res.u = u_from_ranks(ranks, nx);
  res.exact = true;
  const double mu = static_cast<double>(nx) * static_cast<double>(x.size() + y.size() - nx) / 2.0;
  const double threshold = std::fabs(res.u - mu);

  // Walk every distinct binary labelling via next_permutation on a sorted
  // label vector; independent of the subset-enumeration path above.
  std::vector<int> labels(pooled.size(), 1);
  for (std::size_t i = 0; i < nx; ++i) labels[i] = 0;
  std::sort(labels.begin(), labels.end());
  const double r_shift = static_cast<double>(nx) * (static_cast<double>(nx) + 1.0) / 2.0;
  std::uint64_t extreme = 0;
  std::uint64_t total = 0;
  do {
    double r1 = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == 0) r1 += ranks[i];
    const double u = r1 - r_shift;
    if (std::fabs(u - mu) >= threshold - 1e-9) ++extreme;
    ++total;
  } while (std::next_permutation(labels.begin(), labels.end()));
  res.p_two_sided = static_cast<double>(extreme) / static_cast<double>(total);
  return res;
}

Interval bootstrap_ci(const std::vector<double>& x, const std::vector<double>& y,
                      int b, double level, std::uint64_t seed) {
  if (x.empty() || y.empty()) throw EmptyInput("bootstrap_ci: empty sample");
  if (b < 1000) throw Error("bootstrap_ci: b must be >= 1000");
  if (!(level > 0.0) || !(level < 1.0)) throw Error("bootstrap_ci: level must be in (0,1)");

  Rng rng(seed);
  auto resample_mean = [&rng](const std::vector<double>& v) {
    double sum = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i)
      sum += v[rng.next_below(n)];
    return sum / static_cast<double>(n);
  };

  std::vector<double> stats(static_cast<std::size_t>(b));
  for (auto& s : stats) s = resample_mean(x) - resample_mean(y);
  std::sort(stats.begin(), stats.end());

  const double alpha = 1.0 - level;
  // nearest-rank percentile endpoints
  auto at_quantile = [&stats](double q) {
    const double pos = q * static_cast<double>(stats.size() - 1);
    return stats[static_cast<std::size_t>(std::llround(pos))];
  };
  return Interval{at_quantile(alpha / 2.0), at_quantile(1.0 - alpha / 2.0)};
}

}  // namespace mrl
