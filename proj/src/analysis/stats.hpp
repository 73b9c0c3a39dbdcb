#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "core/errors.hpp"

namespace mrl {

struct MannWhitneyResult {
  double u = 0.0;           // U statistic for x (ties contribute 0.5)
  double p_two_sided = 1.0;
  bool exact = false;       // exact enumeration vs normal approximation
};

// Two-sample Mann-Whitney U with midrank tie handling. The p-value is exact
// (full enumeration of the permutation distribution of U, conditioned on the
// pooled values) when |x|*|y| <= 200, otherwise a normal approximation with
// tie correction and continuity correction. Two-sided p counts permutations
// at least as far from the null mean nm/2 as the observed U.
MannWhitneyResult mann_whitney_u(const std::vector<double>& x,
                                 const std::vector<double>& y);

// Independent oracle for tests: brute-force permutation over all label
// assignments. Feasible for small samples only.
MannWhitneyResult mann_whitney_permutation_oracle(const std::vector<double>& x,
                                                  const std::vector<double>& y);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Percentile bootstrap interval for mean(x) - mean(y). Deterministic given
// the seed: SplitMix64 stream, resample indices drawn as floor(u * n).
Interval bootstrap_ci(const std::vector<double>& x, const std::vector<double>& y,
                      int b, double level, std::uint64_t seed);

}  // namespace mrl
