/*
 * Copyright 2026 The CoAX Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COAX_TESTS_UNIT_STATS_ORACLE_HPP_
#define COAX_TESTS_UNIT_STATS_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "coax/common/random.hpp"

namespace coax::testing {

struct PairwiseStats {
  std::vector<std::vector<double>> q;  // studentized |mean_a - mean_b|
};

inline PairwiseStats StudentizedPairs(const std::vector<std::vector<double>>& groups) {
  const size_t g = groups.size();
  std::vector<double> means(g);
  double within = 0.0;
  size_t total = 0;
  for (size_t i = 0; i < g; ++i) {
    double s = 0.0;
    for (double v : groups[i]) s += v;
    means[i] = s / groups[i].size();
    for (double v : groups[i]) within += (v - means[i]) * (v - means[i]);
    total += groups[i].size();
  }
  const double mse = within / static_cast<double>(total - g);
  PairwiseStats out;
  out.q.assign(g, std::vector<double>(g, 0.0));
  for (size_t a = 0; a < g; ++a) {
    for (size_t b = 0; b < g; ++b) {
      const double se = std::sqrt(0.5 * mse * (1.0 / groups[a].size() + 1.0 / groups[b].size()));
      out.q[a][b] = std::abs(means[a] - means[b]) / se;
    }
  }
  return out;
}

// Pairwise significance from a permutation reference: the null distribution
// of the largest studentized pair difference under random relabelling of
// all observations; a pair differs when its statistic exceeds the upper
// `alpha` quantile.
inline std::vector<std::vector<bool>> PermutationTukey(
    const std::vector<std::vector<double>>& groups, double alpha, int permutations,
    uint64_t seed) {
  std::vector<double> pooled;
  for (const auto& g : groups) pooled.insert(pooled.end(), g.begin(), g.end());
  Rng rng(seed);
  std::vector<double> maxima;
  maxima.reserve(permutations);
  for (int p = 0; p < permutations; ++p) {
    Shuffle(pooled, rng);
    std::vector<std::vector<double>> relabelled;
    size_t at = 0;
    for (const auto& g : groups) {
      relabelled.emplace_back(pooled.begin() + at, pooled.begin() + at + g.size());
      at += g.size();
    }
    double largest = 0.0;
    for (const auto& row : StudentizedPairs(relabelled).q) {
      largest = std::max(largest, *std::max_element(row.begin(), row.end()));
    }
    maxima.push_back(largest);
  }
  std::sort(maxima.begin(), maxima.end());
  const double critical =
      maxima[static_cast<size_t>(std::ceil((1.0 - alpha) * permutations)) - 1];
  const PairwiseStats observed = StudentizedPairs(groups);
  std::vector<std::vector<bool>> differs(groups.size(), std::vector<bool>(groups.size(), false));
  for (size_t a = 0; a < groups.size(); ++a) {
    for (size_t b = 0; b < groups.size(); ++b) differs[a][b] = observed.q[a][b] > critical;
  }
  return differs;
}

// Three groups of `size`; each group mean is 0, shift/2 or shift within-group
// SDs, chosen at random.
inline std::vector<std::vector<double>> RandomThreeGroupCase(uint64_t seed, size_t size = 10,
                                                             double shift = 4.0) {
  Rng rng(DeriveSeed(seed, {0x7c4}));
  std::vector<std::vector<double>> groups(3);
  for (auto& g : groups) {
    const double mean = shift * static_cast<double>(UniformIndex(rng, 3)) / 2.0;
    for (size_t i = 0; i < size; ++i) g.push_back(mean + StandardNormal(rng));
  }
  return groups;
}

}  // namespace coax::testing

#endif  // COAX_TESTS_UNIT_STATS_ORACLE_HPP_
