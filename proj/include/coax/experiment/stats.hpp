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

#ifndef COAX_EXPERIMENT_STATS_HPP_
#define COAX_EXPERIMENT_STATS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace coax::experiment {

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;
  size_t n = 0;
};

// Student-t interval on the mean. Throws ContractViolation when n < 2.
MeanCi Ci95(std::span<const double> values);

// Throws ContractViolation on length mismatch or n < 2 and ValidationError
// when either series has zero variance.
double PearsonR(std::span<const double> a, std::span<const double> b);
// Pearson on average ranks.
double SpearmanRho(std::span<const double> a, std::span<const double> b);
std::vector<double> AverageRanks(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double slope_p = 1.0;  // two-sided t test of slope == 0
};
LinearFit OrdinaryLeastSquares(std::span<const double> x, std::span<const double> y);

struct AnovaResult {
  double f = 0.0;
  double p = 1.0;
  double mse = 0.0;  // pooled within-group variance
  int df_between = 0;
  int df_within = 0;
};
AnovaResult OneWayAnova(const std::vector<std::vector<double>>& groups);

// Upper `alpha` quantile of the studentized range for `groups` means and
// `df` error degrees of freedom, by seeded Monte Carlo.
double StudentizedRangeQuantile(int groups, int df, double alpha = 0.05,
                                int draws = 1000000, uint64_t seed = 2024);

struct TukeyPair {
  size_t a = 0;
  size_t b = 0;
  double diff = 0.0;  // mean_a - mean_b
  double q = 0.0;     // studentized statistic
  bool significant = false;
};

struct TukeyResult {
  std::vector<double> means;
  double critical_q = 0.0;
  double mse = 0.0;
  int df = 0;
  std::vector<TukeyPair> pairs;
  std::vector<std::string> letters;  // compact letter display per group
};

// Tukey-Kramer pairwise comparisons and compact letters; the letter "A"
// marks the set holding the highest mean. Zero pooled variance compares
// means for exact equality.
TukeyResult TukeyHsd(const std::vector<std::vector<double>>& groups,
                     double alpha = 0.05, int draws = 1000000,
                     uint64_t seed = 2024);

// Letters from a significance matrix (insert-absorb). `means` orders the
// letters.
std::vector<std::string> CompactLetters(std::span<const double> means,
                                        const std::vector<std::vector<bool>>& differs);

}  // namespace coax::experiment

#endif  // COAX_EXPERIMENT_STATS_HPP_
