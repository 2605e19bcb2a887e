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

#include "coax/experiment/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "coax/common/error.hpp"
#include "coax/common/random.hpp"

namespace coax::experiment {

namespace {

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Marsaglia-Tsang gamma(shape, 1) on the project's portable streams.
double SampleGamma(double shape, Rng& rng) {
  if (shape < 1.0) {
    const double u = Uniform01(rng);
    return SampleGamma(shape + 1.0, rng) * std::pow(std::max(u, 1e-300), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double z, v;
    do {
      z = StandardNormal(rng);
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = Uniform01(rng);
    if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
    if (std::log(std::max(u, 1e-300)) < 0.5 * z * z + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

}  // namespace

MeanCi Ci95(std::span<const double> values) {
  if (values.size() < 2) throw ContractViolation("a CI needs at least 2 values");
  const double n = static_cast<double>(values.size());
  const double mean = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t t(n - 1.0);
  const double crit = boost::math::quantile(boost::math::complement(t, 0.025));
  return {mean, crit * sd / std::sqrt(n), values.size()};
}

double PearsonR(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw ContractViolation("correlation needs two equal series of length >= 2");
  }
  const double ma = Mean(a), mb = Mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw ValidationError("correlation is undefined for a constant series");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t x, size_t y) { return values[x] < values[y]; });
  std::vector<double> ranks(values.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t m = i; m <= j; ++m) ranks[order[m]] = rank;
    i = j + 1;
  }
  return ranks;
}

double SpearmanRho(std::span<const double> a, std::span<const double> b) {
  const auto ra = AverageRanks(a);
  const auto rb = AverageRanks(b);
  return PearsonR(ra, rb);
}

LinearFit OrdinaryLeastSquares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw ContractViolation("regression needs two equal series of length >= 3");
  }
  const double n = static_cast<double>(x.size());
  const double mx = Mean(x), my = Mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("regression needs varying x");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  fit.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  if (fit.slope_se > 0.0) {
    const boost::math::students_t t(n - 2.0);
    fit.slope_p = 2.0 * boost::math::cdf(boost::math::complement(
                            t, std::abs(fit.slope / fit.slope_se)));
  } else {
    fit.slope_p = fit.slope == 0.0 ? 1.0 : 0.0;
  }
  return fit;
}

AnovaResult OneWayAnova(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw ContractViolation("ANOVA needs >= 2 groups");
  double total = 0.0;
  size_t count = 0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw ContractViolation("ANOVA needs >= 2 values per group");
    total += std::accumulate(g.begin(), g.end(), 0.0);
    count += g.size();
  }
  const double grand = total / static_cast<double>(count);
  double between = 0.0, within = 0.0;
  for (const auto& g : groups) {
    const double m = Mean(g);
    between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) within += (v - m) * (v - m);
  }
  AnovaResult r;
  r.df_between = static_cast<int>(groups.size()) - 1;
  r.df_within = static_cast<int>(count - groups.size());
  r.mse = within / r.df_within;
  const double msb = between / r.df_between;
  if (r.mse > 0.0) {
    r.f = msb / r.mse;
    const boost::math::fisher_f dist(r.df_between, r.df_within);
    r.p = boost::math::cdf(boost::math::complement(dist, r.f));
  } else {
    r.f = msb > 0.0 ? INFINITY : 0.0;
    r.p = msb > 0.0 ? 0.0 : 1.0;
  }
  return r;
}

double StudentizedRangeQuantile(int groups, int df, double alpha, int draws,
                                uint64_t seed) {
  if (groups < 2 || df < 1 || draws < 100 || !(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("invalid studentized range request");
  }
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double, int, uint64_t>, double> cache;
  const auto key = std::make_tuple(groups, df, alpha, draws, seed);
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  Rng rng(DeriveSeed(seed, {static_cast<uint64_t>(groups), static_cast<uint64_t>(df)}));
  std::vector<double> q(static_cast<size_t>(draws));
  for (double& v : q) {
    double lo = INFINITY, hi = -INFINITY;
    for (int g = 0; g < groups; ++g) {
      const double z = StandardNormal(rng);
      lo = std::min(lo, z);
      hi = std::max(hi, z);
    }
    const double s = std::sqrt(2.0 * SampleGamma(0.5 * df, rng) / df);
    v = (hi - lo) / s;
  }
  const auto rank = static_cast<size_t>(std::ceil((1.0 - alpha) * draws)) - 1;
  std::nth_element(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(rank), q.end());
  const double quantile = q[rank];
  std::lock_guard<std::mutex> lock(mutex);
  cache[key] = quantile;
  return quantile;
}

std::vector<std::string> CompactLetters(std::span<const double> means,
                                        const std::vector<std::vector<bool>>& differs) {
  const size_t g = means.size();
  std::vector<std::vector<bool>> columns{std::vector<bool>(g, true)};
  for (size_t i = 0; i < g; ++i) {
    for (size_t j = i + 1; j < g; ++j) {
      if (!differs[i][j]) continue;
      std::vector<std::vector<bool>> next;
      for (const auto& col : columns) {
        if (col[i] && col[j]) {
          auto without_i = col, without_j = col;
          without_i[i] = false;
          without_j[j] = false;
          next.push_back(without_i);
          next.push_back(without_j);
        } else {
          next.push_back(col);
        }
      }
      // Absorb columns contained in another column.
      std::vector<std::vector<bool>> kept;
      for (size_t a = 0; a < next.size(); ++a) {
        bool absorbed = false;
        for (size_t b = 0; b < next.size() && !absorbed; ++b) {
          if (a == b) continue;
          bool subset = true;
          for (size_t m = 0; m < g && subset; ++m) subset = !next[a][m] || next[b][m];
          const bool equal = next[a] == next[b];
          absorbed = subset && (!equal || b < a);
        }
        if (!absorbed) kept.push_back(next[a]);
      }
      columns = std::move(kept);
    }
  }
  // Order columns by the best mean they contain, then by lowest group index.
  auto key = [&](const std::vector<bool>& col) {
    double best = -INFINITY;
    size_t first = g;
    for (size_t m = 0; m < g; ++m) {
      if (!col[m]) continue;
      best = std::max(best, means[m]);
      first = std::min(first, m);
    }
    return std::make_pair(-best, first);
  };
  std::stable_sort(columns.begin(), columns.end(),
                   [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::vector<std::string> letters(g);
  for (size_t c = 0; c < columns.size(); ++c) {
    const char letter = static_cast<char>('A' + static_cast<int>(c % 26));
    for (size_t m = 0; m < g; ++m) {
      if (columns[c][m]) letters[m].push_back(letter);
    }
  }
  return letters;
}

TukeyResult TukeyHsd(const std::vector<std::vector<double>>& groups, double alpha,
                     int draws, uint64_t seed) {
  const AnovaResult anova = OneWayAnova(groups);
  TukeyResult result;
  result.mse = anova.mse;
  result.df = anova.df_within;
  for (const auto& group : groups) result.means.push_back(Mean(group));
  const size_t g = groups.size();
  std::vector<std::vector<bool>> differs(g, std::vector<bool>(g, false));
  if (anova.mse > 0.0) {
    result.critical_q =
        StudentizedRangeQuantile(static_cast<int>(g), anova.df_within, alpha, draws, seed);
  }
  for (size_t a = 0; a < g; ++a) {
    for (size_t b = a + 1; b < g; ++b) {
      TukeyPair pair{a, b, result.means[a] - result.means[b], 0.0, false};
      if (anova.mse > 0.0) {
        const double se = std::sqrt(0.5 * anova.mse *
                                    (1.0 / groups[a].size() + 1.0 / groups[b].size()));
        pair.q = std::abs(pair.diff) / se;
        pair.significant = pair.q > result.critical_q;
      } else {
        pair.q = pair.diff == 0.0 ? 0.0 : INFINITY;
        pair.significant = pair.diff != 0.0;
      }
      differs[a][b] = differs[b][a] = pair.significant;
      result.pairs.push_back(pair);
    }
  }
  result.letters = CompactLetters(result.means, differs);
  return result;
}

}  // namespace coax::experiment
