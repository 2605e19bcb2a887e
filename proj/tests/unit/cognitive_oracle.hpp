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

#ifndef COAX_TESTS_UNIT_COGNITIVE_ORACLE_HPP_
#define COAX_TESTS_UNIT_COGNITIVE_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "coax/cognitive/memory.hpp"
#include "coax/cognitive/strategies.hpp"
#include "coax/common/random.hpp"

// Brute-force reference implementations of the decision equations, written
// straight from the formulas without sharing code with the library.
namespace coax::testing {

// Plain fuzzed exemplar: every feature stored, optional salience.
struct OracleExemplar {
  std::vector<double> values;
  std::vector<double> salience;
  Label label = Label::kOne;
  int t_stored = 0;
};

struct FuzzCase {
  std::vector<OracleExemplar> exemplars;
  std::vector<double> x;
  std::vector<double> shown;  // signed, toward label 1
  int trial = 0;
  cognitive::CognitiveParams params;
};

// Memory of 4..10 exemplars with at least two per class, 5 features.
inline FuzzCase MakeFuzzCase(uint64_t seed) {
  Rng rng(DeriveSeed(seed, {0xc09}));
  FuzzCase c;
  const size_t n = 5;
  const size_t size = 4 + UniformIndex(rng, 7);
  for (size_t i = 0; i < size; ++i) {
    OracleExemplar e;
    for (size_t r = 0; r < n; ++r) e.values.push_back(Uniform01(rng));
    for (size_t r = 0; r < n; ++r) e.salience.push_back(Uniform01(rng));
    e.label = i < 2 ? Label::kOne : (i < 4 ? Label::kTwo
                                           : (Bernoulli(rng, 0.5) ? Label::kOne : Label::kTwo));
    e.t_stored = static_cast<int>(i);
    c.exemplars.push_back(std::move(e));
  }
  for (size_t r = 0; r < n; ++r) c.x.push_back(Uniform01(rng));
  for (size_t r = 0; r < n; ++r) c.shown.push_back(2.0 * Uniform01(rng) - 1.0);
  c.trial = static_cast<int>(size) + static_cast<int>(UniformIndex(rng, 36));
  c.params.alpha = 1.0 + 39.0 * Uniform01(rng);
  c.params.rho = -2.8 + 1.3 * Uniform01(rng);
  c.params.k = 1 + static_cast<int>(UniformIndex(rng, 4));
  c.params.zeta = 0.1 + 4.9 * Uniform01(rng);
  return c;
}

inline cognitive::Memory ToMemory(const FuzzCase& c) {
  cognitive::Memory memory;
  for (const auto& e : c.exemplars) {
    cognitive::ExemplarTrace t;
    for (size_t r = 0; r < e.values.size(); ++r) t.features.push_back(r);
    t.values = e.values;
    t.salience = e.salience;
    t.ai_label = e.label;
    t.t_stored = e.t_stored;
    memory.Add(std::move(t));
  }
  return memory;
}

inline double OracleActivation(int trial, int stored) {
  return -0.5 * std::log(static_cast<double>(trial - stored + 1));
}

// |mean1 - mean2| / sqrt(s1^2/N1 + s2^2/N2) with sample variances.
inline std::vector<double> OracleTStatistics(
    const std::vector<std::vector<double>>& rows, const std::vector<Label>& labels) {
  const size_t n = rows.front().size();
  std::vector<double> t(n);
  for (size_t r = 0; r < n; ++r) {
    std::vector<double> g[2];
    for (size_t i = 0; i < rows.size(); ++i) g[labels[i] == Label::kOne ? 0 : 1].push_back(rows[i][r]);
    double mean[2], var[2];
    for (int k = 0; k < 2; ++k) {
      double s = 0;
      for (double v : g[k]) s += v;
      mean[k] = s / g[k].size();
      double q = 0;
      for (double v : g[k]) q += (v - mean[k]) * (v - mean[k]);
      var[k] = q / (g[k].size() - 1);
    }
    t[r] = std::abs(mean[0] - mean[1]) / std::sqrt(var[0] / g[0].size() + var[1] / g[1].size());
  }
  return t;
}

// Top-k indices, larger score first, lower index on ties, returned ascending.
inline std::vector<size_t> OracleTopK(const std::vector<double>& scores, size_t k) {
  std::vector<size_t> chosen;
  std::vector<bool> used(scores.size(), false);
  for (size_t round = 0; round < std::min(k, scores.size()); ++round) {
    size_t best = scores.size();
    for (size_t r = 0; r < scores.size(); ++r) {
      if (used[r]) continue;
      if (best == scores.size() || scores[r] > scores[best]) best = r;
    }
    used[best] = true;
    chosen.push_back(best);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// Similarity-weighted label-1 share over retrieved exemplars, comparing
// `probe` with `feature(e)` on `attended`. nullopt when nothing is retrieved.
template <typename FeatureOf>
std::optional<double> OracleGcm(const FuzzCase& c, const std::vector<double>& probe,
                                const std::vector<size_t>& attended, FeatureOf feature) {
  double one = 0.0, total = 0.0;
  for (const auto& e : c.exemplars) {
    const double a = OracleActivation(c.trial, e.t_stored);
    if (a < c.params.rho) continue;
    double d = 0.0;
    for (size_t r : attended) d += std::pow(probe[r] - feature(e)[r], 2);
    d /= static_cast<double>(attended.size());
    const double s = std::exp(-c.params.alpha * d + a);
    total += s;
    if (e.label == Label::kOne) one += s;
  }
  if (total == 0.0) return std::nullopt;
  return one / total;
}

inline std::optional<double> OracleSensitive(const FuzzCase& c) {
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  for (const auto& e : c.exemplars) {
    rows.push_back(e.values);
    labels.push_back(e.label);
  }
  const auto attended = OracleTopK(OracleTStatistics(rows, labels), c.params.k);
  return OracleGcm(c, c.x, attended, [](const OracleExemplar& e) { return e.values; });
}

inline std::optional<double> OracleSalient(const FuzzCase& c) {
  std::vector<double> salience;
  for (double v : c.shown) salience.push_back(std::abs(v));
  const auto attended = OracleTopK(salience, c.params.k);
  return OracleGcm(c, c.x, attended, [](const OracleExemplar& e) { return e.values; });
}

inline std::optional<double> OracleImportanceCategorization(const FuzzCase& c) {
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  for (const auto& e : c.exemplars) {
    rows.push_back(e.salience);
    labels.push_back(e.label);
  }
  std::vector<double> salience;
  for (double v : c.shown) salience.push_back(std::abs(v));
  const auto attended = OracleTopK(OracleTStatistics(rows, labels), c.params.k);
  return OracleGcm(c, salience, attended, [](const OracleExemplar& e) { return e.salience; });
}

// Logistic of zeta times the summed top-k attributions.
inline double OracleAttributionSum(const FuzzCase& c) {
  std::vector<double> salience;
  for (double v : c.shown) salience.push_back(std::abs(v));
  double sum = 0.0;
  for (size_t r : OracleTopK(salience, c.params.k)) sum += c.shown[r];
  return 1.0 / (1.0 + std::exp(-c.params.zeta * sum));
}

}  // namespace coax::testing

#endif  // COAX_TESTS_UNIT_COGNITIVE_ORACLE_HPP_
