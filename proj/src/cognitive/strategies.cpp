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

#include "coax/cognitive/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>

#include "coax/common/error.hpp"

namespace coax::cognitive {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double Logistic(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<size_t> AllFeatures(size_t n) {
  std::vector<size_t> all(n);
  std::iota(all.begin(), all.end(), size_t{0});
  return all;
}

std::vector<size_t> SortedTopK(std::span<const double> scores, size_t k) {
  std::vector<size_t> top = TopK(scores, k);
  std::sort(top.begin(), top.end());
  return top;
}

bool MemoryHasSalience(const Memory& memory) {
  return std::all_of(memory.traces().begin(), memory.traces().end(),
                     [](const ExemplarTrace& t) { return t.has_salience(); });
}

Decision Uniform(Strategy applied, Rng& rng) {
  Decision d;
  d.proba_label1 = 0.5;
  d.label = LabelFromProbaLabel1(0.5, rng);
  d.trace.applied = applied;
  return d;
}

using DistanceFn = std::function<std::optional<double>(const ExemplarTrace&)>;

// Retrieval followed by the context model over exemplars with a defined
// distance. No usable exemplar gives a flagged uniform decision.
Decision GcmDecision(const Memory& memory, int trial,
                     const CognitiveParams& params, const DistanceFn& distance,
                     std::vector<size_t> attended, Strategy applied, Rng& rng) {
  std::vector<double> similarities;
  std::vector<Label> labels;
  std::vector<uint64_t> ids;
  for (const Retrieved& r : Retrieve(memory, trial, params.rho, params.lambda)) {
    const auto d = distance(*r.trace);
    if (!d) continue;
    similarities.push_back(Similarity(*d, params.alpha, r.activation));
    labels.push_back(r.trace->ai_label);
    ids.push_back(r.trace->id);
  }
  Decision decision;
  if (similarities.empty()) {
    decision = Uniform(applied, rng);
    decision.trace.empty_retrieval = true;
  } else {
    decision.proba_label1 = GcmProbaLabel1(similarities, labels);
    decision.label = LabelFromProbaLabel1(decision.proba_label1, rng);
    decision.trace.applied = applied;
  }
  decision.trace.attended = std::move(attended);
  decision.trace.retrieved_ids = std::move(ids);
  decision.trace.similarities = std::move(similarities);
  return decision;
}

size_t ClampK(int k, size_t n) {
  if (k < 1) throw ContractViolation("k must be at least 1");
  return std::min(static_cast<size_t>(k), n);
}

}  // namespace

std::vector<double> ShownExplanation::Salience() const {
  std::vector<double> salience(values.size());
  for (size_t r = 0; r < values.size(); ++r) salience[r] = std::abs(values[r]);
  return salience;
}

Json ToJson(const Decision& decision) {
  const auto& t = decision.trace;
  return Json{{"proba_label1", decision.proba_label1},
              {"label", ToInt(decision.label)},
              {"strategy", ToString(t.applied)},
              {"attended", t.attended},
              {"retrieved_ids", t.retrieved_ids},
              {"similarities", t.similarities},
              {"feature_votes", t.feature_votes},
              {"empty_retrieval", t.empty_retrieval},
              {"rank_fallback", t.rank_fallback},
              {"strategy_fallback", t.strategy_fallback}};
}

Label LabelFromProbaLabel1(double proba_label1, Rng& rng) {
  if (proba_label1 > 0.5) return Label::kOne;
  if (proba_label1 < 0.5) return Label::kTwo;
  return Bernoulli(rng, 0.5) ? Label::kOne : Label::kTwo;
}

std::vector<size_t> TopK(std::span<const double> scores, size_t k) {
  std::vector<size_t> order = AllFeatures(scores.size());
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return scores[a] > scores[b];
  });
  order.resize(std::min(k, order.size()));
  return order;
}

FeatureRanking RankByTStatistic(const std::vector<std::vector<double>>& rows,
                                std::span<const Label> labels) {
  if (rows.size() != labels.size()) {
    throw ShapeError("one label per row is required for ranking");
  }
  FeatureRanking ranking;
  if (rows.empty()) {
    ranking.fallback = true;
    return ranking;
  }
  const size_t n = rows.front().size();
  ranking.scores.assign(n, 0.0);
  const bool has_one = std::count(labels.begin(), labels.end(), Label::kOne) > 0;
  const bool has_two = std::count(labels.begin(), labels.end(), Label::kTwo) > 0;
  ranking.fallback = !(has_one && has_two);

  for (size_t r = 0; r < n; ++r) {
    if (ranking.fallback) {
      // Spread around the grand mean when only one class is remembered.
      double sum = 0.0;
      size_t count = 0;
      for (const auto& row : rows) {
        if (std::isnan(row[r])) continue;
        sum += row[r];
        ++count;
      }
      if (count == 0) continue;
      const double mean = sum / count;
      double spread = 0.0;
      for (const auto& row : rows) {
        if (!std::isnan(row[r])) spread += std::abs(row[r] - mean);
      }
      ranking.scores[r] = spread / count;
      continue;
    }
    double sum[2] = {0, 0}, sq[2] = {0, 0};
    size_t count[2] = {0, 0};
    for (size_t i = 0; i < rows.size(); ++i) {
      const double v = rows[i][r];
      if (std::isnan(v)) continue;
      const int g = labels[i] == Label::kOne ? 0 : 1;
      sum[g] += v;
      ++count[g];
    }
    if (count[0] == 0 || count[1] == 0) continue;
    const double mean[2] = {sum[0] / count[0], sum[1] / count[1]};
    for (size_t i = 0; i < rows.size(); ++i) {
      const double v = rows[i][r];
      if (std::isnan(v)) continue;
      const int g = labels[i] == Label::kOne ? 0 : 1;
      sq[g] += (v - mean[g]) * (v - mean[g]);
    }
    double se2 = 0.0;
    for (int g = 0; g < 2; ++g) {
      const double var = count[g] > 1 ? sq[g] / (count[g] - 1) : 0.0;
      se2 += var / count[g];
    }
    const double gap = std::abs(mean[0] - mean[1]);
    if (se2 > 0.0) {
      ranking.scores[r] = gap / std::sqrt(se2);
    } else {
      ranking.scores[r] = gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
  }
  ranking.order = TopK(ranking.scores, n);
  return ranking;
}

FeatureRanking SensitiveFeatureRank(const Memory& memory, size_t num_features) {
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  for (const auto& trace : memory.traces()) {
    std::vector<double> row(num_features, kNaN);
    for (size_t i = 0; i < trace.features.size(); ++i) {
      if (trace.features[i] < num_features) row[trace.features[i]] = trace.values[i];
    }
    rows.push_back(std::move(row));
    labels.push_back(trace.ai_label);
  }
  FeatureRanking ranking = RankByTStatistic(rows, labels);
  if (ranking.order.empty()) ranking.order = AllFeatures(num_features);
  if (ranking.scores.empty()) ranking.scores.assign(num_features, 0.0);
  return ranking;
}

Decision DecideSensitive(const Stimulus& stimulus, const Memory& memory,
                         const CognitiveParams& params, Rng& rng) {
  const size_t n = stimulus.x.size();
  const FeatureRanking ranking = SensitiveFeatureRank(memory, n);
  std::vector<size_t> attended(ranking.order.begin(),
                               ranking.order.begin() + ClampK(params.k, n));
  std::sort(attended.begin(), attended.end());
  const DistanceFn distance = [&](const ExemplarTrace& t) {
    return MeanSquaredDistance(stimulus.x, t, attended);
  };
  Decision d = GcmDecision(memory, stimulus.trial, params, distance, attended,
                           Strategy::kSensitiveFeatures, rng);
  d.trace.rank_fallback = ranking.fallback;
  return d;
}

Decision DecideSalient(const Stimulus& stimulus, const Memory& memory,
                       const CognitiveParams& params, Rng& rng) {
  const size_t n = stimulus.x.size();
  // Without an explanation on screen each exemplar is compared on whatever
  // it stored.
  std::vector<size_t> attended =
      stimulus.shown ? SortedTopK(stimulus.shown->Salience(), ClampK(params.k, n))
                     : AllFeatures(n);
  const DistanceFn distance = [&](const ExemplarTrace& t) {
    return MeanSquaredDistance(stimulus.x, t, attended);
  };
  return GcmDecision(memory, stimulus.trial, params, distance, attended,
                     Strategy::kSalientFeatures, rng);
}

Decision DecideImportanceCategorization(const Stimulus& stimulus,
                                        const Memory& memory,
                                        const CognitiveParams& params,
                                        Rng& rng) {
  if (!stimulus.shown) {
    throw ContractViolation("importance categorization needs a shown explanation");
  }
  const std::vector<double> salience = stimulus.shown->Salience();
  const size_t n = salience.size();
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  for (const auto& trace : memory.traces()) {
    if (!trace.has_salience()) {
      throw ContractViolation("importance categorization needs stored salience");
    }
    rows.push_back(trace.salience);
    labels.push_back(trace.ai_label);
  }
  FeatureRanking ranking = RankByTStatistic(rows, labels);
  if (ranking.order.empty()) ranking.order = AllFeatures(n);
  std::vector<size_t> attended(ranking.order.begin(),
                               ranking.order.begin() + ClampK(params.k, n));
  std::sort(attended.begin(), attended.end());
  const DistanceFn distance = [&](const ExemplarTrace& t) -> std::optional<double> {
    double sum = 0.0;
    for (size_t r : attended) sum += std::pow(salience[r] - t.salience[r], 2);
    return sum / static_cast<double>(attended.size());
  };
  Decision d = GcmDecision(memory, stimulus.trial, params, distance, attended,
                           Strategy::kImportanceCategorization, rng);
  d.trace.rank_fallback = ranking.fallback;
  return d;
}

Decision DecideAttributionSum(const Stimulus& stimulus, const Memory& memory,
                              const CognitiveParams& params, Rng& rng) {
  const size_t n = stimulus.x.size();
  const size_t k = ClampK(params.k, n);
  Decision decision;
  decision.trace.applied = Strategy::kAttributionSum;

  if (stimulus.shown && stimulus.shown->type == XaiType::kAttribution) {
    const auto& toward1 = stimulus.shown->values;
    decision.trace.attended = SortedTopK(stimulus.shown->Salience(), k);
    double total = 0.0;
    for (size_t r : decision.trace.attended) {
      decision.trace.feature_votes.push_back(toward1[r]);
      total += toward1[r];
    }
    decision.proba_label1 = Logistic(params.zeta * total);
    decision.label = LabelFromProbaLabel1(decision.proba_label1, rng);
    return decision;
  }

  // Per-feature recall: single-feature similarity to every retrieved
  // exemplar gives a label vote and, without XAI, a remembered magnitude.
  const std::vector<Retrieved> retrieved =
      Retrieve(memory, stimulus.trial, params.rho, params.lambda);
  std::vector<double> vote(n, 0.0), magnitude(n, 0.0);
  std::vector<bool> recalled(n, false);
  for (size_t r = 0; r < n; ++r) {
    double mass = 0.0, weighted_magnitude = 0.0;
    for (const Retrieved& item : retrieved) {
      const auto stored = item.trace->ValueAt(r);
      if (!stored) continue;
      const double diff = stimulus.x[r] - *stored;
      const double s =
          Similarity(diff * diff, kAttributionRecallAlpha, item.activation);
      vote[r] += item.trace->ai_label == Label::kOne ? s : -s;
      mass += s;
      if (item.trace->has_salience()) weighted_magnitude += s * item.trace->salience[r];
    }
    recalled[r] = mass > 0.0;
    if (recalled[r]) magnitude[r] = weighted_magnitude / mass;
  }
  const std::vector<double> weight =
      stimulus.shown ? stimulus.shown->Salience() : magnitude;
  decision.trace.attended = SortedTopK(weight, k);
  double total = 0.0;
  for (size_t r : decision.trace.attended) {
    const double y = vote[r] > 0.0 ? 1.0 : (vote[r] < 0.0 ? -1.0 : 0.0);
    if (!recalled[r]) decision.trace.empty_retrieval = true;
    decision.trace.feature_votes.push_back(weight[r] * y);
    total += weight[r] * y;
  }
  for (const Retrieved& item : retrieved) {
    decision.trace.retrieved_ids.push_back(item.trace->id);
  }
  decision.proba_label1 = Logistic(params.zeta * total);
  decision.label = LabelFromProbaLabel1(decision.proba_label1, rng);
  return decision;
}

Decision DecideRandom(Rng& rng) { return Uniform(Strategy::kRandom, rng); }

bool StrategyApplicable(Strategy strategy, XaiType training_xai,
                        XaiType test_xai) {
  const bool trained = training_xai != XaiType::kNone;
  const bool shown = test_xai != XaiType::kNone;
  switch (strategy) {
    case Strategy::kSensitiveFeatures:
    case Strategy::kRandom:
      return true;
    case Strategy::kSalientFeatures:
      return trained;
    case Strategy::kAttributionSum:
      return trained || shown;
    case Strategy::kImportanceCategorization:
      return trained && shown;
  }
  return false;
}

Decision Decide(const Stimulus& stimulus, const Memory& memory,
                const CognitiveParams& params, Rng& rng) {
  const bool salience = MemoryHasSalience(memory);
  const bool shown = stimulus.shown != nullptr;
  bool fallback = false;
  switch (params.strategy) {
    case Strategy::kRandom:
      return DecideRandom(rng);
    case Strategy::kSensitiveFeatures:
      return DecideSensitive(stimulus, memory, params, rng);
    case Strategy::kSalientFeatures:
      if (salience) return DecideSalient(stimulus, memory, params, rng);
      fallback = true;
      break;
    case Strategy::kAttributionSum:
      if (shown || salience) {
        return DecideAttributionSum(stimulus, memory, params, rng);
      }
      fallback = true;
      break;
    case Strategy::kImportanceCategorization:
      if (shown && salience) {
        return DecideImportanceCategorization(stimulus, memory, params, rng);
      }
      fallback = true;
      break;
  }
  Decision d = DecideSensitive(stimulus, memory, params, rng);
  d.trace.strategy_fallback = fallback;
  return d;
}

void EncodeTrial(Memory& memory, std::span<const double> x,
                 const ShownExplanation* shown, Label ai_label, int trial,
                 const CognitiveParams& params) {
  ExemplarTrace trace;
  const size_t n = x.size();
  if (shown) {
    if (shown->values.size() != n) throw ShapeError("explanation width mismatch");
    trace.salience = shown->Salience();
    if (shown->type == XaiType::kAttribution) trace.toward_label1 = shown->values;
  }
  trace.features = params.strategy == Strategy::kSalientFeatures && shown
                       ? SortedTopK(trace.salience, ClampK(params.k, n))
                       : AllFeatures(n);
  for (size_t r : trace.features) trace.values.push_back(x[r]);
  trace.ai_label = ai_label;
  trace.t_stored = trial;
  memory.Add(std::move(trace));
}

}  // namespace coax::cognitive
