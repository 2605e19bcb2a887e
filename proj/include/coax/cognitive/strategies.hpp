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

#ifndef COAX_COGNITIVE_STRATEGIES_HPP_
#define COAX_COGNITIVE_STRATEGIES_HPP_

#include <span>
#include <vector>

#include "coax/cognitive/memory.hpp"
#include "coax/cognitive/params.hpp"
#include "coax/common/jsonl.hpp"
#include "coax/common/random.hpp"
#include "coax/common/types.hpp"

namespace coax::cognitive {

// The explanation as a participant sees it, display-scaled. For importance
// XAI `values` are non-negative magnitudes; for attribution XAI they are
// signed so that positive supports label 1.
struct ShownExplanation {
  XaiType type = XaiType::kImportance;
  std::vector<double> values;

  // Importance, or |attribution|.
  std::vector<double> Salience() const;
};

struct DecisionTrace {
  Strategy applied = Strategy::kRandom;
  std::vector<size_t> attended;
  std::vector<uint64_t> retrieved_ids;
  std::vector<double> similarities;
  std::vector<double> feature_votes;  // a_r * y_r per attended feature
  bool empty_retrieval = false;
  bool rank_fallback = false;
  bool strategy_fallback = false;
};

struct Decision {
  double proba_label1 = 0.5;
  Label label = Label::kOne;
  DecisionTrace trace;
};

Json ToJson(const Decision& decision);

// Label 1 above 0.5, label 2 below, coin flip at exactly 0.5.
Label LabelFromProbaLabel1(double proba_label1, Rng& rng);

// Indices of the k largest scores; equal scores prefer the lower index.
std::vector<size_t> TopK(std::span<const double> scores, size_t k);

struct FeatureRanking {
  std::vector<size_t> order;    // most discriminative first
  std::vector<double> scores;   // t statistic per feature (or fallback score)
  bool fallback = false;        // one class absent
};

// Welch-style t statistic per feature of `rows` split by label. Rows may be
// ragged only through NaN entries, which are skipped.
FeatureRanking RankByTStatistic(const std::vector<std::vector<double>>& rows,
                                std::span<const Label> labels);
// Ranks stored feature values.
FeatureRanking SensitiveFeatureRank(const Memory& memory, size_t num_features);

// Inputs for one decision. `shown` is null when the trial has no XAI.
struct Stimulus {
  std::span<const double> x;
  const ShownExplanation* shown = nullptr;
  int trial = 0;
};

Decision DecideSensitive(const Stimulus& stimulus, const Memory& memory,
                         const CognitiveParams& params, Rng& rng);
Decision DecideSalient(const Stimulus& stimulus, const Memory& memory,
                       const CognitiveParams& params, Rng& rng);
Decision DecideAttributionSum(const Stimulus& stimulus, const Memory& memory,
                              const CognitiveParams& params, Rng& rng);
Decision DecideImportanceCategorization(const Stimulus& stimulus,
                                        const Memory& memory,
                                        const CognitiveParams& params, Rng& rng);
Decision DecideRandom(Rng& rng);

// Whether `strategy` can run when training showed `training_xai` and the
// current trial shows `test_xai` (kNone for a trial without XAI).
bool StrategyApplicable(Strategy strategy, XaiType training_xai,
                        XaiType test_xai);

// Dispatches on params.strategy. Strategies that cannot run on the stimulus
// or memory fall back to SensitiveFeatures with the same alpha, rho and k.
Decision Decide(const Stimulus& stimulus, const Memory& memory,
                const CognitiveParams& params, Rng& rng);

// Stores one feedback trial. SalientFeatures keeps only the top-k salient
// features when an explanation is shown; every other strategy keeps all.
void EncodeTrial(Memory& memory, std::span<const double> x,
                 const ShownExplanation* shown, Label ai_label, int trial,
                 const CognitiveParams& params);

}  // namespace coax::cognitive

#endif  // COAX_COGNITIVE_STRATEGIES_HPP_
