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

#ifndef COAX_EXPERIMENT_HYPOTHESES_HPP_
#define COAX_EXPERIMENT_HYPOTHESES_HPP_

#include <string>

#include "coax/experiment/studies.hpp"

namespace coax::experiment {

struct Verdict {
  bool pass = false;
  std::string detail;
};

// Attribution with XAI has the highest mean and letter "A".
Verdict CheckConditionOrdering(const ConditionStudy& study);

// Every without-XAI cell: participant-level Spearman of correctness on the
// number of training instances > 0 over points up to `rise_until`, and an
// OLS slope over the later points that is not significant at 0.05.
Verdict CheckTrainingPlateau(const SweepStudy& study, double rise_until = 7);

// Every without-XAI cell has participant-level Spearman < 0 against the
// attribute count, and Attribution with XAI has the top mean at every point.
Verdict CheckAttributeDecline(const SweepStudy& study);

// Pooled mean correctness over the study's cells for method index `worse`
// is at most that of index `better`.
Verdict CheckExplainerOrder(const SweepStudy& study, double worse, double better);

// Participant-level Spearman beyond `threshold` in the direction of its sign.
Verdict CheckTrend(const TrendStudy& trend, double threshold);

}  // namespace coax::experiment

#endif  // COAX_EXPERIMENT_HYPOTHESES_HPP_
