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

#ifndef COAX_FITTING_SESSION_FIT_HPP_
#define COAX_FITTING_SESSION_FIT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coax/cognitive/params.hpp"
#include "coax/cognitive/strategies.hpp"
#include "coax/common/jsonl.hpp"
#include "coax/experiment/session_record.hpp"

namespace coax::fitting {

inline constexpr double kProbabilityFloor = 1e-6;

// A session reduced to what the likelihood needs: the feedback trials to
// replay and the answered test trials of one condition.
struct PreparedTrial {
  std::vector<double> x;
  std::optional<cognitive::ShownExplanation> shown;
  int trial = 0;
  Label ai_label = Label::kOne;
  std::optional<Label> observed;
};

struct PreparedSession {
  std::string session_id;
  XaiType xai_type = XaiType::kNone;
  TestCondition condition = TestCondition::kWithoutXai;
  std::vector<PreparedTrial> training;
  std::vector<PreparedTrial> scored;
};

PreparedSession PrepareSession(const experiment::SessionRecord& record,
                               TestCondition condition);

// Rebuilds memory from the feedback trials of `session`.
cognitive::Memory ReplayTraining(const cognitive::CognitiveParams& params,
                                 const PreparedSession& session);

// P(observed label) per scored trial, before clamping.
std::vector<double> ObservedProbabilities(const cognitive::CognitiveParams& params,
                                          const PreparedSession& session);

// Mean of -ln P(observed) with P clamped to [1e-6, 1 - 1e-6].
// Throws ContractViolation when nothing is scored.
double SessionNll(const cognitive::CognitiveParams& params,
                  const PreparedSession& session);
double MeanNll(std::span<const double> observed_probabilities);

double Bic(double nll, int n, int free_parameters);

struct FitConfig {
  int budget = 60;
  uint64_t seed = 1;
  cognitive::SearchBox box;
};

struct SessionFit {
  std::string session_id;
  TestCondition condition = TestCondition::kWithoutXai;
  cognitive::Strategy strategy = cognitive::Strategy::kRandom;
  cognitive::CognitiveParams params;
  double nll = 0.0;
  double bic = 0.0;
  int n_trials = 0;
  int evaluations = 0;
  bool gp_fallback = false;
};

Json ToJson(const SessionFit& fit);
SessionFit SessionFitFromJson(const Json& json);

// Parameters a strategy's unit-cube point maps to. Coordinates are
// (alpha, rho, k) or, for AttributionSum, (k, rho, zeta). Unused
// parameters sit at the box midpoint.
cognitive::CognitiveParams ParamsFromUnit(cognitive::Strategy strategy,
                                          std::span<const double> unit,
                                          const cognitive::SearchBox& box);

SessionFit FitSession(const PreparedSession& session,
                      cognitive::Strategy strategy, const FitConfig& config);

// Strategies that can run on this session's condition.
std::vector<cognitive::Strategy> CandidateStrategies(XaiType xai_type,
                                                     TestCondition condition);

struct StrategySelection {
  SessionFit best;
  std::vector<SessionFit> candidates;
};

// Lowest BIC; ties go to fewer parameters, then the fixed strategy order.
StrategySelection SelectStrategy(const PreparedSession& session,
                                 const FitConfig& config);
StrategySelection SelectStrategy(const PreparedSession& session,
                                 const FitConfig& config,
                                 std::span<const cognitive::Strategy> candidates);

}  // namespace coax::fitting

#endif  // COAX_FITTING_SESSION_FIT_HPP_
