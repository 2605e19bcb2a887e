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

#ifndef COAX_EXPERIMENT_STUDIES_HPP_
#define COAX_EXPERIMENT_STUDIES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coax/cognitive/params.hpp"
#include "coax/common/jsonl.hpp"
#include "coax/common/types.hpp"
#include "coax/experiment/environment.hpp"
#include "coax/experiment/stats.hpp"
#include "coax/experiment/virtual_session.hpp"
#include "coax/fitting/population.hpp"

namespace coax::experiment {

struct ConditionCell {
  XaiType xai_type = XaiType::kNone;
  TestCondition condition = TestCondition::kWithoutXai;
  bool operator==(const ConditionCell&) const = default;
};

// "<xai_type>/<condition>"
std::string CellName(const ConditionCell& cell);

// None/without, Importance with and without, Attribution with and without.
std::vector<ConditionCell> StudyConditions();

struct CellConfig {
  ConditionCell cell;
  size_t participants = 100;
  uint64_t seed = 1;
  ProtocolConfig protocol;
  // Defaults to the published strategy mix for the cell.
  std::optional<fitting::PopulationSpec> population;
};

struct CellResult {
  std::string name;
  ConditionCell cell;
  double iv = 0.0;  // independent variable of a sweep, 0 otherwise
  std::string explainer;
  std::vector<double> correctness;  // per participant, on the cell's condition
  std::vector<cognitive::CognitiveParams> participants;
  MeanCi ci;
};

Json ToJson(const CellResult& cell);

// Samples a population and runs one session per participant.
CellResult RunCell(const StudyEnvironment& env, const CellConfig& config);

// Runs the given participants. Participant i uses split i and seed
// DeriveSeed(seed, {i}).
CellResult RunParticipants(const StudyEnvironment& env, const ConditionCell& cell,
                           const std::vector<cognitive::CognitiveParams>& participants,
                           uint64_t seed, const ProtocolConfig& protocol = {});

struct ConditionStudy {
  std::vector<CellResult> cells;
  AnovaResult anova;
  TukeyResult tukey;
};

ConditionStudy RunConditionStudy(const StudyEnvironment& env, size_t participants,
                                 uint64_t seed, int tukey_draws = 1000000);

// Cells over (independent variable x condition).
struct SweepStudy {
  std::string iv_name;
  std::vector<CellResult> cells;
  // Cells of one condition in sweep order.
  std::vector<const CellResult*> Series(const ConditionCell& cell) const;
};

// Number of feedback trials from `lo` to `hi`; test blocks stay at 18.
// Each condition keeps the same participants across the sweep.
SweepStudy RunTrainingSweep(const StudyEnvironment& env, int lo, int hi,
                            size_t participants, uint64_t seed);

// Synthetic task with `lo`..`hi` attributes; one environment per point built
// from `base` with dataset and attribute count overridden.
SweepStudy RunAttributeSweep(const EnvironmentConfig& base, int lo, int hi,
                             size_t participants, uint64_t seed);

// Same model and pool, explanations from each method; iv is the method index.
// Covers the four conditions that involve an explanation type.
SweepStudy RunExplainerStudy(const StudyEnvironment& env,
                             const std::vector<xai::Method>& methods,
                             size_t participants, uint64_t seed);

enum class TrendParameter { kAlpha, kK, kRho, kZeta };
std::string ToString(TrendParameter parameter);
TrendParameter ParseTrendParameter(const std::string& text);

struct TrendStudy {
  TrendParameter parameter = TrendParameter::kAlpha;
  std::vector<double> values;       // per participant
  std::vector<double> correctness;  // per participant
  std::vector<double> bin_centers;
  std::vector<double> bin_means;
  double spearman = 0.0;      // participant level
  double bin_spearman = 0.0;  // over bin means
};

// Equal-width bins over the parameter's box range. Participants come from the
// published mix of strategies that use the parameter, cycling through the
// conditions where those strategies run; the parameter is drawn uniformly
// inside its bin and everything else from the published moments.
TrendStudy RunParameterTrend(const StudyEnvironment& env, TrendParameter parameter,
                             size_t bins, size_t per_bin, uint64_t seed);

Json ToJson(const TrendStudy& trend);

}  // namespace coax::experiment

#endif  // COAX_EXPERIMENT_STUDIES_HPP_
