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

#include "coax/experiment/studies.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "coax/common/error.hpp"
#include "coax/common/random.hpp"
#include "coax/data/dataset_spec.hpp"

namespace coax::experiment {

namespace {

using cognitive::Strategy;

constexpr uint64_t kSplitStream = 0x5b1;
constexpr uint64_t kPopulationStream = 0x909;
constexpr uint64_t kValueStream = 0x7a1;
constexpr uint64_t kSessionStream = 0x3e5;

data::SplitOptions SplitFor(const ProtocolConfig& protocol) {
  return {protocol.training_trials, 2 * protocol.trials_per_block};
}

std::vector<ConditionCell> XaiConditions() {
  std::vector<ConditionCell> cells;
  for (const auto& c : StudyConditions()) {
    if (c.xai_type != XaiType::kNone) cells.push_back(c);
  }
  return cells;
}

std::set<Strategy> StrategiesUsing(TrendParameter parameter) {
  switch (parameter) {
    case TrendParameter::kAlpha:
      return {Strategy::kSensitiveFeatures, Strategy::kSalientFeatures,
              Strategy::kImportanceCategorization};
    case TrendParameter::kK:
    case TrendParameter::kRho:
      return {Strategy::kSensitiveFeatures, Strategy::kSalientFeatures,
              Strategy::kImportanceCategorization, Strategy::kAttributionSum};
    case TrendParameter::kZeta:
      return {Strategy::kAttributionSum};
  }
  return {};
}

cognitive::Range RangeOf(TrendParameter parameter, const cognitive::SearchBox& box) {
  switch (parameter) {
    case TrendParameter::kAlpha:
      return box.alpha;
    case TrendParameter::kK:
      return {box.k.lo - 0.5, box.k.hi + 0.5};
    case TrendParameter::kRho:
      return box.rho;
    case TrendParameter::kZeta:
      return box.zeta;
  }
  return {0.0, 1.0};
}

void SetParameter(cognitive::CognitiveParams& params, TrendParameter parameter,
                  double value, const cognitive::SearchBox& box) {
  switch (parameter) {
    case TrendParameter::kAlpha:
      params.alpha = value;
      break;
    case TrendParameter::kK:
      params.k = std::clamp(static_cast<int>(std::lround(value)),
                            static_cast<int>(box.k.lo), static_cast<int>(box.k.hi));
      break;
    case TrendParameter::kRho:
      params.rho = value;
      break;
    case TrendParameter::kZeta:
      params.zeta = value;
      break;
  }
}

}  // namespace

std::string CellName(const ConditionCell& cell) {
  return std::string(ToString(cell.xai_type)) + "/" + std::string(ToString(cell.condition));
}

std::vector<ConditionCell> StudyConditions() {
  return {{XaiType::kNone, TestCondition::kWithoutXai},
          {XaiType::kImportance, TestCondition::kWithXai},
          {XaiType::kImportance, TestCondition::kWithoutXai},
          {XaiType::kAttribution, TestCondition::kWithXai},
          {XaiType::kAttribution, TestCondition::kWithoutXai}};
}

Json ToJson(const CellResult& cell) {
  return Json{{"name", cell.name},
              {"xai_type", ToString(cell.cell.xai_type)},
              {"condition", ToString(cell.cell.condition)},
              {"iv", cell.iv},
              {"explainer", cell.explainer},
              {"n", cell.ci.n},
              {"mean", cell.ci.mean},
              {"ci95", cell.ci.half_width},
              {"correctness", cell.correctness}};
}

CellResult RunParticipants(const StudyEnvironment& env, const ConditionCell& cell,
                           const std::vector<cognitive::CognitiveParams>& participants,
                           uint64_t seed, const ProtocolConfig& protocol) {
  if (cell.xai_type == XaiType::kNone && cell.condition == TestCondition::kWithXai) {
    throw ConfigError("sessions without XAI have no with-XAI condition");
  }
  const auto splits = env.Splits(participants.size(), DeriveSeed(seed, {kSplitStream}),
                                 SplitFor(protocol));
  CellResult result;
  result.name = CellName(cell);
  result.cell = cell;
  result.explainer = xai::ToString(env.config().explainer.method);
  result.participants = participants;
  for (size_t i = 0; i < participants.size(); ++i) {
    const SessionRecord record = RunVirtualSession(participants[i], splits[i], env,
                                                   cell.xai_type, DeriveSeed(seed, {i}),
                                                   protocol);
    result.correctness.push_back(Correctness(record, cell.condition).value());
  }
  if (result.correctness.size() >= 2) result.ci = Ci95(result.correctness);
  else if (!result.correctness.empty()) result.ci = {result.correctness[0], 0.0, 1};
  return result;
}

CellResult RunCell(const StudyEnvironment& env, const CellConfig& config) {
  const fitting::PopulationSpec spec =
      config.population ? *config.population
                        : fitting::PublishedPopulationSpec(config.cell.xai_type,
                                                       config.cell.condition);
  const auto participants = fitting::SamplePopulation(
      spec, config.participants, DeriveSeed(config.seed, {kPopulationStream}));
  return RunParticipants(env, config.cell, participants, config.seed, config.protocol);
}

ConditionStudy RunConditionStudy(const StudyEnvironment& env, size_t participants,
                                 uint64_t seed, int tukey_draws) {
  ConditionStudy study;
  std::vector<std::vector<double>> groups;
  const auto conditions = StudyConditions();
  for (size_t c = 0; c < conditions.size(); ++c) {
    CellConfig config;
    config.cell = conditions[c];
    config.participants = participants;
    config.seed = DeriveSeed(seed, {c});
    study.cells.push_back(RunCell(env, config));
    groups.push_back(study.cells.back().correctness);
  }
  study.anova = OneWayAnova(groups);
  study.tukey = TukeyHsd(groups, 0.05, tukey_draws, DeriveSeed(seed, {0x7c4}));
  return study;
}

std::vector<const CellResult*> SweepStudy::Series(const ConditionCell& cell) const {
  std::vector<const CellResult*> series;
  for (const auto& c : cells) {
    if (c.cell == cell) series.push_back(&c);
  }
  std::stable_sort(series.begin(), series.end(),
                   [](const CellResult* a, const CellResult* b) { return a->iv < b->iv; });
  return series;
}

SweepStudy RunTrainingSweep(const StudyEnvironment& env, int lo, int hi,
                            size_t participants, uint64_t seed) {
  if (lo < 1 || hi < lo) throw ConfigError("training sweep needs 1 <= lo <= hi");
  SweepStudy study;
  study.iv_name = "training_instances";
  const auto conditions = StudyConditions();
  for (size_t c = 0; c < conditions.size(); ++c) {
    const uint64_t cell_seed = DeriveSeed(seed, {c});
    const auto population = fitting::SamplePopulation(
        fitting::PublishedPopulationSpec(conditions[c].xai_type, conditions[c].condition),
        participants, DeriveSeed(cell_seed, {kPopulationStream}));
    for (int n = lo; n <= hi; ++n) {
      ProtocolConfig protocol;
      protocol.training_trials = static_cast<size_t>(n);
      CellResult cell = RunParticipants(env, conditions[c], population, cell_seed, protocol);
      cell.iv = n;
      study.cells.push_back(std::move(cell));
    }
  }
  return study;
}

SweepStudy RunAttributeSweep(const EnvironmentConfig& base, int lo, int hi,
                             size_t participants, uint64_t seed) {
  if (lo < 1 || hi < lo) throw ConfigError("attribute sweep needs 1 <= lo <= hi");
  SweepStudy study;
  study.iv_name = "attributes";
  const auto conditions = StudyConditions();
  std::vector<std::vector<cognitive::CognitiveParams>> populations;
  for (size_t c = 0; c < conditions.size(); ++c) {
    populations.push_back(fitting::SamplePopulation(
        fitting::PublishedPopulationSpec(conditions[c].xai_type, conditions[c].condition),
        participants, DeriveSeed(DeriveSeed(seed, {c}), {kPopulationStream})));
  }
  for (int n = lo; n <= hi; ++n) {
    EnvironmentConfig config = base;
    config.dataset = data::DatasetName::kSynthetic;
    config.num_attributes = static_cast<size_t>(n);
    config.csv_path.clear();
    const StudyEnvironment env = StudyEnvironment::Build(config);
    for (size_t c = 0; c < conditions.size(); ++c) {
      CellResult cell =
          RunParticipants(env, conditions[c], populations[c], DeriveSeed(seed, {c}));
      cell.iv = n;
      study.cells.push_back(std::move(cell));
    }
  }
  return study;
}

SweepStudy RunExplainerStudy(const StudyEnvironment& env,
                             const std::vector<xai::Method>& methods,
                             size_t participants, uint64_t seed) {
  SweepStudy study;
  study.iv_name = "explainer";
  const auto conditions = XaiConditions();
  std::vector<std::vector<cognitive::CognitiveParams>> populations;
  for (size_t c = 0; c < conditions.size(); ++c) {
    populations.push_back(fitting::SamplePopulation(
        fitting::PublishedPopulationSpec(conditions[c].xai_type, conditions[c].condition),
        participants, DeriveSeed(DeriveSeed(seed, {c}), {kPopulationStream})));
  }
  for (size_t m = 0; m < methods.size(); ++m) {
    xai::ExplainerConfig explainer = env.config().explainer;
    explainer.method = methods[m];
    const StudyEnvironment variant = env.WithExplainer(explainer);
    for (size_t c = 0; c < conditions.size(); ++c) {
      CellResult cell =
          RunParticipants(variant, conditions[c], populations[c], DeriveSeed(seed, {c}));
      cell.iv = static_cast<double>(m);
      study.cells.push_back(std::move(cell));
    }
  }
  return study;
}

std::string ToString(TrendParameter parameter) {
  switch (parameter) {
    case TrendParameter::kAlpha:
      return "alpha";
    case TrendParameter::kK:
      return "k";
    case TrendParameter::kRho:
      return "rho";
    case TrendParameter::kZeta:
      return "zeta";
  }
  return "unknown";
}

TrendParameter ParseTrendParameter(const std::string& text) {
  for (TrendParameter p : {TrendParameter::kAlpha, TrendParameter::kK,
                           TrendParameter::kRho, TrendParameter::kZeta}) {
    if (ToString(p) == text) return p;
  }
  throw ConfigError("unknown trend parameter '" + text + "'");
}

TrendStudy RunParameterTrend(const StudyEnvironment& env, TrendParameter parameter,
                             size_t bins, size_t per_bin, uint64_t seed) {
  if (bins < 2 || per_bin < 1) throw ConfigError("trend needs >= 2 bins and participants");
  const std::set<Strategy> using_parameter = StrategiesUsing(parameter);
  struct Usable {
    ConditionCell cell;
    fitting::PopulationSpec spec;
  };
  std::vector<Usable> usable;
  for (const auto& cell : StudyConditions()) {
    fitting::PopulationSpec spec = fitting::PublishedPopulationSpec(cell.xai_type, cell.condition);
    double total = 0.0;
    for (auto it = spec.prevalence.begin(); it != spec.prevalence.end();) {
      if (using_parameter.count(it->first) == 0 || it->second <= 0.0) {
        it = spec.prevalence.erase(it);
      } else {
        total += it->second;
        ++it;
      }
    }
    if (total <= 0.0) continue;
    for (auto& [strategy, weight] : spec.prevalence) weight /= total;
    usable.push_back({cell, std::move(spec)});
  }

  const cognitive::SearchBox box;
  const cognitive::Range range = RangeOf(parameter, box);
  const double width = (range.hi - range.lo) / static_cast<double>(bins);
  const size_t total = bins * per_bin;
  const auto splits = env.Splits(total, DeriveSeed(seed, {kSplitStream}));

  TrendStudy trend;
  trend.parameter = parameter;
  for (size_t b = 0; b < bins; ++b) {
    trend.bin_centers.push_back(range.lo + (static_cast<double>(b) + 0.5) * width);
    double sum = 0.0;
    for (size_t j = 0; j < per_bin; ++j) {
      const size_t i = b * per_bin + j;
      const Usable& u = usable[i % usable.size()];
      cognitive::CognitiveParams params =
          fitting::SamplePopulation(u.spec, 1, DeriveSeed(seed, {kPopulationStream, i}))[0];
      Rng rng(DeriveSeed(seed, {kValueStream, i}));
      const double value = range.lo + (static_cast<double>(b) + Uniform01(rng)) * width;
      SetParameter(params, parameter, value, box);
      const SessionRecord record =
          RunVirtualSession(params, splits[i], env, u.cell.xai_type,
                            DeriveSeed(seed, {kSessionStream, i}));
      const double correct = Correctness(record, u.cell.condition).value();
      trend.values.push_back(parameter == TrendParameter::kK ? params.k : value);
      trend.correctness.push_back(correct);
      sum += correct;
    }
    trend.bin_means.push_back(sum / static_cast<double>(per_bin));
  }
  trend.spearman = SpearmanRho(trend.values, trend.correctness);
  trend.bin_spearman = SpearmanRho(trend.bin_centers, trend.bin_means);
  return trend;
}

Json ToJson(const TrendStudy& trend) {
  return Json{{"parameter", ToString(trend.parameter)},
              {"spearman", trend.spearman},
              {"bin_spearman", trend.bin_spearman},
              {"bin_centers", trend.bin_centers},
              {"bin_means", trend.bin_means},
              {"values", trend.values},
              {"correctness", trend.correctness}};
}

}  // namespace coax::experiment
