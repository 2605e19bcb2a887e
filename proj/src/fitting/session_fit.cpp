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

#include "coax/fitting/session_fit.hpp"

#include <algorithm>
#include <cmath>

#include "coax/common/error.hpp"
#include "coax/fitting/bayes_opt.hpp"

namespace coax::fitting {

using cognitive::CognitiveParams;
using cognitive::Strategy;

namespace {

PreparedTrial Prepare(const data::Instance& instance,
                      const std::optional<xai::Explanation>& explanation,
                      XaiType xai_type, int trial, Label ai_label) {
  PreparedTrial p;
  p.x = instance.norm_values;
  p.shown = experiment::Perceive(explanation, xai_type);
  p.trial = trial;
  p.ai_label = ai_label;
  return p;
}

// Decisions only use the coin flip for labels; probabilities are unaffected.
Rng& TieRng() {
  thread_local Rng rng(0x7e);
  return rng;
}

}  // namespace

PreparedSession PrepareSession(const experiment::SessionRecord& record,
                               TestCondition condition) {
  PreparedSession session;
  session.session_id = record.session_id();
  session.xai_type = record.xai_type;
  session.condition = condition;
  for (const auto& t : record.training) {
    session.training.push_back(Prepare(t.instance, t.explanation, record.xai_type,
                                       t.trial_index, t.ai_label));
  }
  for (const auto& t : record.test) {
    if (t.condition != condition || !t.decision) continue;
    PreparedTrial p = Prepare(t.instance, t.explanation, record.xai_type,
                              t.trial_index, t.ai_label);
    p.observed = t.decision;
    session.scored.push_back(std::move(p));
  }
  return session;
}

cognitive::Memory ReplayTraining(const CognitiveParams& params,
                                 const PreparedSession& session) {
  cognitive::Memory memory;
  for (const auto& t : session.training) {
    cognitive::EncodeTrial(memory, t.x, t.shown ? &*t.shown : nullptr, t.ai_label,
                           t.trial, params);
  }
  return memory;
}

std::vector<double> ObservedProbabilities(const CognitiveParams& params,
                                          const PreparedSession& session) {
  std::vector<double> probabilities;
  probabilities.reserve(session.scored.size());
  if (params.strategy == Strategy::kRandom) {
    probabilities.assign(session.scored.size(), 0.5);
    return probabilities;
  }
  const cognitive::Memory memory = ReplayTraining(params, session);
  for (const auto& t : session.scored) {
    const cognitive::Stimulus stimulus{t.x, t.shown ? &*t.shown : nullptr, t.trial};
    const double p1 = cognitive::Decide(stimulus, memory, params, TieRng()).proba_label1;
    probabilities.push_back(*t.observed == Label::kOne ? p1 : 1.0 - p1);
  }
  return probabilities;
}

double MeanNll(std::span<const double> observed_probabilities) {
  if (observed_probabilities.empty()) {
    throw ContractViolation("likelihood needs at least one scored trial");
  }
  double total = 0.0;
  for (double p : observed_probabilities) {
    total -= std::log(std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor));
  }
  return total / static_cast<double>(observed_probabilities.size());
}

double SessionNll(const CognitiveParams& params, const PreparedSession& session) {
  if (session.scored.empty()) {
    throw ContractViolation("session " + session.session_id + " has no scored trials");
  }
  return MeanNll(ObservedProbabilities(params, session));
}

double Bic(double nll, int n, int free_parameters) {
  return 2.0 * n * nll + free_parameters * std::log(static_cast<double>(n));
}

Json ToJson(const SessionFit& fit) {
  return Json{{"session_id", fit.session_id},
              {"condition", ToString(fit.condition)},
              {"strategy", cognitive::ToString(fit.strategy)},
              {"params", cognitive::ToJson(fit.params)},
              {"nll", fit.nll},
              {"bic", fit.bic},
              {"n_trials", fit.n_trials},
              {"evaluations", fit.evaluations},
              {"gp_fallback", fit.gp_fallback}};
}

SessionFit SessionFitFromJson(const Json& json) {
  SessionFit fit;
  fit.session_id = json.at("session_id").get<std::string>();
  fit.condition = ParseTestCondition(json.at("condition").get<std::string>());
  fit.strategy = cognitive::ParseStrategy(json.at("strategy").get<std::string>());
  fit.params = cognitive::ParamsFromJson(json.at("params"));
  fit.nll = json.at("nll").get<double>();
  fit.bic = json.at("bic").get<double>();
  fit.n_trials = json.at("n_trials").get<int>();
  fit.evaluations = json.value("evaluations", 0);
  fit.gp_fallback = json.value("gp_fallback", false);
  return fit;
}

CognitiveParams ParamsFromUnit(Strategy strategy, std::span<const double> unit,
                               const cognitive::SearchBox& box) {
  CognitiveParams params = cognitive::MidBoxParams(strategy, box);
  auto lerp = [](const cognitive::Range& r, double u) { return r.lo + u * (r.hi - r.lo); };
  auto to_k = [&](double u) {
    return static_cast<int>(std::lround(lerp(box.k, Snap(u, {static_cast<int>(box.k.hi - box.k.lo) + 1}))));
  };
  if (strategy == Strategy::kRandom) return params;
  if (unit.size() != 3) throw ShapeError("strategy search space is 3-dimensional");
  if (strategy == Strategy::kAttributionSum) {
    params.k = to_k(unit[0]);
    params.rho = lerp(box.rho, unit[1]);
    params.zeta = lerp(box.zeta, unit[2]);
  } else {
    params.alpha = lerp(box.alpha, unit[0]);
    params.rho = lerp(box.rho, unit[1]);
    params.k = to_k(unit[2]);
  }
  return params;
}

SessionFit FitSession(const PreparedSession& session, Strategy strategy,
                      const FitConfig& config) {
  if (session.scored.empty()) {
    throw ContractViolation("session " + session.session_id + " has no scored trials");
  }
  SessionFit fit;
  fit.session_id = session.session_id;
  fit.condition = session.condition;
  fit.strategy = strategy;
  fit.n_trials = static_cast<int>(session.scored.size());
  if (strategy == Strategy::kRandom) {
    fit.params = cognitive::MidBoxParams(strategy, config.box);
    fit.nll = std::log(2.0);
  } else {
    if (config.budget < 20) throw ConfigError("fitting budget must be >= 20");
    const int k_levels = static_cast<int>(config.box.k.hi - config.box.k.lo) + 1;
    std::vector<Dimension> dims(3);
    dims[strategy == Strategy::kAttributionSum ? 0 : 2].levels = k_levels;
    const BoResult bo = MinimizeBo(
        [&](std::span<const double> u) {
          return SessionNll(ParamsFromUnit(strategy, u, config.box), session);
        },
        dims, {config.budget, config.seed});
    fit.params = ParamsFromUnit(strategy, bo.best_point, config.box);
    fit.nll = bo.best_value;
    fit.evaluations = static_cast<int>(bo.values.size());
    fit.gp_fallback = bo.gp_fallback;
  }
  fit.bic = Bic(fit.nll, fit.n_trials, cognitive::FreeParameterCount(strategy));
  return fit;
}

std::vector<Strategy> CandidateStrategies(XaiType xai_type, TestCondition condition) {
  const XaiType shown =
      condition == TestCondition::kWithXai ? xai_type : XaiType::kNone;
  std::vector<Strategy> candidates;
  for (Strategy s : cognitive::kAllStrategies) {
    if (cognitive::StrategyApplicable(s, xai_type, shown)) candidates.push_back(s);
  }
  return candidates;
}

StrategySelection SelectStrategy(const PreparedSession& session,
                                 const FitConfig& config) {
  const auto candidates = CandidateStrategies(session.xai_type, session.condition);
  return SelectStrategy(session, config, candidates);
}

StrategySelection SelectStrategy(const PreparedSession& session,
                                 const FitConfig& config,
                                 std::span<const Strategy> candidates) {
  if (candidates.empty()) throw ConfigError("no candidate strategies");
  StrategySelection selection;
  for (Strategy s : candidates) {
    FitConfig per_strategy = config;
    per_strategy.seed = DeriveSeed(config.seed, {static_cast<uint64_t>(s)});
    selection.candidates.push_back(FitSession(session, s, per_strategy));
  }
  auto rank = [](const SessionFit& f) {
    const auto order = std::find(cognitive::kAllStrategies.begin(),
                                 cognitive::kAllStrategies.end(), f.strategy) -
                       cognitive::kAllStrategies.begin();
    return std::make_tuple(f.bic, cognitive::FreeParameterCount(f.strategy), order);
  };
  selection.best = *std::min_element(
      selection.candidates.begin(), selection.candidates.end(),
      [&](const SessionFit& a, const SessionFit& b) { return rank(a) < rank(b); });
  return selection;
}

}  // namespace coax::fitting
