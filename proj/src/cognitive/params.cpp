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

#include "coax/cognitive/params.hpp"

#include <cmath>

#include "coax/common/error.hpp"

namespace coax::cognitive {

std::string ToString(Strategy strategy) {
  switch (strategy) {
    case Strategy::kSensitiveFeatures:
      return "sensitive_features";
    case Strategy::kSalientFeatures:
      return "salient_features";
    case Strategy::kAttributionSum:
      return "attribution_sum";
    case Strategy::kImportanceCategorization:
      return "importance_categorization";
    case Strategy::kRandom:
      return "random";
  }
  return "unknown";
}

Strategy ParseStrategy(const std::string& text) {
  for (Strategy s : kAllStrategies) {
    if (ToString(s) == text) return s;
  }
  throw ConfigError("unknown strategy '" + text + "'");
}

int FreeParameterCount(Strategy strategy) {
  return strategy == Strategy::kRandom ? 0 : 3;
}

bool InsideBox(const CognitiveParams& params, const SearchBox& box) {
  return box.alpha.Contains(params.alpha) && box.k.Contains(params.k) &&
         box.rho.Contains(params.rho) && box.zeta.Contains(params.zeta) &&
         params.lambda == kDecayRate;
}

CognitiveParams MidBoxParams(Strategy strategy, const SearchBox& box) {
  CognitiveParams params;
  params.alpha = box.alpha.Mid();
  params.rho = box.rho.Mid();
  params.k = static_cast<int>(std::floor(box.k.Mid() + 0.5));
  params.zeta = box.zeta.Mid();
  params.strategy = strategy;
  return params;
}

Json ToJson(const CognitiveParams& params) {
  return Json{{"alpha", params.alpha},   {"rho", params.rho},
              {"k", params.k},           {"zeta", params.zeta},
              {"lambda", params.lambda}, {"strategy", ToString(params.strategy)}};
}

CognitiveParams ParamsFromJson(const Json& json) {
  CognitiveParams params;
  params.alpha = json.at("alpha").get<double>();
  params.rho = json.at("rho").get<double>();
  params.k = json.at("k").get<int>();
  params.zeta = json.at("zeta").get<double>();
  params.lambda = json.value("lambda", kDecayRate);
  params.strategy = ParseStrategy(json.at("strategy").get<std::string>());
  if (params.k < 1) throw ValidationError("k must be >= 1");
  return params;
}

}  // namespace coax::cognitive
