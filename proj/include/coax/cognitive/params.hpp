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

#ifndef COAX_COGNITIVE_PARAMS_HPP_
#define COAX_COGNITIVE_PARAMS_HPP_

#include <array>
#include <string>

#include "coax/common/jsonl.hpp"

namespace coax::cognitive {

enum class Strategy {
  kSensitiveFeatures,
  kSalientFeatures,
  kAttributionSum,
  kImportanceCategorization,
  kRandom
};

// Fixed order used for deterministic tie-breaks and reports.
inline constexpr std::array<Strategy, 5> kAllStrategies = {
    Strategy::kSensitiveFeatures, Strategy::kSalientFeatures,
    Strategy::kAttributionSum, Strategy::kImportanceCategorization,
    Strategy::kRandom};

std::string ToString(Strategy strategy);
Strategy ParseStrategy(const std::string& text);

// Free parameters counted by BIC.
int FreeParameterCount(Strategy strategy);

inline constexpr double kDecayRate = 0.5;
// Distance sensitivity of the single-feature recall inside AttributionSum,
// which has no alpha of its own. Midpoint of the alpha range.
inline constexpr double kAttributionRecallAlpha = 20.5;

struct Range {
  double lo;
  double hi;
  bool Contains(double v) const { return v >= lo && v <= hi; }
  double Mid() const { return 0.5 * (lo + hi); }
};

struct SearchBox {
  Range alpha{1.0, 40.0};
  Range k{1.0, 4.0};
  Range rho{-2.8, -1.5};
  Range zeta{0.1, 5.0};
};

struct CognitiveParams {
  double alpha = 20.5;
  double rho = -2.15;
  int k = 3;
  double zeta = 2.55;
  double lambda = kDecayRate;
  Strategy strategy = Strategy::kSensitiveFeatures;

  bool operator==(const CognitiveParams&) const = default;
};

bool InsideBox(const CognitiveParams& params, const SearchBox& box = {});
// Box midpoint with k rounded half up.
CognitiveParams MidBoxParams(Strategy strategy, const SearchBox& box = {});

Json ToJson(const CognitiveParams& params);
CognitiveParams ParamsFromJson(const Json& json);

}  // namespace coax::cognitive

#endif  // COAX_COGNITIVE_PARAMS_HPP_
