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

#ifndef COAX_FITTING_POPULATION_HPP_
#define COAX_FITTING_POPULATION_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coax/cognitive/params.hpp"
#include "coax/common/jsonl.hpp"
#include "coax/common/random.hpp"
#include "coax/common/types.hpp"

namespace coax::fitting {

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

// Unset parameters are held at the box midpoint.
struct ParameterMoments {
  std::optional<Moments> alpha;
  std::optional<Moments> k;
  std::optional<Moments> rho;
  std::optional<Moments> zeta;
};

struct PopulationSpec {
  std::map<cognitive::Strategy, double> prevalence;
  std::map<cognitive::Strategy, ParameterMoments> parameters;
  cognitive::SearchBox box;

  // Throws ValidationError on negative weights, weights not summing to 1,
  // or a negative standard deviation.
  void Validate() const;
};

// Gaussian with mean/sd truncated to [lo, hi], sampled by inverse CDF.
// sd == 0 returns the mean clamped to the interval.
double SampleTruncatedNormal(const Moments& moments, double lo, double hi,
                             Rng& rng);
// E[X] for the same truncated distribution.
double TruncatedNormalMean(const Moments& moments, double lo, double hi);

// Continuous parameters are truncated to the box. k is truncated to
// [k_lo - 0.5, k_hi + 0.5] and rounded so each integer gets a full cell.
std::vector<cognitive::CognitiveParams> SamplePopulation(
    const PopulationSpec& spec, size_t size, uint64_t seed);

// Published per-strategy fitted means and SDs.
std::map<cognitive::Strategy, ParameterMoments> PublishedParameterMoments();

inline constexpr double kPublishedRandomShare = 0.142;

// Strategy mix for one study condition, with the published Random share.
std::map<cognitive::Strategy, double> PublishedPrevalence(XaiType xai_type,
                                                      TestCondition condition);
PopulationSpec PublishedPopulationSpec(XaiType xai_type, TestCondition condition);

// One strategy with the given moments.
PopulationSpec SingleStrategySpec(cognitive::Strategy strategy,
                                  const ParameterMoments& moments);

Json ToJson(const PopulationSpec& spec);
PopulationSpec PopulationSpecFromJson(const Json& json);

}  // namespace coax::fitting

#endif  // COAX_FITTING_POPULATION_HPP_
