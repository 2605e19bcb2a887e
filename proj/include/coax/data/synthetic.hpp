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

#ifndef COAX_DATA_SYNTHETIC_HPP_
#define COAX_DATA_SYNTHETIC_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "coax/common/random.hpp"

#include "coax/data/dataset_spec.hpp"
#include "coax/data/instance.hpp"

namespace coax::data {

// Seeded stand-in populations for the built-in datasets. Attribute values
// follow per-attribute clipped Gaussians in normalized space and labels come
// from a fixed domain-flavoured logit (e.g. wine quality rises with alcohol
// and sulphates, falls with vinegar taint) plus logistic noise. The intercept
// is calibrated so both classes are roughly equally frequent.
//
// For DatasetName::kSynthetic the logit is a random signed linear
// combination of all attributes (weights derived from `task_seed`) plus one
// pairwise interaction, so every attribute matters.
class SyntheticTask {
 public:
  SyntheticTask(DatasetSpec spec, uint64_t task_seed = 7);

  const DatasetSpec& spec() const { return spec_; }
  double Logit(std::span<const double> norm_values) const;
  std::vector<Instance> Generate(size_t count, uint64_t seed) const;

 private:
  std::vector<double> SampleNormalized(Rng& rng) const;

  DatasetSpec spec_;
  std::vector<double> means_;
  std::vector<double> sds_;
  std::vector<double> weights_;
  double interaction_ = 0.0;
  double intercept_ = 0.0;
  double noise_scale_ = 0.35;
};

}  // namespace coax::data

#endif  // COAX_DATA_SYNTHETIC_HPP_
