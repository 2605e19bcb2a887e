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

#include "coax/data/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "coax/common/error.hpp"
#include "coax/data/dataset.hpp"

namespace coax::data {

namespace {

struct DomainShape {
  std::vector<double> means;
  std::vector<double> sds;
  std::vector<double> weights;
  double interaction;
};

// Per-attribute location/spread in normalized units and logit weights.
DomainShape ShapeFor(const DatasetSpec& spec, uint64_t task_seed) {
  switch (spec.name) {
    case DatasetName::kWineQuality:
      // Vinegar Taint, SO2, pH, Sulphates, Alcohol
      return {{0.30, 0.28, 0.45, 0.25, 0.40},
              {0.13, 0.16, 0.14, 0.12, 0.18},
              {-4.0, -1.2, -0.8, 3.0, 6.0},
              3.0};
    case DatasetName::kAdultIncome:
      // Age, Years of Education, Married, Sex, Capital Gain
      return {{0.32, 0.62, 0.47, 0.67, 0.08},
              {0.19, 0.17, 0.0, 0.0, 0.16},
              {3.0, 5.0, 2.5, 0.8, 8.0},
              2.0};
    case DatasetName::kForestCover:
      // Elevation, Angle, Dist to Water, Dist to Road, Hillshade
      return {{0.55, 0.22, 0.19, 0.33, 0.85},
              {0.14, 0.11, 0.15, 0.22, 0.08},
              {-9.0, 1.0, -1.5, -2.0, 1.2},
              -2.5};
    case DatasetName::kSynthetic:
      break;
  }
  Rng rng(DeriveSeed(task_seed, {spec.num_attributes()}));
  DomainShape shape;
  for (size_t i = 0; i < spec.num_attributes(); ++i) {
    shape.means.push_back(0.5);
    shape.sds.push_back(0.22);
    const double magnitude = 2.0 + 2.0 * Uniform01(rng);
    shape.weights.push_back(Bernoulli(rng, 0.5) ? magnitude : -magnitude);
  }
  shape.interaction = spec.num_attributes() >= 2 ? 3.0 : 0.0;
  return shape;
}

}  // namespace

SyntheticTask::SyntheticTask(DatasetSpec spec, uint64_t task_seed)
    : spec_(std::move(spec)) {
  spec_.Validate();
  DomainShape shape = ShapeFor(spec_, task_seed);
  means_ = std::move(shape.means);
  sds_ = std::move(shape.sds);
  weights_ = std::move(shape.weights);
  interaction_ = shape.interaction;

  // Calibrate the intercept to the median logit of a fixed reference sample.
  Rng rng(DeriveSeed(task_seed, {0xca11b, spec_.num_attributes()}));
  std::vector<double> logits;
  for (int i = 0; i < 4096; ++i) logits.push_back(Logit(SampleNormalized(rng)));
  std::nth_element(logits.begin(), logits.begin() + 2048, logits.end());
  intercept_ = -logits[2048];
}

std::vector<double> SyntheticTask::SampleNormalized(Rng& rng) const {
  std::vector<double> norm(spec_.num_attributes());
  for (size_t i = 0; i < norm.size(); ++i) {
    if (spec_.attributes[i].kind == AttributeKind::kCategoricalBinary) {
      norm[i] = Bernoulli(rng, means_[i]) ? 1.0 : 0.0;
    } else {
      norm[i] = std::clamp(means_[i] + sds_[i] * StandardNormal(rng), 0.0, 1.0);
    }
  }
  return norm;
}

double SyntheticTask::Logit(std::span<const double> norm_values) const {
  if (norm_values.size() != weights_.size()) {
    throw ShapeError("synthetic task expects " +
                     std::to_string(weights_.size()) + " attributes");
  }
  double logit = intercept_;
  for (size_t i = 0; i < weights_.size(); ++i) {
    logit += weights_[i] * (norm_values[i] - means_[i]);
  }
  if (weights_.size() >= 2) {
    logit += interaction_ * (norm_values[0] - means_[0]) *
             (norm_values[weights_.size() - 1] - means_[weights_.size() - 1]);
  }
  return logit;
}

std::vector<Instance> SyntheticTask::Generate(size_t count,
                                              uint64_t seed) const {
  Rng rng(DeriveSeed(seed, {0x5e7}));
  std::vector<Instance> instances;
  instances.reserve(count);
  for (size_t n = 0; n < count; ++n) {
    Instance instance;
    instance.id = ToString(spec_.name) + "-" + std::to_string(n);
    const std::vector<double> norm = SampleNormalized(rng);
    for (size_t i = 0; i < norm.size(); ++i) {
      const auto& attribute = spec_.attributes[i];
      double raw = attribute.min + norm[i] * (attribute.max - attribute.min);
      if (attribute.kind == AttributeKind::kNumeric) {
        // Keep raw values at display precision (3 decimals).
        raw = std::round(raw * 1000.0) / 1000.0;
      }
      instance.raw_values.push_back(raw);
    }
    instance.norm_values = Normalize(instance.raw_values, spec_);
    double u = Uniform01(rng);
    u = std::clamp(u, 1e-12, 1.0 - 1e-12);
    const double noise = noise_scale_ * std::log(u / (1.0 - u));
    instance.truth_label =
        Logit(instance.norm_values) + noise >= 0.0 ? Label::kTwo : Label::kOne;
    instances.push_back(std::move(instance));
  }
  return instances;
}

}  // namespace coax::data
