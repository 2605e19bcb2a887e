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

#include "coax/experiment/environment.hpp"

#include <algorithm>

#include "coax/common/error.hpp"
#include "coax/common/random.hpp"
#include "coax/data/dataset.hpp"
#include "coax/data/synthetic.hpp"

namespace coax::experiment {

StudyEnvironment StudyEnvironment::Build(const EnvironmentConfig& config) {
  const data::DatasetSpec spec = config.dataset == data::DatasetName::kSynthetic
                                     ? data::SyntheticSpec(config.num_attributes)
                                     : data::BuiltinSpec(config.dataset);
  std::vector<data::Instance> rows;
  const size_t wanted = config.model_training_size + config.pool_size;
  if (!config.csv_path.empty()) {
    rows = data::LoadDataset(config.csv_path, spec);
    Rng rng(DeriveSeed(config.seed, {0xc5f}));
    Shuffle(rows, rng);
    if (rows.size() < wanted) {
      throw CapacityError("dataset has " + std::to_string(rows.size()) +
                          " rows, need " + std::to_string(wanted));
    }
    rows.resize(wanted);
  } else {
    const data::SyntheticTask task(spec, DeriveSeed(config.seed, {0x7a5}));
    rows = task.Generate(wanted, DeriveSeed(config.seed, {0x9e7}));
  }
  std::vector<data::Instance> training(rows.begin(),
                                       rows.begin() + config.model_training_size);
  models::MlpConfig mlp = config.mlp;
  mlp.seed = DeriveSeed(config.seed, {mlp.seed});
  StudyEnvironment env(config, spec, models::TrainMlp(training, mlp));
  env.pool_.assign(rows.begin() + config.model_training_size, rows.end());
  env.accuracy_ = models::Accuracy(env.model_, env.pool_);
  const size_t bg = std::min(config.background_size, training.size());
  env.background_ = xai::StackNormValues(std::span(training).first(bg));
  for (const auto& instance : env.pool_) {
    env.ai_labels_[instance.id] = models::Predict(env.model_, instance).label;
  }
  env.ComputeExplanations();
  return env;
}

StudyEnvironment StudyEnvironment::WithExplainer(
    const xai::ExplainerConfig& explainer) const {
  StudyEnvironment copy = *this;
  copy.config_.explainer = explainer;
  copy.ComputeExplanations();
  return copy;
}

void StudyEnvironment::ComputeExplanations() {
  explanations_.clear();
  for (const auto& instance : pool_) {
    xai::ExplainerConfig per_instance = config_.explainer;
    per_instance.lime.seed = DeriveSeed(config_.explainer.lime.seed,
                                        {HashString(instance.id)});
    explanations_.emplace(instance.id,
                          xai::Explain(model_, instance, per_instance, background_));
  }
}

Label StudyEnvironment::AiLabel(const std::string& instance_id) const {
  const auto it = ai_labels_.find(instance_id);
  if (it == ai_labels_.end()) throw LookupError("instance '" + instance_id + "' not in pool");
  return it->second;
}

const xai::Explanation& StudyEnvironment::ExplanationFor(
    const std::string& instance_id) const {
  const auto it = explanations_.find(instance_id);
  if (it == explanations_.end()) {
    throw LookupError("no explanation for instance '" + instance_id + "'");
  }
  return it->second;
}

std::vector<data::StudySplit> StudyEnvironment::Splits(
    size_t sessions, uint64_t seed, const data::SplitOptions& options) const {
  return data::MakeSplits(pool_, sessions, seed, options);
}

}  // namespace coax::experiment
