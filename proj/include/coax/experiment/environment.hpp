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

#ifndef COAX_EXPERIMENT_ENVIRONMENT_HPP_
#define COAX_EXPERIMENT_ENVIRONMENT_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coax/data/dataset_spec.hpp"
#include "coax/data/instance.hpp"
#include "coax/data/splits.hpp"
#include "coax/models/ai_model.hpp"
#include "coax/xai/explanation.hpp"

namespace coax::experiment {

struct EnvironmentConfig {
  data::DatasetName dataset = data::DatasetName::kWineQuality;
  size_t num_attributes = 5;  // only for kSynthetic
  std::string csv_path;       // load real rows instead of the synthetic task
  size_t model_training_size = 600;
  size_t pool_size = 300;
  size_t background_size = 32;
  models::MlpConfig mlp;
  xai::ExplainerConfig explainer;
  uint64_t seed = 1;
};

// A trained AI model, the stimulus pool it labels and one explanation per
// pool instance. Immutable after Build.
class StudyEnvironment {
 public:
  static StudyEnvironment Build(const EnvironmentConfig& config);

  // Same model and pool, explanations recomputed with `explainer`.
  StudyEnvironment WithExplainer(const xai::ExplainerConfig& explainer) const;

  const EnvironmentConfig& config() const { return config_; }
  const data::DatasetSpec& spec() const { return spec_; }
  const models::AiModel& model() const { return model_; }
  const std::vector<data::Instance>& pool() const { return pool_; }
  const Eigen::MatrixXd& background() const { return background_; }
  // Held-out accuracy of the model against truth labels of the pool.
  double model_accuracy() const { return accuracy_; }

  Label AiLabel(const std::string& instance_id) const;
  const xai::Explanation& ExplanationFor(const std::string& instance_id) const;

  std::vector<data::StudySplit> Splits(size_t sessions, uint64_t seed,
                                       const data::SplitOptions& options = {}) const;

 private:
  StudyEnvironment(EnvironmentConfig config, data::DatasetSpec spec,
                   models::AiModel model)
      : config_(std::move(config)), spec_(std::move(spec)), model_(std::move(model)) {}
  void ComputeExplanations();

  EnvironmentConfig config_;
  data::DatasetSpec spec_;
  models::AiModel model_;
  std::vector<data::Instance> pool_;
  Eigen::MatrixXd background_;
  double accuracy_ = 0.0;
  std::map<std::string, Label> ai_labels_;
  std::map<std::string, xai::Explanation> explanations_;
};

}  // namespace coax::experiment

#endif  // COAX_EXPERIMENT_ENVIRONMENT_HPP_
