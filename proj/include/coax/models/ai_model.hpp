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

#ifndef COAX_MODELS_AI_MODEL_HPP_
#define COAX_MODELS_AI_MODEL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "coax/common/jsonl.hpp"
#include "coax/common/types.hpp"
#include "coax/data/instance.hpp"
#include "coax/models/predictor.hpp"

namespace coax::models {

enum class ModelKind { kMlp, kLinear, kExternal };

struct MlpConfig {
  std::vector<int> hidden_units{50, 50};
  double learning_rate = 1e-3;
  int epochs = 1500;
  uint64_t seed = 1;
};

// Fully connected ReLU network with a sigmoid output unit.
struct MlpParameters {
  std::vector<Eigen::MatrixXd> weights;  // layer l: (out x in)
  std::vector<Eigen::VectorXd> biases;
};

struct LinearParameters {
  std::vector<double> weights;
  double bias = 0.0;
};

struct ExternalRecord {
  double proba_label2 = 0.5;
  std::optional<std::vector<double>> attribution;
};

struct ExternalParameters {
  std::map<std::string, ExternalRecord> records;
  size_t num_features = 0;
};

struct TrainingReport {
  MlpConfig config;
  std::vector<double> loss_history;  // mean binary cross-entropy per epoch
  double final_loss = 0.0;
};

// The model being explained and forward-simulated. Immutable once built.
class AiModel : public Predictor {
 public:
  static AiModel Mlp(MlpParameters parameters, TrainingReport report);
  static AiModel Linear(LinearParameters parameters);
  static AiModel External(ExternalParameters parameters);

  ModelKind kind() const;
  size_t num_features() const override;
  double ProbaLabel2(std::span<const double> x) const override;
  Eigen::VectorXd ProbaLabel2Batch(const Eigen::MatrixXd& inputs) const override;
  bool differentiable() const override { return kind() != ModelKind::kExternal; }
  std::vector<double> GradientLabel2(std::span<const double> x) const override;

  // External models answer by instance id; MLP/Linear use norm_values.
  double PredictProba(const data::Instance& instance) const;
  std::optional<std::vector<double>> ExternalAttribution(
      const std::string& instance_id) const;

  const MlpParameters& mlp() const { return std::get<MlpParameters>(params_); }
  const LinearParameters& linear() const {
    return std::get<LinearParameters>(params_);
  }
  const ExternalParameters& external() const {
    return std::get<ExternalParameters>(params_);
  }
  const std::optional<TrainingReport>& training_report() const {
    return report_;
  }

 private:
  using Parameters =
      std::variant<MlpParameters, LinearParameters, ExternalParameters>;
  explicit AiModel(Parameters params) : params_(std::move(params)) {}

  Parameters params_;
  std::optional<TrainingReport> report_;
};

// Output of one prediction: label 2 iff proba_label2 >= 0.5.
struct PredictionBundle {
  std::string instance_id;
  double proba_label2 = 0.5;
  Label label = Label::kTwo;
};

Label LabelFromProba(double proba_label2);
PredictionBundle Predict(const AiModel& model, const data::Instance& instance);
std::vector<double> Gradient(const AiModel& model,
                             const data::Instance& instance);

// Full-batch Adam on binary cross-entropy. Targets come from truth_label.
// Deterministic for a given config.seed. Throws TrainingError when only one
// class is present and ConfigError on a non-positive learning rate or epoch
// count.
AiModel TrainMlp(const std::vector<data::Instance>& training,
                 const MlpConfig& config);

double Accuracy(const AiModel& model, const std::vector<data::Instance>& data);

// Line-delimited {instance_id, proba, attribution?} records.
AiModel ImportExternal(const std::string& path);
AiModel ImportExternal(std::istream& in);
void ExportExternal(const AiModel& model, const std::string& path);

// JSON (de)serialization of MLP and Linear models for the CLI.
Json ModelToJson(const AiModel& model);
AiModel ModelFromJson(const Json& json);

}  // namespace coax::models

#endif  // COAX_MODELS_AI_MODEL_HPP_
