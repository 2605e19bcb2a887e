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

#ifndef COAX_XAI_EXPLANATION_HPP_
#define COAX_XAI_EXPLANATION_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coax/common/jsonl.hpp"
#include "coax/common/types.hpp"
#include "coax/data/instance.hpp"
#include "coax/models/ai_model.hpp"
#include "coax/models/predictor.hpp"

namespace coax::xai {

enum class Method {
  kShapley,
  kLime,
  kIntegratedGradients,
  kInputGradients,
  kExternal
};

std::string ToString(Method method);
Method ParseMethod(const std::string& text);

// Signed per-feature scores oriented toward `target_label`: a positive entry
// supports the target. `importance` is always ReLU(attribution).
struct Explanation {
  Method method = Method::kShapley;
  std::vector<double> attribution;
  std::vector<double> importance;
  Label target_label = Label::kTwo;

  size_t num_features() const { return attribution.size(); }
  bool operator==(const Explanation&) const = default;
};

// Builds an explanation from label-2 oriented scores, flipping the sign when
// the target is label 1.
Explanation FromLabel2Scores(Method method, std::vector<double> label2_scores,
                             Label target_label);

// Recomputes importance = max(attribution, 0). Attribution is left alone.
Explanation ToImportance(Explanation explanation);

// Re-orients toward another label; every attribution entry changes sign.
Explanation Reorient(const Explanation& explanation, Label target_label);

// Attribution expressed toward label 1 regardless of the stored target.
std::vector<double> TowardLabel1(const Explanation& explanation);

// Scales so the largest magnitude is 1. All-zero input stays zero.
std::vector<double> DisplayScale(std::span<const double> values);

// Exact interventional Shapley values. The value of a coalition is the mean
// prediction over `background` rows with coalition features fixed to `x`.
Explanation ShapleyExact(const models::Predictor& model,
                         std::span<const double> x,
                         const Eigen::MatrixXd& background, Label target_label);

// v(empty coalition) for the same game, oriented toward label 2.
double ShapleyBaseValue(const models::Predictor& model,
                        const Eigen::MatrixXd& background);

struct LimeConfig {
  int n_samples = 2000;
  double kernel_width = 0.75;
  uint64_t seed = 1;
  // Perturbations are drawn per feature from N(center, scale^2). Empty
  // vectors mean "use the background mean and standard deviation".
  std::vector<double> center;
  std::vector<double> scale;
};

struct LimeSurrogate {
  std::vector<double> coefficients;  // label-2 score per unit of feature
  double intercept = 0.0;
  std::vector<double> sample_mean;
};

// Weighted ridge (1e-6) least squares on perturbed samples with weights
// exp(-||z - x||^2 / kernel_width^2).
LimeSurrogate FitLimeSurrogate(const models::Predictor& model,
                               std::span<const double> x,
                               const LimeConfig& config);
// attribution_r = coefficient_r * (x_r - mean sample_r).
Explanation LimeLocal(const models::Predictor& model, std::span<const double> x,
                      const LimeConfig& config, Label target_label);

// Midpoint Riemann sum of the path integral from `baseline` to `x`.
Explanation IntegratedGradients(const models::Predictor& model,
                                std::span<const double> x,
                                std::span<const double> baseline, int steps,
                                Label target_label);

// attribution_r = x_r * dP/dx_r at x.
Explanation InputGradients(const models::Predictor& model,
                           std::span<const double> x, Label target_label);

// Which explainer a study condition uses, and its settings.
struct ExplainerConfig {
  Method method = Method::kShapley;
  LimeConfig lime;
  int ig_steps = 256;
};

// Explains `instance` toward the model's predicted label. `background` is
// the reference set for Shapley, the LIME sampling distribution default and
// the mean baseline for Integrated Gradients. External models return their
// imported attribution.
Explanation Explain(const models::AiModel& model, const data::Instance& instance,
                    const ExplainerConfig& config,
                    const Eigen::MatrixXd& background);

Eigen::MatrixXd StackNormValues(std::span<const data::Instance> instances);

// {instance_id, method, target_label, attribution, importance}
Json ToJson(const std::string& instance_id, const Explanation& explanation);
Explanation ExplanationFromJson(const Json& record);

}  // namespace coax::xai

#endif  // COAX_XAI_EXPLANATION_HPP_
