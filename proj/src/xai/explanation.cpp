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

#include "coax/xai/explanation.hpp"

#include <algorithm>
#include <cmath>

#include "coax/common/error.hpp"
#include "coax/common/random.hpp"

namespace coax::xai {

namespace {

void CheckWidth(const models::Predictor& model, size_t width) {
  if (model.num_features() != width) {
    throw ShapeError("explainer input has " + std::to_string(width) +
                     " features, model expects " +
                     std::to_string(model.num_features()));
  }
}

void RequireDifferentiable(const models::Predictor& model) {
  if (!model.differentiable()) {
    throw UnsupportedError("gradient explainers need a differentiable model");
  }
}

Eigen::RowVectorXd ColumnMean(const Eigen::MatrixXd& rows) {
  return rows.colwise().mean();
}

}  // namespace

std::string ToString(Method method) {
  switch (method) {
    case Method::kShapley:
      return "shapley";
    case Method::kLime:
      return "lime";
    case Method::kIntegratedGradients:
      return "integrated_gradients";
    case Method::kInputGradients:
      return "input_gradients";
    case Method::kExternal:
      return "external";
  }
  return "unknown";
}

Method ParseMethod(const std::string& text) {
  for (Method m : {Method::kShapley, Method::kLime, Method::kIntegratedGradients,
                   Method::kInputGradients, Method::kExternal}) {
    if (ToString(m) == text) return m;
  }
  throw ConfigError("unknown explanation method '" + text + "'");
}

Explanation FromLabel2Scores(Method method, std::vector<double> label2_scores,
                             Label target_label) {
  Explanation e;
  e.method = method;
  e.target_label = target_label;
  if (target_label == Label::kOne) {
    for (double& v : label2_scores) v = -v;
  }
  e.attribution = std::move(label2_scores);
  return ToImportance(std::move(e));
}

Explanation ToImportance(Explanation explanation) {
  explanation.importance.resize(explanation.attribution.size());
  for (size_t r = 0; r < explanation.attribution.size(); ++r) {
    explanation.importance[r] = std::max(explanation.attribution[r], 0.0);
  }
  return explanation;
}

Explanation Reorient(const Explanation& explanation, Label target_label) {
  if (target_label == explanation.target_label) return explanation;
  Explanation flipped = explanation;
  flipped.target_label = target_label;
  for (double& v : flipped.attribution) v = -v;
  return ToImportance(std::move(flipped));
}

std::vector<double> TowardLabel1(const Explanation& explanation) {
  return Reorient(explanation, Label::kOne).attribution;
}

std::vector<double> DisplayScale(std::span<const double> values) {
  double largest = 0.0;
  for (double v : values) largest = std::max(largest, std::abs(v));
  std::vector<double> scaled(values.begin(), values.end());
  if (largest > 0.0) {
    for (double& v : scaled) v /= largest;
  }
  return scaled;
}

double ShapleyBaseValue(const models::Predictor& model,
                        const Eigen::MatrixXd& background) {
  if (background.rows() == 0) throw ConfigError("empty Shapley background");
  return model.ProbaLabel2Batch(background).mean();
}

Explanation ShapleyExact(const models::Predictor& model,
                         std::span<const double> x,
                         const Eigen::MatrixXd& background, Label target_label) {
  CheckWidth(model, x.size());
  if (background.rows() == 0) throw ConfigError("empty Shapley background");
  if (static_cast<size_t>(background.cols()) != x.size()) {
    throw ShapeError("background width differs from instance width");
  }
  const size_t n = x.size();
  if (n > 20) throw ConfigError("exact Shapley supports at most 20 features");

  const size_t coalitions = size_t{1} << n;
  std::vector<double> value(coalitions);
  Eigen::MatrixXd rows = background;
  for (size_t mask = 0; mask < coalitions; ++mask) {
    rows = background;
    for (size_t r = 0; r < n; ++r) {
      if (mask & (size_t{1} << r)) rows.col(static_cast<Eigen::Index>(r)).setConstant(x[r]);
    }
    value[mask] = model.ProbaLabel2Batch(rows).mean();
  }

  // weight[s] = s! (n - s - 1)! / n!
  std::vector<double> weight(n);
  for (size_t s = 0; s < n; ++s) {
    weight[s] = std::exp(std::lgamma(s + 1.0) + std::lgamma(double(n - s)) -
                         std::lgamma(n + 1.0));
  }
  std::vector<double> phi(n, 0.0);
  for (size_t mask = 0; mask < coalitions; ++mask) {
    const size_t size = static_cast<size_t>(__builtin_popcountll(mask));
    for (size_t r = 0; r < n; ++r) {
      const size_t bit = size_t{1} << r;
      if (mask & bit) continue;
      phi[r] += weight[size] * (value[mask | bit] - value[mask]);
    }
  }
  return FromLabel2Scores(Method::kShapley, std::move(phi), target_label);
}

LimeSurrogate FitLimeSurrogate(const models::Predictor& model,
                               std::span<const double> x,
                               const LimeConfig& config) {
  CheckWidth(model, x.size());
  if (config.n_samples < 50) throw ConfigError("LIME needs at least 50 samples");
  if (!(config.kernel_width > 0.0)) {
    throw ConfigError("LIME kernel width must be positive");
  }
  const size_t n = x.size();
  if (config.center.size() != n || config.scale.size() != n) {
    throw ConfigError("LIME center and scale must match the feature count");
  }
  Rng rng(DeriveSeed(config.seed, {0x11e}));
  const Eigen::Index m = config.n_samples;
  Eigen::MatrixXd samples(m, static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (size_t r = 0; r < n; ++r) {
      samples(i, r) = config.center[r] + config.scale[r] * StandardNormal(rng);
    }
  }
  const Eigen::VectorXd target = model.ProbaLabel2Batch(samples);
  Eigen::VectorXd weights(m);
  const double width2 = config.kernel_width * config.kernel_width;
  for (Eigen::Index i = 0; i < m; ++i) {
    double d2 = 0.0;
    for (size_t r = 0; r < n; ++r) d2 += std::pow(samples(i, r) - x[r], 2);
    weights[i] = std::exp(-d2 / width2);
  }
  Eigen::MatrixXd design(m, static_cast<Eigen::Index>(n) + 1);
  design.col(0).setOnes();
  design.rightCols(static_cast<Eigen::Index>(n)) = samples;
  const Eigen::MatrixXd weighted = design.transpose() * weights.asDiagonal();
  Eigen::MatrixXd normal = weighted * design;
  normal.diagonal().array() += 1e-6;
  const Eigen::VectorXd beta = normal.ldlt().solve(weighted * target);

  LimeSurrogate surrogate;
  surrogate.intercept = beta[0];
  const Eigen::RowVectorXd mean = ColumnMean(samples);
  for (size_t r = 0; r < n; ++r) {
    surrogate.coefficients.push_back(beta[static_cast<Eigen::Index>(r) + 1]);
    surrogate.sample_mean.push_back(mean[static_cast<Eigen::Index>(r)]);
  }
  return surrogate;
}

Explanation LimeLocal(const models::Predictor& model, std::span<const double> x,
                      const LimeConfig& config, Label target_label) {
  const LimeSurrogate surrogate = FitLimeSurrogate(model, x, config);
  std::vector<double> scores(x.size());
  for (size_t r = 0; r < x.size(); ++r) {
    scores[r] = surrogate.coefficients[r] * (x[r] - surrogate.sample_mean[r]);
  }
  return FromLabel2Scores(Method::kLime, std::move(scores), target_label);
}

Explanation IntegratedGradients(const models::Predictor& model,
                                std::span<const double> x,
                                std::span<const double> baseline, int steps,
                                Label target_label) {
  CheckWidth(model, x.size());
  RequireDifferentiable(model);
  if (baseline.size() != x.size()) throw ShapeError("baseline width mismatch");
  if (steps < 16) throw ConfigError("integrated gradients needs >= 16 steps");
  const size_t n = x.size();
  std::vector<double> mean_grad(n, 0.0);
  std::vector<double> point(n);
  for (int s = 0; s < steps; ++s) {
    const double t = (s + 0.5) / steps;
    for (size_t r = 0; r < n; ++r) point[r] = baseline[r] + t * (x[r] - baseline[r]);
    const std::vector<double> grad = model.GradientLabel2(point);
    for (size_t r = 0; r < n; ++r) mean_grad[r] += grad[r];
  }
  std::vector<double> scores(n);
  for (size_t r = 0; r < n; ++r) {
    scores[r] = (x[r] - baseline[r]) * mean_grad[r] / steps;
  }
  return FromLabel2Scores(Method::kIntegratedGradients, std::move(scores),
                          target_label);
}

Explanation InputGradients(const models::Predictor& model,
                           std::span<const double> x, Label target_label) {
  CheckWidth(model, x.size());
  RequireDifferentiable(model);
  std::vector<double> scores = model.GradientLabel2(x);
  for (size_t r = 0; r < x.size(); ++r) scores[r] *= x[r];
  return FromLabel2Scores(Method::kInputGradients, std::move(scores),
                          target_label);
}

Explanation Explain(const models::AiModel& model, const data::Instance& instance,
                    const ExplainerConfig& config,
                    const Eigen::MatrixXd& background) {
  const Label target = models::Predict(model, instance).label;
  if (model.kind() == models::ModelKind::kExternal) {
    auto stored = model.ExternalAttribution(instance.id);
    if (!stored) {
      throw LookupError("external record '" + instance.id +
                        "' carries no attribution");
    }
    return FromLabel2Scores(Method::kExternal, std::move(*stored), target);
  }
  const std::span<const double> x = instance.norm_values;
  switch (config.method) {
    case Method::kShapley:
      return ShapleyExact(model, x, background, target);
    case Method::kLime: {
      LimeConfig lime = config.lime;
      if (lime.center.empty() || lime.scale.empty()) {
        if (background.rows() < 2) {
          throw ConfigError("LIME defaults need a background of >= 2 rows");
        }
        const Eigen::RowVectorXd mean = ColumnMean(background);
        const Eigen::RowVectorXd sd =
            ((background.rowwise() - mean).array().square().colwise().sum() /
             double(background.rows() - 1))
                .sqrt();
        lime.center.assign(mean.data(), mean.data() + mean.size());
        lime.scale.clear();
        for (Eigen::Index r = 0; r < sd.size(); ++r) {
          lime.scale.push_back(std::max(sd[r], 1e-3));
        }
      }
      return LimeLocal(model, x, lime, target);
    }
    case Method::kIntegratedGradients: {
      if (background.rows() == 0) throw ConfigError("empty IG background");
      const Eigen::RowVectorXd mean = ColumnMean(background);
      const std::vector<double> baseline(mean.data(), mean.data() + mean.size());
      return IntegratedGradients(model, x, baseline, config.ig_steps, target);
    }
    case Method::kInputGradients:
      return InputGradients(model, x, target);
    case Method::kExternal:
      break;
  }
  throw ConfigError("external explanations need an external model");
}

Eigen::MatrixXd StackNormValues(std::span<const data::Instance> instances) {
  if (instances.empty()) return {};
  const size_t n = instances.front().num_features();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(instances.size()),
                       static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < instances.size(); ++i) {
    if (instances[i].num_features() != n) throw ShapeError("ragged instances");
    for (size_t r = 0; r < n; ++r) rows(i, r) = instances[i].norm_values[r];
  }
  return rows;
}

Json ToJson(const std::string& instance_id, const Explanation& explanation) {
  return Json{{"instance_id", instance_id},
              {"method", ToString(explanation.method)},
              {"target_label", ToInt(explanation.target_label)},
              {"attribution", explanation.attribution},
              {"importance", explanation.importance}};
}

Explanation ExplanationFromJson(const Json& record) {
  Explanation e;
  e.method = ParseMethod(record.at("method").get<std::string>());
  e.target_label = LabelFromInt(record.at("target_label").get<int>());
  e.attribution = record.at("attribution").get<std::vector<double>>();
  e = ToImportance(std::move(e));
  if (record.contains("importance") &&
      record.at("importance").get<std::vector<double>>() != e.importance) {
    throw ValidationError("importance is not ReLU(attribution)");
  }
  return e;
}

}  // namespace coax::xai
