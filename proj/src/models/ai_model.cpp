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

#include "coax/models/ai_model.hpp"

#include <cmath>
#include <fstream>

#include "coax/common/error.hpp"
#include "coax/common/random.hpp"

namespace coax::models {

namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Eigen::ArrayXXd Sigmoid(const Eigen::ArrayXXd& z) {
  return z.unaryExpr([](double v) { return Sigmoid(v); });
}

void CheckWidth(size_t got, size_t expected) {
  if (got != expected) {
    throw ShapeError("model expects " + std::to_string(expected) +
                     " features, got " + std::to_string(got));
  }
}

// Forward pass keeping pre-activations; rows of `inputs` are examples.
struct ForwardTrace {
  std::vector<Eigen::MatrixXd> activations;  // a_0 = inputs, a_l after ReLU
  std::vector<Eigen::MatrixXd> pre;          // z_l
  Eigen::VectorXd proba;
};

ForwardTrace Forward(const MlpParameters& p, const Eigen::MatrixXd& inputs) {
  ForwardTrace trace;
  trace.activations.push_back(inputs);
  const size_t layers = p.weights.size();
  for (size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = trace.activations.back() * p.weights[l].transpose();
    z.rowwise() += p.biases[l].transpose();
    trace.pre.push_back(z);
    if (l + 1 < layers) {
      trace.activations.push_back(z.cwiseMax(0.0));
    } else {
      trace.proba = Sigmoid(z.col(0).array()).matrix();
    }
  }
  return trace;
}

double BinaryCrossEntropy(const Eigen::VectorXd& proba,
                          const Eigen::VectorXd& target) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < proba.size(); ++i) {
    const double p = std::clamp(proba[i], 1e-12, 1.0 - 1e-12);
    loss -= target[i] * std::log(p) + (1.0 - target[i]) * std::log(1.0 - p);
  }
  return loss / static_cast<double>(proba.size());
}

}  // namespace

AiModel AiModel::Mlp(MlpParameters parameters, TrainingReport report) {
  if (parameters.weights.empty() ||
      parameters.weights.size() != parameters.biases.size()) {
    throw ShapeError("MLP needs matching weight and bias layers");
  }
  for (size_t l = 0; l < parameters.weights.size(); ++l) {
    if (parameters.biases[l].size() != parameters.weights[l].rows() ||
        (l > 0 && parameters.weights[l].cols() != parameters.weights[l - 1].rows())) {
      throw ShapeError("MLP layer " + std::to_string(l) + " shape mismatch");
    }
  }
  if (parameters.weights.back().rows() != 1) {
    throw ShapeError("MLP output layer must have one unit");
  }
  AiModel model(std::move(parameters));
  model.report_ = std::move(report);
  return model;
}

AiModel AiModel::Linear(LinearParameters parameters) {
  if (parameters.weights.empty()) throw ShapeError("linear model needs weights");
  return AiModel(std::move(parameters));
}

AiModel AiModel::External(ExternalParameters parameters) {
  return AiModel(std::move(parameters));
}

ModelKind AiModel::kind() const {
  switch (params_.index()) {
    case 0:
      return ModelKind::kMlp;
    case 1:
      return ModelKind::kLinear;
    default:
      return ModelKind::kExternal;
  }
}

size_t AiModel::num_features() const {
  switch (kind()) {
    case ModelKind::kMlp:
      return static_cast<size_t>(mlp().weights.front().cols());
    case ModelKind::kLinear:
      return linear().weights.size();
    case ModelKind::kExternal:
      return external().num_features;
  }
  return 0;
}

double AiModel::ProbaLabel2(std::span<const double> x) const {
  CheckWidth(x.size(), num_features());
  switch (kind()) {
    case ModelKind::kMlp: {
      Eigen::MatrixXd input(1, static_cast<Eigen::Index>(x.size()));
      for (size_t i = 0; i < x.size(); ++i) input(0, i) = x[i];
      return Forward(mlp(), input).proba[0];
    }
    case ModelKind::kLinear: {
      double z = linear().bias;
      for (size_t i = 0; i < x.size(); ++i) z += linear().weights[i] * x[i];
      return Sigmoid(z);
    }
    case ModelKind::kExternal:
      break;
  }
  throw UnsupportedError(
      "external models only answer stored instance ids, not arbitrary inputs");
}

Eigen::VectorXd AiModel::ProbaLabel2Batch(const Eigen::MatrixXd& inputs) const {
  CheckWidth(static_cast<size_t>(inputs.cols()), num_features());
  if (kind() == ModelKind::kMlp) return Forward(mlp(), inputs).proba;
  return Predictor::ProbaLabel2Batch(inputs);
}

std::vector<double> AiModel::GradientLabel2(std::span<const double> x) const {
  CheckWidth(x.size(), num_features());
  std::vector<double> gradient(x.size());
  switch (kind()) {
    case ModelKind::kLinear: {
      const double p = ProbaLabel2(x);
      for (size_t i = 0; i < x.size(); ++i) {
        gradient[i] = p * (1.0 - p) * linear().weights[i];
      }
      return gradient;
    }
    case ModelKind::kMlp: {
      Eigen::MatrixXd input(1, static_cast<Eigen::Index>(x.size()));
      for (size_t i = 0; i < x.size(); ++i) input(0, i) = x[i];
      const ForwardTrace trace = Forward(mlp(), input);
      const double p = trace.proba[0];
      // Backpropagate d p / d z_out = p (1 - p) down to the input.
      Eigen::RowVectorXd delta(1);
      delta(0) = p * (1.0 - p);
      for (size_t l = mlp().weights.size(); l-- > 0;) {
        Eigen::RowVectorXd upstream = delta * mlp().weights[l];
        if (l > 0) {
          const Eigen::RowVectorXd& z = trace.pre[l - 1].row(0);
          for (Eigen::Index j = 0; j < upstream.size(); ++j) {
            if (z[j] <= 0.0) upstream[j] = 0.0;
          }
        }
        delta = upstream;
      }
      for (size_t i = 0; i < x.size(); ++i) gradient[i] = delta[i];
      return gradient;
    }
    case ModelKind::kExternal:
      break;
  }
  throw UnsupportedError("external models have no gradient");
}

double AiModel::PredictProba(const data::Instance& instance) const {
  if (kind() == ModelKind::kExternal) {
    const auto it = external().records.find(instance.id);
    if (it == external().records.end()) {
      throw LookupError("no external prediction for instance '" + instance.id +
                        "'");
    }
    return it->second.proba_label2;
  }
  return ProbaLabel2(instance.norm_values);
}

std::optional<std::vector<double>> AiModel::ExternalAttribution(
    const std::string& instance_id) const {
  if (kind() != ModelKind::kExternal) return std::nullopt;
  const auto it = external().records.find(instance_id);
  if (it == external().records.end()) {
    throw LookupError("no external record for instance '" + instance_id + "'");
  }
  return it->second.attribution;
}

Label LabelFromProba(double proba_label2) {
  return proba_label2 >= 0.5 ? Label::kTwo : Label::kOne;
}

PredictionBundle Predict(const AiModel& model, const data::Instance& instance) {
  PredictionBundle bundle;
  bundle.instance_id = instance.id;
  bundle.proba_label2 = model.PredictProba(instance);
  bundle.label = LabelFromProba(bundle.proba_label2);
  return bundle;
}

std::vector<double> Gradient(const AiModel& model,
                             const data::Instance& instance) {
  return model.GradientLabel2(instance.norm_values);
}

AiModel TrainMlp(const std::vector<data::Instance>& training,
                 const MlpConfig& config) {
  if (!(config.learning_rate > 0.0) || config.epochs <= 0) {
    throw ConfigError("MLP training needs a positive learning rate and epochs");
  }
  if (training.empty()) throw TrainingError("no training examples");
  const size_t width = training.front().num_features();
  const auto n = static_cast<Eigen::Index>(training.size());
  Eigen::MatrixXd inputs(n, static_cast<Eigen::Index>(width));
  Eigen::VectorXd target(n);
  bool has_one = false, has_two = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& instance = training[static_cast<size_t>(i)];
    CheckWidth(instance.num_features(), width);
    if (!instance.truth_label) throw TrainingError("unlabeled training example");
    for (size_t c = 0; c < width; ++c) inputs(i, c) = instance.norm_values[c];
    target[i] = *instance.truth_label == Label::kTwo ? 1.0 : 0.0;
    (target[i] > 0.5 ? has_two : has_one) = true;
  }
  if (!has_one || !has_two) {
    throw TrainingError("training data contains a single class");
  }

  // He-uniform hidden layers, Glorot-uniform output layer, zero biases.
  Rng rng(DeriveSeed(config.seed, {0x31f}));
  MlpParameters p;
  std::vector<int> sizes{static_cast<int>(width)};
  sizes.insert(sizes.end(), config.hidden_units.begin(), config.hidden_units.end());
  sizes.push_back(1);
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int fan_in = sizes[l];
    const int fan_out = sizes[l + 1];
    const bool output = l + 2 == sizes.size();
    const double limit = output ? std::sqrt(6.0 / (fan_in + fan_out))
                                : std::sqrt(6.0 / fan_in);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) w(r, c) = limit * (2.0 * Uniform01(rng) - 1.0);
    }
    p.weights.push_back(std::move(w));
    p.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }

  // Adam moments.
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  std::vector<Eigen::MatrixXd> mw, vw;
  std::vector<Eigen::VectorXd> mb, vb;
  for (size_t l = 0; l < p.weights.size(); ++l) {
    mw.push_back(Eigen::MatrixXd::Zero(p.weights[l].rows(), p.weights[l].cols()));
    vw.push_back(mw.back());
    mb.push_back(Eigen::VectorXd::Zero(p.biases[l].size()));
    vb.push_back(mb.back());
  }

  TrainingReport report;
  report.config = config;
  const size_t layers = p.weights.size();
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const ForwardTrace trace = Forward(p, inputs);
    report.loss_history.push_back(BinaryCrossEntropy(trace.proba, target));
    // d loss / d z_out for sigmoid + BCE, averaged over the batch.
    Eigen::MatrixXd delta = (trace.proba - target) / static_cast<double>(n);
    const double correction1 = 1.0 - std::pow(kBeta1, epoch);
    const double correction2 = 1.0 - std::pow(kBeta2, epoch);
    for (size_t l = layers; l-- > 0;) {
      const Eigen::MatrixXd grad_w = delta.transpose() * trace.activations[l];
      const Eigen::VectorXd grad_b = delta.colwise().sum().transpose();
      if (l > 0) {
        Eigen::MatrixXd upstream = delta * p.weights[l];
        upstream.array() *= (trace.pre[l - 1].array() > 0.0).cast<double>();
        delta = std::move(upstream);
      }
      mw[l] = kBeta1 * mw[l] + (1 - kBeta1) * grad_w;
      vw[l] = kBeta2 * vw[l] + (1 - kBeta2) * grad_w.cwiseProduct(grad_w);
      mb[l] = kBeta1 * mb[l] + (1 - kBeta1) * grad_b;
      vb[l] = kBeta2 * vb[l] + (1 - kBeta2) * grad_b.cwiseProduct(grad_b);
      p.weights[l].array() -= config.learning_rate * (mw[l].array() / correction1) /
                              ((vw[l].array() / correction2).sqrt() + kEps);
      p.biases[l].array() -= config.learning_rate * (mb[l].array() / correction1) /
                             ((vb[l].array() / correction2).sqrt() + kEps);
    }
  }
  report.final_loss = BinaryCrossEntropy(Forward(p, inputs).proba, target);
  return AiModel::Mlp(std::move(p), std::move(report));
}

double Accuracy(const AiModel& model, const std::vector<data::Instance>& data) {
  if (data.empty()) return 0.0;
  size_t correct = 0;
  for (const auto& instance : data) {
    if (instance.truth_label && Predict(model, instance).label == *instance.truth_label) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

AiModel ImportExternal(std::istream& in) {
  ExternalParameters params;
  ForEachJsonLine(in, [&](const Json& record, long line) {
    ExternalRecord entry;
    std::string id;
    try {
      id = record.at("instance_id").get<std::string>();
      entry.proba_label2 = record.at("proba").get<double>();
      if (record.contains("attribution") && !record.at("attribution").is_null()) {
        entry.attribution = record.at("attribution").get<std::vector<double>>();
      }
    } catch (const Json::exception& e) {
      throw ParseError(std::string("malformed external record: ") + e.what(), line);
    }
    if (!(entry.proba_label2 > 0.0 && entry.proba_label2 < 1.0)) {
      throw ValidationError("external record '" + id + "' line " +
                            std::to_string(line) +
                            ": probability must lie in (0,1)");
    }
    if (entry.attribution) {
      if (params.num_features == 0) params.num_features = entry.attribution->size();
      if (entry.attribution->size() != params.num_features) {
        throw ParseError("attribution length differs from earlier records", line);
      }
    }
    if (!params.records.emplace(id, std::move(entry)).second) {
      throw ParseError("duplicate instance_id '" + id + "'", line);
    }
  });
  return AiModel::External(std::move(params));
}

AiModel ImportExternal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open " + path);
  return ImportExternal(in);
}

void ExportExternal(const AiModel& model, const std::string& path) {
  std::vector<Json> records;
  for (const auto& [id, entry] : model.external().records) {
    Json record;
    record["instance_id"] = id;
    record["proba"] = entry.proba_label2;
    if (entry.attribution) record["attribution"] = *entry.attribution;
    records.push_back(std::move(record));
  }
  WriteJsonLines(path, records);
}

Json ModelToJson(const AiModel& model) {
  Json json;
  switch (model.kind()) {
    case ModelKind::kLinear:
      json["kind"] = "linear";
      json["weights"] = model.linear().weights;
      json["bias"] = model.linear().bias;
      return json;
    case ModelKind::kMlp: {
      json["kind"] = "mlp";
      Json layers = Json::array();
      for (size_t l = 0; l < model.mlp().weights.size(); ++l) {
        const auto& w = model.mlp().weights[l];
        std::vector<std::vector<double>> rows(static_cast<size_t>(w.rows()));
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
          for (Eigen::Index c = 0; c < w.cols(); ++c) rows[r].push_back(w(r, c));
        }
        const auto& b = model.mlp().biases[l];
        layers.push_back({{"weights", rows},
                          {"bias", std::vector<double>(b.data(), b.data() + b.size())}});
      }
      json["layers"] = layers;
      if (model.training_report()) {
        json["final_loss"] = model.training_report()->final_loss;
      }
      return json;
    }
    case ModelKind::kExternal:
      break;
  }
  throw UnsupportedError("external models are exported with ExportExternal");
}

AiModel ModelFromJson(const Json& json) {
  const std::string kind = json.at("kind").get<std::string>();
  if (kind == "linear") {
    return AiModel::Linear({json.at("weights").get<std::vector<double>>(),
                            json.at("bias").get<double>()});
  }
  if (kind != "mlp") throw SchemaError("unknown model kind '" + kind + "'");
  MlpParameters p;
  for (const auto& layer : json.at("layers")) {
    const auto rows = layer.at("weights").get<std::vector<std::vector<double>>>();
    const auto bias = layer.at("bias").get<std::vector<double>>();
    Eigen::MatrixXd w(static_cast<Eigen::Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
    for (size_t r = 0; r < rows.size(); ++r) {
      for (size_t c = 0; c < rows[r].size(); ++c) w(r, c) = rows[r][c];
    }
    p.weights.push_back(std::move(w));
    p.biases.push_back(Eigen::Map<const Eigen::VectorXd>(
        bias.data(), static_cast<Eigen::Index>(bias.size())));
  }
  TrainingReport report;
  report.final_loss = json.value("final_loss", 0.0);
  return AiModel::Mlp(std::move(p), std::move(report));
}

}  // namespace coax::models
