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

#include "coax/proxies/proxy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "coax/common/error.hpp"
#include "coax/common/random.hpp"
#include "coax/models/ai_model.hpp"

namespace coax::proxies {

namespace {

constexpr int kSmoothingSteps = 11;
constexpr double kSmoothingMax = 5.0;
constexpr int kProxyFreeParameters = 2;  // family hyperparameter + smoothing

class ConstantClassifier : public Classifier {
 public:
  explicit ConstantClassifier(double p) : p_(p) {}
  double ProbaLabel1(std::span<const double>) const override { return p_; }

 private:
  double p_;
};

double Label1Fraction(const std::vector<Label>& labels,
                      const std::vector<size_t>& rows) {
  if (rows.empty()) return 0.5;
  size_t ones = 0;
  for (size_t i : rows) ones += labels[i] == Label::kOne;
  return static_cast<double>(ones) / static_cast<double>(rows.size());
}

double Gini(size_t ones, size_t total) {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(ones) / static_cast<double>(total);
  return 2.0 * p * (1.0 - p);
}

class DecisionTree : public Classifier {
 public:
  DecisionTree(const ProxyData& data, int max_depth) {
    std::vector<size_t> rows(data.inputs.size());
    std::iota(rows.begin(), rows.end(), size_t{0});
    Build(data, rows, max_depth);
  }

  double ProbaLabel1(std::span<const double> input) const override {
    size_t node = 0;
    while (nodes_[node].feature >= 0) {
      const Node& n = nodes_[node];
      node = input[static_cast<size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes_[node].value;
  }

  // Root split, for tests.
  int root_feature() const { return nodes_.front().feature; }
  double root_threshold() const { return nodes_.front().threshold; }

 private:
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    size_t left = 0;
    size_t right = 0;
    double value = 0.5;
  };

  size_t Build(const ProxyData& data, const std::vector<size_t>& rows, int depth) {
    const size_t index = nodes_.size();
    nodes_.push_back({});
    nodes_[index].value = Label1Fraction(data.labels, rows);
    size_t ones = 0;
    for (size_t i : rows) ones += data.labels[i] == Label::kOne;
    const double parent = Gini(ones, rows.size());
    if (depth <= 0 || parent == 0.0 || rows.size() < 2) return index;

    const size_t width = data.inputs[rows.front()].size();
    double best_impurity = parent;
    int best_feature = -1;
    double best_threshold = 0.0;
    for (size_t f = 0; f < width; ++f) {
      std::vector<size_t> sorted = rows;
      std::stable_sort(sorted.begin(), sorted.end(), [&](size_t a, size_t b) {
        return data.inputs[a][f] < data.inputs[b][f];
      });
      size_t left_ones = 0;
      for (size_t i = 0; i + 1 < sorted.size(); ++i) {
        left_ones += data.labels[sorted[i]] == Label::kOne;
        const double lo = data.inputs[sorted[i]][f];
        const double hi = data.inputs[sorted[i + 1]][f];
        if (lo == hi) continue;
        const size_t left_n = i + 1, right_n = sorted.size() - left_n;
        const double impurity =
            (left_n * Gini(left_ones, left_n) + right_n * Gini(ones - left_ones, right_n)) /
            static_cast<double>(sorted.size());
        if (impurity < best_impurity - 1e-12) {
          best_impurity = impurity;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (lo + hi);
        }
      }
    }
    if (best_feature < 0) return index;
    std::vector<size_t> left, right;
    for (size_t i : rows) {
      (data.inputs[i][static_cast<size_t>(best_feature)] <= best_threshold ? left : right)
          .push_back(i);
    }
    nodes_[index].feature = best_feature;
    nodes_[index].threshold = best_threshold;
    const size_t l = Build(data, left, depth - 1);
    const size_t r = Build(data, right, depth - 1);
    nodes_[index].left = l;
    nodes_[index].right = r;
    return index;
  }

  std::vector<Node> nodes_;
};

class Knn : public Classifier {
 public:
  Knn(const ProxyData& data, int neighbors)
      : data_(data), neighbors_(std::min<size_t>(static_cast<size_t>(neighbors), data.inputs.size())) {}

  double ProbaLabel1(std::span<const double> input) const override {
    std::vector<std::pair<double, size_t>> dist;
    for (size_t i = 0; i < data_.inputs.size(); ++i) {
      double d = 0.0;
      for (size_t f = 0; f < input.size(); ++f) {
        d += std::pow(input[f] - data_.inputs[i][f], 2);
      }
      dist.emplace_back(d, i);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(neighbors_),
                      dist.end());
    size_t ones = 0;
    for (size_t i = 0; i < neighbors_; ++i) ones += data_.labels[dist[i].second] == Label::kOne;
    return static_cast<double>(ones) / static_cast<double>(neighbors_);
  }

 private:
  ProxyData data_;
  size_t neighbors_;
};

class TinyMlp : public Classifier {
 public:
  explicit TinyMlp(models::AiModel model) : model_(std::move(model)) {}
  double ProbaLabel1(std::span<const double> input) const override {
    return 1.0 - model_.ProbaLabel2(input);
  }

 private:
  models::AiModel model_;
};

void CheckData(const ProxyData& data) {
  if (data.inputs.empty() || data.inputs.size() != data.labels.size()) {
    throw ContractViolation("proxy training needs labelled rows");
  }
  const size_t width = data.inputs.front().size();
  for (const auto& row : data.inputs) {
    if (row.size() != width) throw ShapeError("ragged proxy inputs");
  }
}

std::vector<double> Concat(const std::vector<double>& x,
                           const std::vector<double>* explanation) {
  std::vector<double> input = x;
  if (explanation) input.insert(input.end(), explanation->begin(), explanation->end());
  return input;
}

}  // namespace

std::string ToString(Family family) {
  switch (family) {
    case Family::kDecisionTree:
      return "dt";
    case Family::kKnn:
      return "knn";
    case Family::kMlp:
      return "mlp";
  }
  return "unknown";
}

Family ParseFamily(const std::string& text) {
  for (Family f : {Family::kDecisionTree, Family::kKnn, Family::kMlp}) {
    if (ToString(f) == text) return f;
  }
  throw ConfigError("unknown proxy family '" + text + "'");
}

HyperRange HyperparameterRange(Family family) {
  switch (family) {
    case Family::kDecisionTree:
      return {1, 5};
    case Family::kKnn:
      return {1, 8};
    case Family::kMlp:
      return {1, 50};
  }
  return {1, 1};
}

double Smooth(double p, double s) { return (p + 0.5 * s) / (1.0 + s); }

double ProxyModel::ProbaLabel1(std::span<const double> x,
                               const std::vector<double>* explanation) const {
  if (with_xai != (explanation != nullptr)) {
    throw ContractViolation(with_xai ? "with-XAI proxy needs an explanation"
                                     : "proxy without XAI got an explanation");
  }
  const std::vector<double> input =
      Concat(std::vector<double>(x.begin(), x.end()), explanation);
  return Smooth(classifier->ProbaLabel1(input), smoothing);
}

std::shared_ptr<const Classifier> TrainDecisionTree(const ProxyData& data,
                                                    int max_depth) {
  CheckData(data);
  return std::make_shared<DecisionTree>(data, max_depth);
}

std::shared_ptr<const Classifier> TrainKnn(const ProxyData& data, int neighbors) {
  CheckData(data);
  if (neighbors < 1) throw ConfigError("KNN needs at least one neighbour");
  return std::make_shared<Knn>(data, neighbors);
}

std::shared_ptr<const Classifier> TrainTinyMlp(const ProxyData& data, int hidden,
                                               uint64_t seed) {
  CheckData(data);
  std::vector<data::Instance> rows;
  for (size_t i = 0; i < data.inputs.size(); ++i) {
    data::Instance row;
    row.id = std::to_string(i);
    row.norm_values = data.inputs[i];
    row.raw_values = data.inputs[i];
    row.truth_label = data.labels[i];
    rows.push_back(std::move(row));
  }
  models::MlpConfig config;
  config.hidden_units = {hidden};
  config.learning_rate = 0.01;
  config.epochs = 300;
  config.seed = seed;
  return std::make_shared<TinyMlp>(models::TrainMlp(rows, config));
}

ProxyModel TrainProxy(Family family, int hyper, const ProxyData& data,
                      bool with_xai, uint64_t seed) {
  CheckData(data);
  const HyperRange range = HyperparameterRange(family);
  if (hyper < range.lo || hyper > range.hi) {
    throw ConfigError("hyperparameter outside the " + ToString(family) + " range");
  }
  ProxyModel model;
  model.family = family;
  model.hyper = hyper;
  model.with_xai = with_xai;
  const bool single_class = std::all_of(data.labels.begin(), data.labels.end(),
                                        [&](Label l) { return l == data.labels.front(); });
  if (single_class) {
    model.constant = true;
    model.classifier = std::make_shared<ConstantClassifier>(
        data.labels.front() == Label::kOne ? 1.0 : 0.0);
    return model;
  }
  switch (family) {
    case Family::kDecisionTree:
      model.classifier = TrainDecisionTree(data, hyper);
      break;
    case Family::kKnn:
      model.classifier = TrainKnn(data, hyper);
      break;
    case Family::kMlp:
      model.classifier = TrainTinyMlp(data, hyper, seed);
      break;
  }
  return model;
}

ProxyData TrainingData(const fitting::PreparedSession& session, bool with_xai) {
  ProxyData data;
  for (const auto& t : session.training) {
    if (with_xai && !t.shown) {
      throw ContractViolation("with-XAI proxy needs explanations on training trials");
    }
    data.inputs.push_back(Concat(t.x, with_xai ? &t.shown->values : nullptr));
    data.labels.push_back(t.ai_label);
  }
  return data;
}

ProxyFit TuneProxy(Family family, const fitting::PreparedSession& session,
                   uint64_t seed) {
  if (session.scored.empty()) throw ContractViolation("no scored trials to tune on");
  const bool with_xai = session.condition == TestCondition::kWithXai &&
                        session.xai_type != XaiType::kNone;
  const ProxyData data = TrainingData(session, with_xai);
  const HyperRange range = HyperparameterRange(family);
  ProxyFit best;
  bool have_best = false;
  for (int hyper = range.lo; hyper <= range.hi; ++hyper) {
    ProxyModel model = TrainProxy(family, hyper, data, with_xai,
                                  DeriveSeed(seed, {static_cast<uint64_t>(hyper)}));
    std::vector<double> raw;
    for (const auto& t : session.scored) {
      model.smoothing = 0.0;
      raw.push_back(model.ProbaLabel1(t.x, with_xai ? &t.shown->values : nullptr));
    }
    for (int step = 0; step < kSmoothingSteps; ++step) {
      const double s = kSmoothingMax * step / (kSmoothingSteps - 1);
      std::vector<double> observed;
      for (size_t i = 0; i < raw.size(); ++i) {
        const double p1 = Smooth(raw[i], s);
        observed.push_back(*session.scored[i].observed == Label::kOne ? p1 : 1.0 - p1);
      }
      const double nll = fitting::MeanNll(observed);
      if (!have_best || nll < best.nll) {
        have_best = true;
        best.nll = nll;
        best.model = model;
        best.model.smoothing = s;
      }
    }
  }
  best.n_trials = static_cast<int>(session.scored.size());
  best.bic = fitting::Bic(best.nll, best.n_trials, kProxyFreeParameters);
  return best;
}

Json ToJson(const ProxyFit& fit, const std::string& session_id) {
  return Json{{"session_id", session_id},
              {"family", ToString(fit.model.family)},
              {"hyper", fit.model.hyper},
              {"smoothing", fit.model.smoothing},
              {"with_xai", fit.model.with_xai},
              {"constant", fit.model.constant},
              {"nll", fit.nll},
              {"bic", fit.bic},
              {"n_trials", fit.n_trials}};
}

}  // namespace coax::proxies
