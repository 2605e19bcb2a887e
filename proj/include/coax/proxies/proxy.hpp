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

#ifndef COAX_PROXIES_PROXY_HPP_
#define COAX_PROXIES_PROXY_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "coax/common/jsonl.hpp"
#include "coax/common/types.hpp"
#include "coax/fitting/session_fit.hpp"

namespace coax::proxies {

enum class Family { kDecisionTree, kKnn, kMlp };

std::string ToString(Family family);
Family ParseFamily(const std::string& text);

// Integer hyperparameter ranges per family.
struct HyperRange {
  int lo;
  int hi;
};
HyperRange HyperparameterRange(Family family);

// Rows of input features with binary targets (label 1 or 2).
struct ProxyData {
  std::vector<std::vector<double>> inputs;
  std::vector<Label> labels;
};

// A trained proxy answering P(label 1 | input) before smoothing.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual double ProbaLabel1(std::span<const double> input) const = 0;
};

struct ProxyModel {
  Family family = Family::kDecisionTree;
  int hyper = 1;
  double smoothing = 0.0;
  bool with_xai = false;
  bool constant = false;  // single-class training data
  std::shared_ptr<const Classifier> classifier;

  // Smoothed P(label 1). `explanation` must be present iff with_xai.
  double ProbaLabel1(std::span<const double> x,
                     const std::vector<double>* explanation) const;
};

// (p + s/2) / (1 + s)
double Smooth(double p, double s);

// Greedy Gini tree; leaves hold the label-1 fraction.
std::shared_ptr<const Classifier> TrainDecisionTree(const ProxyData& data,
                                                    int max_depth);
std::shared_ptr<const Classifier> TrainKnn(const ProxyData& data, int neighbors);
// One ReLU hidden layer, sigmoid output, full-batch Adam.
std::shared_ptr<const Classifier> TrainTinyMlp(const ProxyData& data, int hidden,
                                               uint64_t seed);

// Inputs are x, or x followed by the shown explanation when with_xai.
ProxyModel TrainProxy(Family family, int hyper, const ProxyData& data,
                      bool with_xai, uint64_t seed);

// Proxy training data from a session: the feedback trials labelled with
// the AI's answers. Explanations are appended for with-XAI conditions.
ProxyData TrainingData(const fitting::PreparedSession& session, bool with_xai);

struct ProxyFit {
  ProxyModel model;
  double nll = 0.0;
  double bic = 0.0;
  int n_trials = 0;
};

// Exhaustive grid over the family's integer range and 11 smoothing values
// in [0, 5], scored by the NLL of the observed labels on scored trials.
ProxyFit TuneProxy(Family family, const fitting::PreparedSession& session,
                   uint64_t seed);

Json ToJson(const ProxyFit& fit, const std::string& session_id);

}  // namespace coax::proxies

#endif  // COAX_PROXIES_PROXY_HPP_
