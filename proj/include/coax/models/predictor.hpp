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

#ifndef COAX_MODELS_PREDICTOR_HPP_
#define COAX_MODELS_PREDICTOR_HPP_

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace coax::models {

// A function of the normalized attribute vector that explainers can probe.
// Outputs are P(label 2 | x); explainers re-orient toward other labels.
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual size_t num_features() const = 0;
  virtual double ProbaLabel2(std::span<const double> x) const = 0;

  // One output per row of `inputs`. The default evaluates row by row.
  virtual Eigen::VectorXd ProbaLabel2Batch(const Eigen::MatrixXd& inputs) const;

  virtual bool differentiable() const { return false; }
  // d P(label 2) / d x. Throws UnsupportedError unless differentiable().
  virtual std::vector<double> GradientLabel2(std::span<const double> x) const;
};

}  // namespace coax::models

#endif  // COAX_MODELS_PREDICTOR_HPP_
