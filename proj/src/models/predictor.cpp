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

#include "coax/models/predictor.hpp"

#include "coax/common/error.hpp"

namespace coax::models {

Eigen::VectorXd Predictor::ProbaLabel2Batch(const Eigen::MatrixXd& inputs) const {
  Eigen::VectorXd out(inputs.rows());
  std::vector<double> row(inputs.cols());
  for (Eigen::Index r = 0; r < inputs.rows(); ++r) {
    for (Eigen::Index c = 0; c < inputs.cols(); ++c) row[c] = inputs(r, c);
    out[r] = ProbaLabel2(row);
  }
  return out;
}

std::vector<double> Predictor::GradientLabel2(std::span<const double>) const {
  throw UnsupportedError("model is not differentiable");
}

}  // namespace coax::models
