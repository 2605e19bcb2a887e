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

#ifndef COAX_FITTING_BAYES_OPT_HPP_
#define COAX_FITTING_BAYES_OPT_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace coax::fitting {

// Zero-mean GP with a squared-exponential kernel on standardized targets.
class GaussianProcess {
 public:
  // Returns false when the kernel matrix cannot be factorized.
  bool Fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
           double length_scale, double noise_variance);
  double LogMarginalLikelihood() const { return log_marginal_; }
  // Posterior mean and variance in the original target units.
  void Predict(const Eigen::MatrixXd& queries, Eigen::VectorXd& mean,
               Eigen::VectorXd& variance) const;

 private:
  Eigen::MatrixXd Kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const;

  Eigen::MatrixXd inputs_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  Eigen::VectorXd weights_;
  double length_scale_ = 1.0;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  double log_marginal_ = 0.0;
};

// Expected improvement below `best` for a minimization problem.
double ExpectedImprovement(double mean, double variance, double best,
                           double margin = 0.0);

// One search coordinate on [0,1]. Integer coordinates with `levels` values
// are snapped to multiples of 1/(levels-1).
struct Dimension {
  int levels = 0;  // 0 = continuous
};

double Snap(double u, const Dimension& dimension);

struct BoConfig {
  int budget = 60;
  uint64_t seed = 1;
};

struct BoResult {
  std::vector<double> best_point;
  double best_value = 0.0;
  std::vector<std::vector<double>> points;  // evaluation order
  std::vector<double> values;
  int initial_count = 0;
  bool gp_fallback = false;  // GP failed; remaining budget was random search
};

// Scrambled Halton points in [0,1]^dims (bases 2, 3, 5, ...), shifted by a
// seeded offset. The first n points do not depend on `count`.
std::vector<std::vector<double>> HaltonPoints(size_t count, size_t dims,
                                              uint64_t seed);

// Minimizes `objective` over the unit cube: ceil(budget/3) Halton points,
// then one expected-improvement proposal per evaluation. Deterministic under
// config.seed.
BoResult MinimizeBo(const std::function<double(std::span<const double>)>& objective,
                    std::span<const Dimension> dimensions, const BoConfig& config);

}  // namespace coax::fitting

#endif  // COAX_FITTING_BAYES_OPT_HPP_
