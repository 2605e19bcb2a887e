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

#include "coax/fitting/bayes_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coax/common/error.hpp"
#include "coax/common/random.hpp"

namespace coax::fitting {

namespace {

constexpr double kLengthScales[] = {0.08, 0.15, 0.25, 0.4, 0.7, 1.2};
constexpr double kNoiseVariance = 1e-4;
constexpr int kRandomCandidates = 512;
constexpr int kLocalCandidates = 96;

double NormalPdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double RadicalInverse(size_t index, int base) {
  double result = 0.0, f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

bool SamePoint(const std::vector<double>& a, const std::vector<double>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-9) return false;
  }
  return true;
}

}  // namespace

bool GaussianProcess::Fit(const Eigen::MatrixXd& inputs,
                          const Eigen::VectorXd& targets, double length_scale,
                          double noise_variance) {
  inputs_ = inputs;
  length_scale_ = length_scale;
  const double n = static_cast<double>(targets.size());
  y_mean_ = targets.mean();
  const double var = (targets.array() - y_mean_).square().sum() / std::max(1.0, n - 1);
  y_scale_ = var > 1e-24 ? std::sqrt(var) : 1.0;
  const Eigen::VectorXd y = (targets.array() - y_mean_) / y_scale_;

  Eigen::MatrixXd k = Kernel(inputs, inputs);
  k.diagonal().array() += noise_variance;
  factor_.compute(k);
  if (factor_.info() != Eigen::Success) return false;
  weights_ = factor_.solve(y);
  const Eigen::MatrixXd l = factor_.matrixL();
  if (!l.diagonal().allFinite() || (l.diagonal().array() <= 0).any()) return false;
  log_marginal_ = -0.5 * y.dot(weights_) - l.diagonal().array().log().sum() -
                  0.5 * n * std::log(2.0 * M_PI);
  return std::isfinite(log_marginal_);
}

Eigen::MatrixXd GaussianProcess::Kernel(const Eigen::MatrixXd& a,
                                        const Eigen::MatrixXd& b) const {
  Eigen::MatrixXd k(a.rows(), b.rows());
  const double scale = -0.5 / (length_scale_ * length_scale_);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      k(i, j) = std::exp(scale * (a.row(i) - b.row(j)).squaredNorm());
    }
  }
  return k;
}

void GaussianProcess::Predict(const Eigen::MatrixXd& queries,
                              Eigen::VectorXd& mean,
                              Eigen::VectorXd& variance) const {
  const Eigen::MatrixXd cross = Kernel(queries, inputs_);
  mean = (cross * weights_).array() * y_scale_ + y_mean_;
  const Eigen::MatrixXd v = factor_.matrixL().solve(cross.transpose());
  variance = (1.0 - v.colwise().squaredNorm().array()).max(0.0).matrix().transpose();
  variance *= y_scale_ * y_scale_;
}

double ExpectedImprovement(double mean, double variance, double best,
                           double margin) {
  const double sd = std::sqrt(std::max(variance, 0.0));
  const double gain = best - mean - margin;
  if (sd < 1e-12) return std::max(gain, 0.0);
  const double z = gain / sd;
  return gain * NormalCdf(z) + sd * NormalPdf(z);
}

double Snap(double u, const Dimension& dimension) {
  u = std::clamp(u, 0.0, 1.0);
  if (dimension.levels < 2) return u;
  const double steps = dimension.levels - 1;
  return std::round(u * steps) / steps;
}

std::vector<std::vector<double>> HaltonPoints(size_t count, size_t dims,
                                              uint64_t seed) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  if (dims > std::size(kPrimes)) throw ConfigError("too many Halton dimensions");
  Rng rng(DeriveSeed(seed, {0x4a1}));
  std::vector<double> shift(dims);
  for (double& s : shift) s = Uniform01(rng);
  std::vector<std::vector<double>> points(count, std::vector<double>(dims));
  for (size_t i = 0; i < count; ++i) {
    for (size_t d = 0; d < dims; ++d) {
      const double u = RadicalInverse(i + 1, kPrimes[d]) + shift[d];
      points[i][d] = u - std::floor(u);
    }
  }
  return points;
}

BoResult MinimizeBo(const std::function<double(std::span<const double>)>& objective,
                    std::span<const Dimension> dimensions, const BoConfig& config) {
  if (config.budget < 1) throw ConfigError("optimization budget must be positive");
  const size_t dims = dimensions.size();
  BoResult result;
  auto evaluate = [&](std::vector<double> point) {
    for (size_t d = 0; d < dims; ++d) point[d] = Snap(point[d], dimensions[d]);
    const double value = objective(point);
    if (result.points.empty() || value < result.best_value) {
      result.best_value = value;
      result.best_point = point;
    }
    result.points.push_back(std::move(point));
    result.values.push_back(value);
  };

  const int initial = std::min(config.budget, (config.budget + 2) / 3);
  result.initial_count = initial;
  for (auto& p : HaltonPoints(static_cast<size_t>(initial), dims, config.seed)) {
    evaluate(std::move(p));
  }

  Rng rng(DeriveSeed(config.seed, {0xb0}));
  auto random_point = [&] {
    std::vector<double> p(dims);
    for (double& u : p) u = Uniform01(rng);
    return p;
  };
  auto is_new = [&](const std::vector<double>& p) {
    return std::none_of(result.points.begin(), result.points.end(),
                        [&](const auto& q) { return SamePoint(p, q); });
  };

  while (static_cast<int>(result.points.size()) < config.budget) {
    if (result.gp_fallback) {
      evaluate(random_point());
      continue;
    }
    const auto m = static_cast<Eigen::Index>(result.points.size());
    Eigen::MatrixXd x(m, static_cast<Eigen::Index>(dims));
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (size_t d = 0; d < dims; ++d) x(i, d) = result.points[i][d];
      y[i] = result.values[i];
    }
    GaussianProcess best_gp;
    bool fitted = false;
    for (double ls : kLengthScales) {
      GaussianProcess gp;
      if (!gp.Fit(x, y, ls, kNoiseVariance)) continue;
      if (!fitted || gp.LogMarginalLikelihood() > best_gp.LogMarginalLikelihood()) {
        best_gp = gp;
        fitted = true;
      }
    }
    if (!fitted) {
      result.gp_fallback = true;
      continue;
    }

    // Candidates: uniform draws plus jitter around the three best points.
    std::vector<size_t> order(result.values.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return result.values[a] < result.values[b];
    });
    std::vector<std::vector<double>> candidates;
    for (int i = 0; i < kRandomCandidates; ++i) candidates.push_back(random_point());
    for (size_t top = 0; top < std::min<size_t>(3, order.size()); ++top) {
      for (int i = 0; i < kLocalCandidates / 3; ++i) {
        std::vector<double> p = result.points[order[top]];
        for (size_t d = 0; d < dims; ++d) {
          p[d] = std::clamp(p[d] + 0.08 * StandardNormal(rng), 0.0, 1.0);
        }
        candidates.push_back(std::move(p));
      }
    }
    for (auto& p : candidates) {
      for (size_t d = 0; d < dims; ++d) p[d] = Snap(p[d], dimensions[d]);
    }
    Eigen::MatrixXd q(static_cast<Eigen::Index>(candidates.size()),
                      static_cast<Eigen::Index>(dims));
    for (size_t i = 0; i < candidates.size(); ++i) {
      for (size_t d = 0; d < dims; ++d) q(i, d) = candidates[i][d];
    }
    Eigen::VectorXd mean, variance;
    best_gp.Predict(q, mean, variance);
    std::vector<double> ei(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i) {
      ei[i] = ExpectedImprovement(mean[i], variance[i], result.best_value);
    }
    std::vector<size_t> ranked(candidates.size());
    std::iota(ranked.begin(), ranked.end(), size_t{0});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](size_t a, size_t b) { return ei[a] > ei[b]; });
    bool proposed = false;
    for (size_t i : ranked) {
      if (is_new(candidates[i])) {
        evaluate(candidates[i]);
        proposed = true;
        break;
      }
    }
    if (!proposed) evaluate(random_point());
  }
  return result;
}

}  // namespace coax::fitting
