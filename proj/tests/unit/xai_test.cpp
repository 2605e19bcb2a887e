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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "coax/common/error.hpp"
#include "coax/xai/explanation.hpp"
#include "env_support.hpp"

namespace coax::xai {
namespace {

// P(label 2) linear in x; a "linear-score" predictor.
class LinearScore : public models::Predictor {
 public:
  LinearScore(std::vector<double> w, double b) : w_(std::move(w)), b_(b) {}
  size_t num_features() const override { return w_.size(); }
  double ProbaLabel2(std::span<const double> x) const override {
    double s = b_;
    for (size_t r = 0; r < w_.size(); ++r) s += w_[r] * x[r];
    return s;
  }
  bool differentiable() const override { return true; }
  std::vector<double> GradientLabel2(std::span<const double>) const override { return w_; }

 private:
  std::vector<double> w_;
  double b_;
};

// Value of a coalition: mean prediction over background rows with the
// coalition's features taken from x.
double CoalitionValue(const models::Predictor& model, std::span<const double> x,
                      const Eigen::MatrixXd& background, const std::vector<bool>& in) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < background.rows(); ++i) {
    std::vector<double> z(x.size());
    for (size_t r = 0; r < x.size(); ++r) z[r] = in[r] ? x[r] : background(i, static_cast<Eigen::Index>(r));
    total += model.ProbaLabel2(z);
  }
  return total / static_cast<double>(background.rows());
}

// Shapley values as the average marginal contribution over all orderings.
std::vector<double> PermutationShapley(const models::Predictor& model,
                                       std::span<const double> x,
                                       const Eigen::MatrixXd& background) {
  const size_t n = x.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::vector<double> phi(n, 0.0);
  double count = 0.0;
  do {
    std::vector<bool> in(n, false);
    double prev = CoalitionValue(model, x, background, in);
    for (size_t r : order) {
      in[r] = true;
      const double next = CoalitionValue(model, x, background, in);
      phi[r] += next - prev;
      prev = next;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& v : phi) v /= count;
  return phi;
}

Eigen::MatrixXd RandomBackground(int rows, int cols, uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = Uniform01(rng);
  }
  return m;
}

TEST(Orientation, ImportanceIsReluOfAttribution) {
  Explanation e;
  e.attribution = {-1.0, 2.0};
  e = ToImportance(e);
  EXPECT_EQ(e.importance, (std::vector<double>{0.0, 2.0}));
  EXPECT_EQ(ToImportance(e), e);
  e.attribution = {-1.0, -3.0};
  e = ToImportance(e);
  EXPECT_EQ(e.importance, (std::vector<double>{0.0, 0.0}));
}

TEST(Orientation, ReorientFlipsSignsAndTowardLabel1IsStable) {
  const Explanation e = FromLabel2Scores(Method::kShapley, {0.3, -0.1}, Label::kTwo);
  const Explanation flipped = Reorient(e, Label::kOne);
  EXPECT_EQ(flipped.attribution, (std::vector<double>{-0.3, 0.1}));
  EXPECT_EQ(flipped.importance, (std::vector<double>{0.0, 0.1}));
  EXPECT_EQ(TowardLabel1(e), TowardLabel1(flipped));
  EXPECT_EQ(DisplayScale(std::vector<double>{0.5, -2.0}), (std::vector<double>{0.25, -1.0}));
  EXPECT_EQ(DisplayScale(std::vector<double>{0.0, 0.0}), (std::vector<double>{0.0, 0.0}));
}

TEST(Shapley, MatchesPermutationOracleOnMlp) {
  const auto& env = testing::SmallEnvironment();
  const Eigen::MatrixXd bg = RandomBackground(6, 5, 3);
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> x(5);
    for (double& v : x) v = Uniform01(rng);
    const auto exact = ShapleyExact(env.model(), x, bg, Label::kTwo);
    const auto oracle = PermutationShapley(env.model(), x, bg);
    for (size_t r = 0; r < 5; ++r) EXPECT_NEAR(exact.attribution[r], oracle[r], 1e-12);
  }
}

TEST(Shapley, LinearScoreGivesWeightTimesOffset) {
  const LinearScore model({0.1, -0.2, 0.05, 0.3, 0.0}, 0.2);
  Eigen::MatrixXd bg(1, 5);
  bg << 0.5, 0.4, 0.3, 0.2, 0.1;
  const std::vector<double> x = {0.9, 0.1, 0.7, 0.6, 0.8};
  const auto e = ShapleyExact(model, x, bg, Label::kTwo);
  for (size_t r = 0; r < 5; ++r) {
    EXPECT_NEAR(e.attribution[r], model.GradientLabel2(x)[r] * (x[r] - bg(0, static_cast<Eigen::Index>(r))), 1e-15);
  }
  EXPECT_EQ(e.attribution[4], 0.0);  // dummy feature
}

TEST(Shapley, CompletenessAndSymmetry) {
  const auto& env = testing::SmallEnvironment();
  const Eigen::MatrixXd& bg = env.background();
  const std::vector<double> x = {0.3, 0.5, 0.2, 0.9, 0.4};
  for (Label target : {Label::kOne, Label::kTwo}) {
    const auto e = ShapleyExact(env.model(), x, bg, target);
    const double sum = std::accumulate(e.attribution.begin(), e.attribution.end(), 0.0);
    const double gap = env.model().ProbaLabel2(x) - ShapleyBaseValue(env.model(), bg);
    EXPECT_NEAR(sum, target == Label::kTwo ? gap : -gap, 1e-12);
  }
  // f depends on x0 + x1 only.
  const LinearScore sym({0.2, 0.2, 0.0}, 0.1);
  // Symmetry needs the two features to be exchangeable in the background too.
  Eigen::MatrixXd bg3 = RandomBackground(4, 3, 8);
  bg3.col(1) = bg3.col(0);
  const std::vector<double> same = {0.6, 0.6, 0.3};
  const auto e = ShapleyExact(sym, same, bg3, Label::kTwo);
  EXPECT_NEAR(e.attribution[0], e.attribution[1], 1e-15);
}

TEST(Shapley, ConstantModelGivesZero) {
  const LinearScore constant({0, 0, 0}, 0.4);
  const auto e = ShapleyExact(constant, std::vector<double>{0.1, 0.2, 0.3},
                              RandomBackground(5, 3, 1), Label::kOne);
  for (double v : e.attribution) EXPECT_EQ(v, 0.0);
}

TEST(Lime, RecoversLinearWeightsAndIsSeeded) {
  const std::vector<double> w = {0.1, -0.05, 0.2, 0.0, 0.15};
  const LinearScore model(w, 0.3);
  LimeConfig config;
  config.n_samples = 4000;
  config.center = std::vector<double>(5, 0.5);
  config.scale = std::vector<double>(5, 0.2);
  const std::vector<double> x = {0.2, 0.7, 0.4, 0.5, 0.9};
  const auto fit = FitLimeSurrogate(model, x, config);
  for (size_t r = 0; r < 5; ++r) {
    EXPECT_NEAR(fit.coefficients[r], w[r], 0.05 * std::abs(w[r]) + 1e-6);
  }
  EXPECT_EQ(LimeLocal(model, x, config, Label::kTwo), LimeLocal(model, x, config, Label::kTwo));
  config.kernel_width = 0.0;
  EXPECT_THROW(LimeLocal(model, x, config, Label::kTwo), ConfigError);
}

TEST(IntegratedGradients, ExactOnLinearAndZeroAtBaseline) {
  const LinearScore model({0.1, -0.2, 0.3}, 0.1);
  const std::vector<double> x = {0.9, 0.2, 0.5}, b = {0.1, 0.4, 0.5};
  for (int steps : {16, 64, 256}) {
    const auto e = IntegratedGradients(model, x, b, steps, Label::kTwo);
    EXPECT_NEAR(e.attribution[0], 0.1 * 0.8, 1e-15);
    EXPECT_NEAR(e.attribution[1], -0.2 * -0.2, 1e-15);
    EXPECT_EQ(e.attribution[2], 0.0);
  }
  const auto same = IntegratedGradients(model, x, x, 32, Label::kTwo);
  for (double v : same.attribution) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(IntegratedGradients(model, x, b, 8, Label::kTwo), ConfigError);
}

TEST(IntegratedGradients, CompletenessResidualShrinksOnSmoothModel) {
  // Logistic model: smooth integrand, midpoint error falls as 1/steps^2.
  const models::AiModel model = models::AiModel::Linear({{2.0, -3.0, 1.5}, 0.2});
  const std::vector<double> x = {0.9, 0.1, 0.7}, b = {0.2, 0.6, 0.3};
  const double gap = model.ProbaLabel2(x) - model.ProbaLabel2(b);
  double previous = 1.0;
  for (int steps : {16, 64, 256, 1024}) {
    const auto e = IntegratedGradients(model, x, b, steps, Label::kTwo);
    const double residual =
        std::abs(std::accumulate(e.attribution.begin(), e.attribution.end(), 0.0) - gap);
    EXPECT_LT(residual, previous);
    previous = residual;
  }
  EXPECT_LT(previous, 1e-6);
}

TEST(IntegratedGradients, CompletenessResidualBoundedOnReluNetwork) {
  // ReLU kinks make the integrand jump, so the residual oscillates in sign
  // and only shrinks on average.
  const auto& env = testing::SmallEnvironment();
  const std::vector<double> x = {0.8, 0.1, 0.6, 0.3, 0.9}, b = {0.2, 0.5, 0.4, 0.5, 0.3};
  const double gap = env.model().ProbaLabel2(x) - env.model().ProbaLabel2(b);
  auto residual = [&](int steps) {
    const auto e = IntegratedGradients(env.model(), x, b, steps, Label::kTwo);
    return std::abs(std::accumulate(e.attribution.begin(), e.attribution.end(), 0.0) - gap);
  };
  EXPECT_LT(residual(256), 1e-3);
  EXPECT_LT(residual(8192), 1e-4);
  EXPECT_GT(residual(16), residual(8192));
}

TEST(InputGradients, ClosedFormOnLinearModel) {
  const models::AiModel model = models::AiModel::Linear({{0.5, -1.0, 2.0}, 0.1});
  const std::vector<double> zero = {0, 0, 0};
  for (double v : InputGradients(model, zero, Label::kTwo).attribution) EXPECT_EQ(v, 0.0);
  const std::vector<double> x = {0.3, 0.6, 0.2};
  const auto g = model.GradientLabel2(x);
  const auto e = InputGradients(model, x, Label::kTwo);
  for (size_t r = 0; r < 3; ++r) EXPECT_DOUBLE_EQ(e.attribution[r], x[r] * g[r]);
  // IG with a zero baseline approaches gradient x input as x shrinks toward it.
  std::vector<double> tiny = {3e-4, 6e-4, 2e-4};
  const auto ig = IntegratedGradients(model, tiny, zero, 64, Label::kTwo);
  const auto ing = InputGradients(model, tiny, Label::kTwo);
  for (size_t r = 0; r < 3; ++r) EXPECT_NEAR(ig.attribution[r], ing.attribution[r], 1e-9);
}

TEST(Explain, TargetsPredictedLabelAndSerializes) {
  const auto& env = testing::SmallEnvironment();
  for (size_t i = 0; i < 10; ++i) {
    const auto& instance = env.pool()[i];
    const auto& e = env.ExplanationFor(instance.id);
    EXPECT_EQ(e.target_label, env.AiLabel(instance.id));
    EXPECT_EQ(ExplanationFromJson(ToJson(instance.id, e)), e);
  }
}

}  // namespace
}  // namespace coax::xai
