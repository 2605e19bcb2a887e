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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

#include "coax/common/error.hpp"
#include "coax/experiment/report.hpp"
#include "coax/experiment/session_record.hpp"
#include "coax/experiment/stats.hpp"
#include "coax/experiment/studies.hpp"
#include "coax/experiment/virtual_session.hpp"
#include "env_support.hpp"
#include "stats_oracle.hpp"

namespace coax::experiment {
namespace {

using cognitive::CognitiveParams;
using cognitive::Strategy;

const std::vector<data::StudySplit>& Splits() {
  static const auto splits =
      testing::SmallEnvironment().Splits(300, 5, data::SplitOptions{10, 36});
  return splits;
}

TEST(Stats, PearsonHandValues) {
  const std::vector<double> a = {1, 2, 3}, b = {2, 4, 7};
  // Sxy = 5, Sxx = 2, Syy = 114/9.
  EXPECT_NEAR(PearsonR(a, b), 15.0 / std::sqrt(228.0), 1e-10);
  EXPECT_NEAR(PearsonR(a, a), 1.0, 1e-15);
  const std::vector<double> neg = {-1, -2, -3};
  EXPECT_NEAR(PearsonR(a, neg), -1.0, 1e-15);
  const std::vector<double> flat = {4, 4, 4};
  EXPECT_THROW(PearsonR(a, flat), ValidationError);
  EXPECT_THROW(PearsonR(a, std::vector<double>{1, 2}), ContractViolation);
}

TEST(Stats, Ci95HandValues) {
  // t with one degree of freedom is Cauchy: t(0.975, 1) = tan(0.475 pi).
  const MeanCi ci = Ci95(std::vector<double>{0.0, 1.0});
  EXPECT_EQ(ci.mean, 0.5);
  EXPECT_NEAR(ci.half_width, 0.5 * std::tan(0.475 * std::numbers::pi), 1e-10);
  EXPECT_EQ(Ci95(std::vector<double>{0.3, 0.3, 0.3}).half_width, 0.0);
  EXPECT_THROW(Ci95(std::vector<double>{1.0}), ContractViolation);
}

TEST(Stats, CiShrinksWithSampleSize) {
  Rng rng(9);
  auto width = [&](size_t n) {
    double total = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> v(n);
      for (double& x : v) x = StandardNormal(rng);
      total += Ci95(v).half_width;
    }
    return total / 200;
  };
  const double w100 = width(100), w400 = width(400);
  EXPECT_NEAR(w100 / w400, 2.0, 0.1);
}

TEST(Stats, RanksSpearmanAndOls) {
  EXPECT_EQ(AverageRanks(std::vector<double>{3, 1, 3, 2}),
            (std::vector<double>{3.5, 1, 3.5, 2}));
  const std::vector<double> x = {1, 2, 3, 4, 5}, cube = {1, 8, 27, 64, 125};
  EXPECT_NEAR(SpearmanRho(x, cube), 1.0, 1e-15);
  const std::vector<double> line = {3, 5, 7, 9, 11};
  const LinearFit fit = OrdinaryLeastSquares(x, line);
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-12);
  const std::vector<double> noise = {0.2, -0.1, 0.1, -0.2, 0.0};
  EXPECT_GT(OrdinaryLeastSquares(x, noise).slope_p, 0.05);
}

TEST(Stats, AnovaTextbook) {
  // Means 2, 5, 8; SSB 54 on 2 df, SSW 6 on 6 df, F = 27.
  // For df1 = 2 the upper tail is (1 + 2F/df2)^(-df2/2) = 10^-3.
  const AnovaResult r = OneWayAnova({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  EXPECT_NEAR(r.f, 27.0, 1e-12);
  EXPECT_NEAR(r.p, 1e-3, 1e-10);
  EXPECT_NEAR(r.mse, 1.0, 1e-12);
  EXPECT_EQ(r.df_between, 2);
  EXPECT_EQ(r.df_within, 6);
}

TEST(Stats, StudentizedRangeQuantileMatchesTable) {
  // Tabulated q(0.05; 3, 60) = 3.399 and q(0.05; 2, 10) = 3.151.
  EXPECT_NEAR(StudentizedRangeQuantile(3, 60, 0.05, 200000), 3.399, 0.02);
  EXPECT_NEAR(StudentizedRangeQuantile(2, 10, 0.05, 200000), 3.151, 0.02);
}

TEST(Tukey, TrivialGroupings) {
  const TukeyResult same = TukeyHsd({{1, 2, 3}, {1, 2, 3}}, 0.05, 100000);
  EXPECT_EQ(same.letters[0], same.letters[1]);
  const TukeyResult apart = TukeyHsd({{0, 1, 2}, {10, 11, 12}}, 0.05, 100000);
  EXPECT_NE(apart.letters[0], apart.letters[1]);
  EXPECT_EQ(apart.letters[1], "A");
  const TukeyResult flat = TukeyHsd({{2, 2}, {2, 2}, {3, 3}}, 0.05, 100000);
  EXPECT_EQ(flat.letters[0], flat.letters[1]);
  EXPECT_NE(flat.letters[0], flat.letters[2]);
  EXPECT_EQ(flat.letters[2], "A");
}

TEST(Tukey, CompactLettersHandCase) {
  // 0 differs from 2 only; 1 overlaps both.
  const std::vector<double> means = {0.9, 0.6, 0.3};
  std::vector<std::vector<bool>> differs(3, std::vector<bool>(3, false));
  differs[0][2] = differs[2][0] = true;
  const auto letters = CompactLetters(means, differs);
  EXPECT_EQ(letters[0], "A");
  EXPECT_EQ(letters[1], "AB");
  EXPECT_EQ(letters[2], "B");
}

TEST(Tukey, MatchesPermutationReference) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto groups = testing::RandomThreeGroupCase(seed);
    const auto reference = testing::PermutationTukey(groups, 0.05, 20000, seed);
    const TukeyResult tukey = TukeyHsd(groups, 0.05, 200000);
    for (const auto& pair : tukey.pairs) {
      EXPECT_EQ(pair.significant, reference[pair.a][pair.b])
          << "case " << seed << " pair " << pair.a << "," << pair.b << " q " << pair.q;
    }
  }
}

TEST(VirtualSession, DeterministicAndProtocolIntact) {
  const auto& env = testing::SmallEnvironment();
  for (Strategy s : {Strategy::kSensitiveFeatures, Strategy::kSalientFeatures,
                     Strategy::kAttributionSum}) {
    const CognitiveParams params = cognitive::MidBoxParams(s);
    const auto a = RunVirtualSessionDetailed(params, Splits()[0], env, XaiType::kAttribution, 3);
    const auto b = RunVirtualSessionDetailed(params, Splits()[0], env, XaiType::kAttribution, 3);
    EXPECT_EQ(a.record, b.record);
    EXPECT_EQ(a.memory_size, 10u);
    EXPECT_EQ(a.hash_after_training, a.hash_after_test);
    EXPECT_NO_THROW(ValidateSessionRecord(a.record, true));
    for (const auto& t : a.record.training) {
      EXPECT_TRUE(t.decision_pre.has_value());
      EXPECT_TRUE(t.decision_xai.has_value());
    }
  }
  const auto none = RunVirtualSession(cognitive::MidBoxParams(Strategy::kSensitiveFeatures),
                                      Splits()[1], env, XaiType::kNone, 3);
  for (const auto& t : none.test) {
    EXPECT_EQ(t.condition, TestCondition::kWithoutXai);
    EXPECT_FALSE(t.explanation.has_value());
  }
}

TEST(VirtualSession, SplitMismatchIsConfigError) {
  data::StudySplit short_split = Splits()[0];
  short_split.training.pop_back();
  EXPECT_THROW(RunVirtualSession(cognitive::MidBoxParams(Strategy::kSensitiveFeatures),
                                 short_split, testing::SmallEnvironment(), XaiType::kNone, 1),
               ConfigError);
}

TEST(VirtualSession, RandomParticipantsSitAtChance) {
  CognitiveParams random;
  random.strategy = Strategy::kRandom;
  double total = 0.0;
  const int sessions = 200;
  for (int i = 0; i < sessions; ++i) {
    const auto record = RunVirtualSession(random, Splits()[i], testing::SmallEnvironment(),
                                          XaiType::kImportance, DeriveSeed(4, {uint64_t(i)}));
    const double c = *Correctness(record);
    EXPECT_GE(c, 0.5 - 3 * 0.5 / 6.0 - 0.1);  // wide binomial bound over 36 trials
    total += c;
  }
  // Mean over 7200 coin flips: sd 0.0059.
  EXPECT_NEAR(total / sessions, 0.5, 0.02);
}

TEST(VirtualSession, AttributionSumOnLinearModelIsAccurate) {
  experiment::EnvironmentConfig config;
  config.model_training_size = 240;
  config.pool_size = 160;
  config.mlp.hidden_units = {};
  config.mlp.epochs = 600;
  config.mlp.learning_rate = 5e-2;
  const StudyEnvironment env = StudyEnvironment::Build(config);
  const auto splits = env.Splits(20, 2, data::SplitOptions{10, 36});
  CognitiveParams params = cognitive::MidBoxParams(Strategy::kAttributionSum);
  params.zeta = 3.0;
  double total = 0.0;
  for (size_t i = 0; i < splits.size(); ++i) {
    const auto record = RunVirtualSession(params, splits[i], env, XaiType::kAttribution,
                                          DeriveSeed(6, {i}));
    total += *Correctness(record, TestCondition::kWithXai);
  }
  EXPECT_GT(total / splits.size(), 0.9);
}

TEST(SessionRecord, JsonRoundTripAndValidation) {
  auto record = RunVirtualSession(cognitive::MidBoxParams(Strategy::kAttributionSum),
                                  Splits()[2], testing::SmallEnvironment(),
                                  XaiType::kImportance, 8);
  EXPECT_EQ(SessionRecordFromJson(ToJson(record)), record);
  testing::TempDir dir("records");
  const std::string path = (dir.path() / "s.jsonl").string();
  WriteSessionRecords(path, {record, record});
  EXPECT_EQ(ReadSessionRecords(path).size(), 2u);

  auto missing = record;
  missing.test[0].explanation.reset();
  bool with_first = missing.test[0].condition == TestCondition::kWithXai;
  if (with_first) {
    EXPECT_THROW(ValidateSessionRecord(missing, true), ValidationError);
  }
  auto short_record = record;
  short_record.test.pop_back();
  EXPECT_THROW(ValidateSessionRecord(short_record, true), ValidationError);
  EXPECT_NO_THROW(ValidateSessionRecord(short_record, false));
}

TEST(SessionRecord, PerceiveScalesToUnitMax) {
  xai::Explanation e;
  e.attribution = {0.2, -0.4, 0.1};
  e.importance = {0.2, 0.0, 0.1};
  e.target_label = Label::kOne;
  const auto shown = Perceive(e, XaiType::kAttribution);
  ASSERT_TRUE(shown.has_value());
  double largest = 0.0;
  for (double v : shown->values) largest = std::max(largest, std::abs(v));
  EXPECT_NEAR(largest, 1.0, 1e-15);
  EXPECT_FALSE(Perceive(e, XaiType::kNone).has_value());
  EXPECT_FALSE(Perceive(std::nullopt, XaiType::kImportance).has_value());
}

TEST(Studies, SmallCellAndReports) {
  const auto& env = testing::SmallEnvironment();
  CellConfig config;
  config.cell = {XaiType::kAttribution, TestCondition::kWithXai};
  config.participants = 8;
  const CellResult cell = RunCell(env, config);
  EXPECT_EQ(cell.correctness.size(), 8u);
  EXPECT_EQ(cell.name, "attribution/with_xai");
  for (double c : cell.correctness) {
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
  EXPECT_GE(cell.ci.half_width, 0.0);
  EXPECT_EQ(RunCell(env, config).correctness, cell.correctness);
  config.cell = {XaiType::kNone, TestCondition::kWithXai};
  EXPECT_THROW(RunCell(env, config), ConfigError);

  const ConditionStudy study = RunConditionStudy(env, 6, 3, 20000);
  EXPECT_EQ(study.cells.size(), 5u);
  EXPECT_EQ(study.tukey.letters.size(), 5u);
  testing::TempDir dir("report");
  WriteConditionReport(dir.path(), "conditions", study);
  for (const char* ext : {".csv", ".jsonl", ".svg"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path() / (std::string("conditions") + ext))) << ext;
  }
  std::ifstream svg(dir.path() / "conditions.svg");
  std::string text((std::istreambuf_iterator<char>(svg)), {});
  EXPECT_NE(text.find("<svg"), std::string::npos);
}

TEST(Report, CsvQuoting) {
  testing::TempDir dir("csv");
  WriteCsv(dir.path() / "t.csv", {"a", "b"}, {{"x,y", "say \"hi\""}});
  std::ifstream in(dir.path() / "t.csv");
  std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(text, "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
}

}  // namespace
}  // namespace coax::experiment
