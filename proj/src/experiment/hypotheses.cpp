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

#include "coax/experiment/hypotheses.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "coax/experiment/stats.hpp"

namespace coax::experiment {

namespace {

std::string Format(const char* format, double a, double b = 0.0) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

std::vector<ConditionCell> WithoutXaiCells() {
  std::vector<ConditionCell> cells;
  for (const auto& c : StudyConditions()) {
    if (c.condition == TestCondition::kWithoutXai) cells.push_back(c);
  }
  return cells;
}

// (iv, correctness) pairs of every participant in cells with lo <= iv <= hi.
void Pool(const std::vector<const CellResult*>& series, double lo, double hi,
          std::vector<double>& x, std::vector<double>& y) {
  for (const CellResult* c : series) {
    if (c->iv < lo || c->iv > hi) continue;
    for (double v : c->correctness) {
      x.push_back(c->iv);
      y.push_back(v);
    }
  }
}

const ConditionCell kAttributionWith{XaiType::kAttribution, TestCondition::kWithXai};

}  // namespace

Verdict CheckConditionOrdering(const ConditionStudy& study) {
  Verdict v;
  size_t target = study.cells.size(), best = 0;
  for (size_t i = 0; i < study.cells.size(); ++i) {
    if (study.cells[i].cell == kAttributionWith) target = i;
    if (study.cells[i].ci.mean > study.cells[best].ci.mean) best = i;
  }
  if (target == study.cells.size()) {
    v.detail = "attribution/with_xai cell missing";
    return v;
  }
  const std::string& letters = study.tukey.letters.at(target);
  const bool top = study.cells[target].ci.mean >= study.cells[best].ci.mean;
  const bool group_a = letters.find('A') != std::string::npos;
  v.pass = top && group_a;
  v.detail = "attribution/with_xai " + Format("%.3f", study.cells[target].ci.mean) +
             " letters " + letters + ", best other " + study.cells[best].name;
  if (best == target) {
    double runner_up = 0.0;
    for (size_t i = 0; i < study.cells.size(); ++i) {
      if (i != target) runner_up = std::max(runner_up, study.cells[i].ci.mean);
    }
    v.detail = "attribution/with_xai " + Format("%.3f vs next %.3f", study.cells[target].ci.mean,
                                                runner_up) +
               ", letters " + letters;
  }
  return v;
}

Verdict CheckTrainingPlateau(const SweepStudy& study, double rise_until) {
  Verdict v;
  v.pass = true;
  for (const auto& cell : WithoutXaiCells()) {
    const auto series = study.Series(cell);
    if (series.empty()) continue;
    std::vector<double> x, y, xs, ys;
    Pool(series, series.front()->iv, rise_until, x, y);
    Pool(series, rise_until + 1, series.back()->iv, xs, ys);
    const double rho = SpearmanRho(x, y);
    const LinearFit late = OrdinaryLeastSquares(xs, ys);
    const bool ok = rho > 0.0 && late.slope_p >= 0.05;
    v.pass = v.pass && ok;
    if (!v.detail.empty()) v.detail += "; ";
    v.detail += CellName(cell) + Format(" rise rho %.3f, late slope p %.3f", rho, late.slope_p);
  }
  return v;
}

Verdict CheckAttributeDecline(const SweepStudy& study) {
  Verdict v;
  v.pass = true;
  for (const auto& cell : WithoutXaiCells()) {
    const auto series = study.Series(cell);
    if (series.empty()) continue;
    std::vector<double> x, y;
    Pool(series, series.front()->iv, series.back()->iv, x, y);
    const double rho = SpearmanRho(x, y);
    v.pass = v.pass && rho < 0.0;
    if (!v.detail.empty()) v.detail += "; ";
    v.detail += CellName(cell) + Format(" rho %.3f", rho);
  }
  const auto top = study.Series(kAttributionWith);
  int points_on_top = 0;
  for (const CellResult* t : top) {
    bool highest = true;
    for (const auto& c : study.cells) {
      if (c.iv == t->iv && !(c.cell == kAttributionWith) && c.ci.mean > t->ci.mean) highest = false;
    }
    points_on_top += highest;
  }
  v.pass = v.pass && !top.empty() && points_on_top == static_cast<int>(top.size());
  v.detail += "; attribution/with_xai on top at " + std::to_string(points_on_top) + "/" +
              std::to_string(top.size()) + " points";
  return v;
}

Verdict CheckExplainerOrder(const SweepStudy& study, double worse, double better) {
  double sum[2] = {0, 0};
  size_t count[2] = {0, 0};
  for (const auto& c : study.cells) {
    const int slot = c.iv == worse ? 0 : (c.iv == better ? 1 : -1);
    if (slot < 0) continue;
    for (double v : c.correctness) {
      sum[slot] += v;
      ++count[slot];
    }
  }
  Verdict v;
  if (count[0] == 0 || count[1] == 0) {
    v.detail = "method missing from study";
    return v;
  }
  const double a = sum[0] / count[0], b = sum[1] / count[1];
  v.pass = a <= b;
  v.detail = Format("pooled means %.3f vs %.3f", a, b);
  return v;
}

Verdict CheckTrend(const TrendStudy& trend, double threshold) {
  Verdict v;
  v.pass = threshold > 0 ? trend.spearman > threshold : trend.spearman < threshold;
  v.detail = ToString(trend.parameter) +
             Format(" spearman %.3f (over bin means %.3f)", trend.spearman, trend.bin_spearman);
  return v;
}

}  // namespace coax::experiment
