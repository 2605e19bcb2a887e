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

#ifndef COAX_EXPERIMENT_REPORT_HPP_
#define COAX_EXPERIMENT_REPORT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "coax/experiment/studies.hpp"

namespace coax::experiment {

// Comma-separated table. Cells containing a comma, quote or newline are
// quoted.
void WriteCsv(const std::filesystem::path& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows);

struct Bar {
  std::string label;
  double mean = 0.0;
  double half_width = 0.0;
  std::string annotation;  // e.g. Tukey letters
};

// Bars with 95% CI whiskers on a [0, 1] axis.
std::string BarChartSvg(const std::string& title, const std::vector<Bar>& bars);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> half_width;
};

// Lines with CI bands on a [0, 1] y axis; `x_labels` replaces numeric ticks
// when non-empty.
std::string LineChartSvg(const std::string& title, const std::string& x_name,
                         const std::vector<Series>& series,
                         const std::vector<std::string>& x_labels = {});

// Per-condition table, raw per-participant correctness and a bar chart.
void WriteConditionReport(const std::filesystem::path& dir, const std::string& stem,
                          const ConditionStudy& study);

// Per-cell table and trend chart; `x_labels` names the sweep points.
void WriteSweepReport(const std::filesystem::path& dir, const std::string& stem,
                      const SweepStudy& study,
                      const std::vector<std::string>& x_labels = {});

void WriteTrendReport(const std::filesystem::path& dir, const std::string& stem,
                      const TrendStudy& trend);

}  // namespace coax::experiment

#endif  // COAX_EXPERIMENT_REPORT_HPP_
