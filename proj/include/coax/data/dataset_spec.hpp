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

#ifndef COAX_DATA_DATASET_SPEC_HPP_
#define COAX_DATA_DATASET_SPEC_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coax::data {

enum class DatasetName { kWineQuality, kAdultIncome, kForestCover, kSynthetic };

enum class AttributeKind { kNumeric, kCategoricalBinary };

struct AttributeSpec {
  std::string name;    // display name shown to participants
  AttributeKind kind = AttributeKind::kNumeric;
  double min = 0.0;
  double max = 1.0;
  std::string column;  // header name in the source table
};

// How the source label column maps onto {1, 2}. A cell whose text is listed
// in `positive_values` becomes label 2; otherwise, if `threshold` is set, a
// numeric cell >= threshold becomes label 2. Everything else is label 1.
struct LabelRule {
  std::string column;
  std::vector<std::string> positive_values;
  std::optional<double> threshold;
};

struct DatasetSpec {
  DatasetName name = DatasetName::kSynthetic;
  std::vector<AttributeSpec> attributes;
  std::pair<std::string, std::string> label_names{"Label 1", "Label 2"};
  LabelRule label;

  size_t num_attributes() const { return attributes.size(); }

  // Throws ConfigError on an invalid spec (e.g. min >= max on a numeric
  // attribute, or a built-in dataset without exactly five attributes).
  void Validate() const;
};

std::string ToString(DatasetName name);
DatasetName ParseDatasetName(const std::string& text);

DatasetSpec WineQualitySpec();
DatasetSpec AdultIncomeSpec();
DatasetSpec ForestCoverSpec();
// `num_attributes` unit-range numeric attributes named "A1".."An".
DatasetSpec SyntheticSpec(size_t num_attributes);
DatasetSpec BuiltinSpec(DatasetName name);

}  // namespace coax::data

#endif  // COAX_DATA_DATASET_SPEC_HPP_
