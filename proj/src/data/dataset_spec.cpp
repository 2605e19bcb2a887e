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

#include "coax/data/dataset_spec.hpp"

#include "coax/common/error.hpp"

namespace coax::data {

void DatasetSpec::Validate() const {
  if (attributes.empty()) throw ConfigError("dataset spec has no attributes");
  if (name != DatasetName::kSynthetic && attributes.size() != 5) {
    throw ConfigError(ToString(name) + " must have exactly 5 attributes");
  }
  for (const auto& attribute : attributes) {
    if (attribute.kind == AttributeKind::kNumeric &&
        !(attribute.min < attribute.max)) {
      throw ConfigError("attribute '" + attribute.name +
                        "' has an empty range");
    }
  }
}

std::string ToString(DatasetName name) {
  switch (name) {
    case DatasetName::kWineQuality:
      return "wine";
    case DatasetName::kAdultIncome:
      return "adult";
    case DatasetName::kForestCover:
      return "forest";
    case DatasetName::kSynthetic:
      return "synthetic";
  }
  return "synthetic";
}

DatasetName ParseDatasetName(const std::string& text) {
  if (text == "wine") return DatasetName::kWineQuality;
  if (text == "adult") return DatasetName::kAdultIncome;
  if (text == "forest") return DatasetName::kForestCover;
  if (text == "synthetic") return DatasetName::kSynthetic;
  throw ConfigError("unknown dataset '" + text + "'");
}

namespace {

AttributeSpec Numeric(std::string name, double min, double max,
                      std::string column) {
  return {std::move(name), AttributeKind::kNumeric, min, max,
          std::move(column)};
}

AttributeSpec Binary(std::string name, std::string column) {
  return {std::move(name), AttributeKind::kCategoricalBinary, 0.0, 1.0,
          std::move(column)};
}

}  // namespace

// Ranges are the union of the public red and white tables.
DatasetSpec WineQualitySpec() {
  DatasetSpec spec;
  spec.name = DatasetName::kWineQuality;
  spec.attributes = {
      Numeric("Vinegar Taint", 0.08, 1.58, "volatile acidity"),
      Numeric("SO2", 6.0, 440.0, "total sulfur dioxide"),
      Numeric("pH", 2.72, 4.01, "pH"),
      Numeric("Sulphates", 0.22, 2.0, "sulphates"),
      Numeric("Alcohol", 8.0, 15.0, "alcohol"),
  };
  spec.label = {"quality", {}, 6.0};
  return spec;
}

DatasetSpec AdultIncomeSpec() {
  DatasetSpec spec;
  spec.name = DatasetName::kAdultIncome;
  spec.attributes = {
      Numeric("Age", 17.0, 90.0, "age"),
      Numeric("Years of Education", 1.0, 16.0, "education-num"),
      Binary("Married", "married"),
      Binary("Sex", "sex"),
      Numeric("Capital Gain", 0.0, 99999.0, "capital-gain"),
  };
  spec.label = {"income", {">50K", ">50K."}, std::nullopt};
  return spec;
}

DatasetSpec ForestCoverSpec() {
  DatasetSpec spec;
  spec.name = DatasetName::kForestCover;
  spec.attributes = {
      Numeric("Elevation", 1859.0, 3858.0, "Elevation"),
      Numeric("Angle", 0.0, 66.0, "Slope"),
      Numeric("Dist to Water", 0.0, 1397.0,
              "Horizontal_Distance_To_Hydrology"),
      Numeric("Dist to Road", 0.0, 7117.0, "Horizontal_Distance_To_Roadways"),
      Numeric("Hillshade", 0.0, 254.0, "Hillshade_Noon"),
  };
  // Spruce/Fir (1) vs Lodgepole Pine (2); other cover types count as label 1.
  spec.label = {"Cover_Type", {"2"}, std::nullopt};
  return spec;
}

DatasetSpec SyntheticSpec(size_t num_attributes) {
  DatasetSpec spec;
  spec.name = DatasetName::kSynthetic;
  for (size_t i = 0; i < num_attributes; ++i) {
    const std::string name = "A" + std::to_string(i + 1);
    spec.attributes.push_back(Numeric(name, 0.0, 1.0, name));
  }
  spec.label = {"label", {}, 1.5};
  return spec;
}

DatasetSpec BuiltinSpec(DatasetName name) {
  switch (name) {
    case DatasetName::kWineQuality:
      return WineQualitySpec();
    case DatasetName::kAdultIncome:
      return AdultIncomeSpec();
    case DatasetName::kForestCover:
      return ForestCoverSpec();
    case DatasetName::kSynthetic:
      return SyntheticSpec(5);
  }
  return SyntheticSpec(5);
}

}  // namespace coax::data
