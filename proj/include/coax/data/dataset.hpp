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

#ifndef COAX_DATA_DATASET_HPP_
#define COAX_DATA_DATASET_HPP_

#include <istream>
#include <span>
#include <string>
#include <vector>

#include "coax/data/dataset_spec.hpp"
#include "coax/data/instance.hpp"

namespace coax::data {

// Parses a delimited table with a header row. Categorical-binary attributes
// use a fixed encoding (yes/male/true/1 -> 1, no/female/false/0 -> 0) and
// labels are binarized with the spec's LabelRule. Row order is preserved.
// An "id" column, when present, supplies instance ids; otherwise rows are
// named "row-<n>" with n the 1-based data row.
std::vector<Instance> LoadDataset(std::istream& in, const DatasetSpec& spec,
                                  char delimiter = ',');
std::vector<Instance> LoadDataset(const std::string& path,
                                  const DatasetSpec& spec,
                                  char delimiter = ',');

// Min-max scaling per attribute using the spec ranges, clamped to [0,1].
std::vector<double> Normalize(std::span<const double> raw,
                              const DatasetSpec& spec);

// Encoding used for categorical-binary cells. Throws ParseError(-1) on an
// unknown token.
double EncodeCategoricalBinary(const std::string& cell);

}  // namespace coax::data

#endif  // COAX_DATA_DATASET_HPP_
