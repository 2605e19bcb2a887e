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

#include "coax/data/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>

#include "coax/common/error.hpp"

namespace coax::data {

namespace {

std::string Trim(std::string_view text) {
  size_t begin = 0;
  size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  std::string out(text.substr(begin, end - begin));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

std::vector<std::string> SplitRow(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    if (c == delimiter && !quoted) {
      cells.push_back(Trim(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(Trim(cell));
  return cells;
}

std::optional<double> ParseNumber(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string Lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return text;
}

}  // namespace

double EncodeCategoricalBinary(const std::string& cell) {
  static const std::map<std::string, double> kEncoding = {
      {"yes", 1.0},  {"male", 1.0},   {"true", 1.0},  {"1", 1.0},
      {"no", 0.0},   {"female", 0.0}, {"false", 0.0}, {"0", 0.0},
  };
  const auto it = kEncoding.find(Lower(Trim(cell)));
  if (it == kEncoding.end()) {
    throw ParseError("unknown categorical value '" + cell + "'", -1);
  }
  return it->second;
}

std::vector<double> Normalize(std::span<const double> raw,
                              const DatasetSpec& spec) {
  if (raw.size() != spec.num_attributes()) {
    throw ShapeError("expected " + std::to_string(spec.num_attributes()) +
                     " attribute values, got " + std::to_string(raw.size()));
  }
  std::vector<double> norm(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    const auto& attribute = spec.attributes[i];
    const double width = attribute.max - attribute.min;
    if (!(width > 0.0) || !std::isfinite(width)) {
      throw ConfigError("attribute '" + attribute.name +
                        "' has a zero-width or non-finite range");
    }
    norm[i] = std::clamp((raw[i] - attribute.min) / width, 0.0, 1.0);
  }
  return norm;
}

std::vector<Instance> LoadDataset(std::istream& in, const DatasetSpec& spec,
                                  char delimiter) {
  spec.Validate();
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError("table is empty (no header row)");
  }
  const std::vector<std::string> header = SplitRow(line, delimiter);
  auto column_of = [&](const std::string& name) -> std::optional<size_t> {
    for (size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };

  std::vector<size_t> attribute_columns;
  for (const auto& attribute : spec.attributes) {
    const std::string& wanted =
        attribute.column.empty() ? attribute.name : attribute.column;
    const auto column = column_of(wanted);
    if (!column) throw SchemaError("missing column '" + wanted + "'");
    attribute_columns.push_back(*column);
  }
  const auto label_column = column_of(spec.label.column);
  if (!label_column) {
    throw SchemaError("missing column '" + spec.label.column + "'");
  }
  const auto id_column = column_of("id");

  std::vector<Instance> instances;
  long row = 0;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    ++row;
    const std::vector<std::string> cells = SplitRow(line, delimiter);
    if (cells.size() != header.size()) {
      throw ParseError("row has " + std::to_string(cells.size()) +
                           " cells, header has " +
                           std::to_string(header.size()),
                       row);
    }
    Instance instance;
    instance.id = id_column ? cells[*id_column] : "row-" + std::to_string(row);
    for (size_t a = 0; a < spec.attributes.size(); ++a) {
      const std::string& cell = cells[attribute_columns[a]];
      if (spec.attributes[a].kind == AttributeKind::kCategoricalBinary) {
        try {
          instance.raw_values.push_back(EncodeCategoricalBinary(cell));
        } catch (const ParseError&) {
          throw ParseError("unparseable categorical cell '" + cell + "'", row);
        }
      } else {
        const auto value = ParseNumber(cell);
        if (!value) throw ParseError("unparseable cell '" + cell + "'", row);
        instance.raw_values.push_back(*value);
      }
    }
    const std::string& label_cell = cells[*label_column];
    bool positive = std::find(spec.label.positive_values.begin(),
                              spec.label.positive_values.end(),
                              label_cell) != spec.label.positive_values.end();
    if (!positive && spec.label.threshold) {
      const auto value = ParseNumber(label_cell);
      if (!value) {
        throw ParseError("unparseable label '" + label_cell + "'", row);
      }
      positive = *value >= *spec.label.threshold;
    }
    instance.truth_label = positive ? Label::kTwo : Label::kOne;
    instance.norm_values = Normalize(instance.raw_values, spec);
    instances.push_back(std::move(instance));
  }
  return instances;
}

std::vector<Instance> LoadDataset(const std::string& path,
                                  const DatasetSpec& spec, char delimiter) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open " + path);
  return LoadDataset(in, spec, delimiter);
}

}  // namespace coax::data
