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

#include "coax/cognitive/memory.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "coax/common/error.hpp"

namespace coax::cognitive {

namespace {

class Fnv1a {
 public:
  void Add(const void* data, size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < bytes; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
  }
  template <typename T>
  void AddValue(const T& value) {
    Add(&value, sizeof(T));
  }
  template <typename T>
  void AddVector(const std::vector<T>& values) {
    AddValue(values.size());
    if (!values.empty()) Add(values.data(), values.size() * sizeof(T));
  }
  uint64_t digest() const { return state_; }

 private:
  uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::optional<double> ExemplarTrace::ValueAt(size_t feature) const {
  const auto it = std::lower_bound(features.begin(), features.end(), feature);
  if (it == features.end() || *it != feature) return std::nullopt;
  return values[static_cast<size_t>(it - features.begin())];
}

const ExemplarTrace& Memory::Add(ExemplarTrace trace) {
  if (trace.features.empty()) {
    throw ContractViolation("exemplar must attend at least one feature");
  }
  if (trace.features.size() != trace.values.size()) {
    throw ShapeError("exemplar features and values differ in length");
  }
  if (!std::is_sorted(trace.features.begin(), trace.features.end()) ||
      std::adjacent_find(trace.features.begin(), trace.features.end()) !=
          trace.features.end()) {
    throw ContractViolation("exemplar features must be strictly ascending");
  }
  for (double v : trace.values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ContractViolation("exemplar values must lie in [0,1]");
    }
  }
  trace.id = traces_.size();
  traces_.push_back(std::move(trace));
  return traces_.back();
}

uint64_t Memory::Hash() const {
  Fnv1a h;
  h.AddValue(traces_.size());
  for (const auto& t : traces_) {
    h.AddValue(t.id);
    h.AddVector(t.features);
    h.AddVector(t.values);
    h.AddVector(t.salience);
    h.AddVector(t.toward_label1);
    h.AddValue(ToInt(t.ai_label));
    h.AddValue(t.t_stored);
  }
  return h.digest();
}

double Activation(double delta_t, double lambda) {
  if (!(delta_t >= 1.0)) {
    throw ContractViolation("elapsed time must be at least one trial");
  }
  return -lambda * std::log(delta_t);
}

double Similarity(double distance, double alpha, double activation) {
  return std::exp(-alpha * distance + activation);
}

std::vector<Retrieved> Retrieve(const Memory& memory, int current_trial,
                                double rho, double lambda) {
  std::vector<Retrieved> retrieved;
  for (const auto& trace : memory.traces()) {
    if (trace.t_stored > current_trial) {
      throw ContractViolation("exemplar stored after the current trial");
    }
    const double a = Activation(current_trial - trace.t_stored + 1.0, lambda);
    if (a >= rho) retrieved.push_back({&trace, a});
  }
  return retrieved;
}

std::optional<double> MeanSquaredDistance(std::span<const double> x,
                                          const ExemplarTrace& trace,
                                          std::span<const size_t> over) {
  double sum = 0.0;
  size_t count = 0;
  for (size_t feature : over) {
    const auto stored = trace.ValueAt(feature);
    if (!stored) continue;
    const double diff = x[feature] - *stored;
    sum += diff * diff;
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

double GcmProbaLabel1(std::span<const double> similarities,
                      std::span<const Label> labels) {
  if (similarities.empty() || similarities.size() != labels.size()) {
    throw ContractViolation("GCM needs one label per retrieved exemplar");
  }
  double label1 = 0.0, total = 0.0;
  for (size_t i = 0; i < similarities.size(); ++i) {
    total += similarities[i];
    if (labels[i] == Label::kOne) label1 += similarities[i];
  }
  if (!(total > 0.0)) throw ContractViolation("GCM similarity mass is zero");
  return label1 / total;
}

}  // namespace coax::cognitive
