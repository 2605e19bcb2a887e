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

#ifndef COAX_COGNITIVE_MEMORY_HPP_
#define COAX_COGNITIVE_MEMORY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coax/common/types.hpp"

namespace coax::cognitive {

// One remembered training trial. `features` lists the attended feature
// indices in ascending order and `values` holds their normalized values.
// `salience` and `toward_label1` are full-length copies of the explanation
// shown at encoding time, empty when none was shown.
struct ExemplarTrace {
  uint64_t id = 0;
  std::vector<size_t> features;
  std::vector<double> values;
  std::vector<double> salience;
  std::vector<double> toward_label1;
  Label ai_label = Label::kOne;
  int t_stored = 0;

  std::optional<double> ValueAt(size_t feature) const;
  bool has_salience() const { return !salience.empty(); }
};

// Append-only exemplar store for one participant.
class Memory {
 public:
  // Assigns the next id and validates the trace.
  const ExemplarTrace& Add(ExemplarTrace trace);

  const std::vector<ExemplarTrace>& traces() const { return traces_; }
  size_t size() const { return traces_.size(); }
  bool empty() const { return traces_.empty(); }
  // FNV-1a digest of every stored field; used to assert test trials leave
  // memory untouched.
  uint64_t Hash() const;

 private:
  std::vector<ExemplarTrace> traces_;
};

// A = -lambda ln(delta_t). Throws ContractViolation when delta_t < 1.
double Activation(double delta_t, double lambda = 0.5);

// S = exp(-alpha d + A).
double Similarity(double distance, double alpha, double activation);

struct Retrieved {
  const ExemplarTrace* trace;
  double activation;
};

// Traces with activation >= rho at delta_t = current_trial - t_stored + 1.
std::vector<Retrieved> Retrieve(const Memory& memory, int current_trial,
                                double rho, double lambda = 0.5);

// Mean squared difference over the features of `over` that the trace also
// stores. Empty intersection gives nullopt.
std::optional<double> MeanSquaredDistance(std::span<const double> x,
                                          const ExemplarTrace& trace,
                                          std::span<const size_t> over);

// Generalized context model: share of similarity mass on label-1 exemplars.
// Throws ContractViolation on empty input or non-positive total mass.
double GcmProbaLabel1(std::span<const double> similarities,
                      std::span<const Label> labels);

}  // namespace coax::cognitive

#endif  // COAX_COGNITIVE_MEMORY_HPP_
