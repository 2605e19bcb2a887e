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

#ifndef COAX_COMMON_ERROR_HPP_
#define COAX_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace coax {

// Root of every error thrown by the library. Each subclass names one failure
// category so callers (CLI, HTTP layer) can map it to an exit code or status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input table or record does not match the expected schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A data row or record line could not be parsed. Carries the offending index.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long index)
      : Error(what + " (at " + std::to_string(index) + ")"), index_(index) {}
  long index() const { return index_; }

 private:
  long index_;
};

// Invalid configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Tensor/vector dimension mismatch.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Caller broke a documented precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Not enough instances, splits or slots to satisfy a request.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Operation requires a capability the model does not have (e.g. gradients).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Lookup of an unknown key (instance id, session token).
class LookupError : public Error {
 public:
  using Error::Error;
};

// A value is outside its valid range.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Model training failed (e.g. a single class in the data).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace coax

#endif  // COAX_COMMON_ERROR_HPP_
