/*
 * Copyright 2026 The CIET Authors.
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

#ifndef CIET_ERROR_H_
#define CIET_ERROR_H_

#include <stdexcept>
#include <string>

namespace ciet {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied parameters (generator spec, constraints, thresholds).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Input data that cannot be read or mapped (bad rows, unreadable files).
class DataError : public Error {
 public:
  using Error::Error;
};

// Missing columns, or a dataset that does not match a model's features.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Malformed or invariant-violating model documents.
class ModelError : public Error {
 public:
  using Error::Error;
};

// A rate P^T - P^C requested on counts with an empty group.
class UndefinedRateError : public Error {
 public:
  using Error::Error;
};

// LGR with a zero parent uplift.
class DegenerateDenominatorError : public Error {
 public:
  using Error::Error;
};

// A binary split with an empty group on one side.
class IneligibleSplitError : public Error {
 public:
  using Error::Error;
};

// Qini normalizer of zero (optimal curve equals the random diagonal).
class UndefinedCoefficientError : public Error {
 public:
  using Error::Error;
};

}  // namespace ciet

#endif  // CIET_ERROR_H_
