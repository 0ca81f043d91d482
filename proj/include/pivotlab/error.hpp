// Copyright 2026 The pivotlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIVOTLAB_ERROR_HPP_
#define PIVOTLAB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace pivotlab {

// Base of every error raised by the library. The C API maps each subclass to
// a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments violate an operation's preconditions (dimension mismatch, k > n,
// axis out of range, malformed point text, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An experiment configuration is malformed or infeasible. Raised before any
// sampling work starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A statistic is undefined for the observed sample (e.g. zero variance).
class DegenerateDistribution : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pivotlab

#endif  // PIVOTLAB_ERROR_HPP_
