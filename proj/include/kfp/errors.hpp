// Copyright 2026 The kfp-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace kfp {

/// Invalid argument or model parameter (non-positive L, negative time, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Conditioning on B_t at t = 0, where Σ_BB vanishes.
class DegenerateConditioningError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The wrapped conditional law has no guaranteed uniform component (β ≤ 0).
class SpreadingUnavailableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SizeMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Too few points with usable signal to fit a decay rate.
class FitWindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical quantity was requested outside its domain of validity.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kfp
