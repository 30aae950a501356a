//
// Copyright 2026 The dplocalest Authors.
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
//

#ifndef DPLOCALEST_ERRORS_H_
#define DPLOCALEST_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dplocalest {

enum class ErrorCode {
  kDomain,
  kParam,
  kFamilyMismatch,
  kEmpty,
  kInsufficientData,
  kNumerical,
  kNoCrossover,
  kSampleComplexityCap,
  kConfig,
};

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Parameter outside the natural parameter space.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& m) : Error(ErrorCode::kDomain, m) {}
};

// Invalid numeric argument such as a non-positive epsilon.
class ParamError : public Error {
 public:
  explicit ParamError(const std::string& m) : Error(ErrorCode::kParam, m) {}
};

class FamilyMismatch : public Error {
 public:
  explicit FamilyMismatch(const std::string& m)
      : Error(ErrorCode::kFamilyMismatch, m) {}
};

class EmptyError : public Error {
 public:
  explicit EmptyError(const std::string& m) : Error(ErrorCode::kEmpty, m) {}
};

// Sample too small for the requested procedure to produce any output.
class InsufficientData : public Error {
 public:
  explicit InsufficientData(const std::string& m)
      : Error(ErrorCode::kInsufficientData, m) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& m)
      : Error(ErrorCode::kNumerical, m) {}
};

class NoCrossover : public Error {
 public:
  explicit NoCrossover(const std::string& m)
      : Error(ErrorCode::kNoCrossover, m) {}
};

class SampleComplexityCapExceeded : public Error {
 public:
  explicit SampleComplexityCapExceeded(const std::string& m)
      : Error(ErrorCode::kSampleComplexityCap, m) {}
};

// Invalid experiment configuration. `field()` holds the offending path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& m)
      : Error(ErrorCode::kConfig, field + ": " + m), field_(field) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace dplocalest

#endif  // DPLOCALEST_ERRORS_H_
