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

#ifndef DPLOCALEST_SAMPLE_H_
#define DPLOCALEST_SAMPLE_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace dplocalest {

// Ordered observations. Adjacent samples have equal size and differ in one
// position.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<double> values) : values_(std::move(values)) {}

  std::span<const double> values() const { return values_; }
  std::size_t n() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }

  // Arithmetic mean; 0 for an empty sample.
  double Mean() const;

  // Contiguous sub-sample [begin, end).
  Sample Slice(std::size_t begin, std::size_t end) const;

 private:
  std::vector<double> values_;
};

}  // namespace dplocalest

#endif  // DPLOCALEST_SAMPLE_H_
