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

#ifndef DPLOCALEST_DISTRIBUTION_H_
#define DPLOCALEST_DISTRIBUTION_H_

#include <cstddef>
#include <functional>
#include <string>

#include "dplocalest/rng.h"
#include "dplocalest/sample.h"

namespace dplocalest {

// A law on the real line that can be sampled, integrated against, and
// compared with other members of the same comparison class through
// log-density ratios.
class Distribution {
 public:
  virtual ~Distribution() = default;

  // Log density with respect to a dominating measure shared by every member
  // of ComparisonClass(). May return -inf.
  virtual double LogDensity(double x) const = 0;

  virtual double Draw(Rng& rng) const = 0;

  virtual Sample DrawSample(std::size_t n, Rng& rng) const;

  // E[g(x)] for bounded measurable g.
  virtual double Expect(const std::function<double(double)>& g) const = 0;

  // Members with equal classes have comparable log densities.
  virtual std::string ComparisonClass() const = 0;

  // True when `other` describes the same law.
  virtual bool SameLaw(const Distribution& other) const = 0;

  virtual std::string Describe() const = 0;
};

}  // namespace dplocalest

#endif  // DPLOCALEST_DISTRIBUTION_H_
