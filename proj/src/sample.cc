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

#include "dplocalest/sample.h"

#include <algorithm>
#include <numeric>

#include "dplocalest/distribution.h"
#include "dplocalest/errors.h"

namespace dplocalest {

double Sample::Mean() const {
  if (values_.empty()) return 0.0;
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

Sample Sample::Slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > values_.size()) {
    throw ParamError("Sample::Slice: bad bounds");
  }
  return Sample(std::vector<double>(values_.begin() + begin,
                                    values_.begin() + end));
}

Sample Distribution::DrawSample(std::size_t n, Rng& rng) const {
  std::vector<double> out(n);
  for (double& v : out) v = Draw(rng);
  return Sample(std::move(out));
}

}  // namespace dplocalest
