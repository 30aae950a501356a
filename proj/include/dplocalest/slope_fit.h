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

#ifndef DPLOCALEST_SLOPE_FIT_H_
#define DPLOCALEST_SLOPE_FIT_H_

#include <utility>
#include <vector>

namespace dplocalest {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least squares line through (ln x, ln y). A perfect fit, including a flat
// one, has r2 = 1.
SlopeFit FitLogLogSlope(const std::vector<std::pair<double, double>>& points);

}  // namespace dplocalest

#endif  // DPLOCALEST_SLOPE_FIT_H_
