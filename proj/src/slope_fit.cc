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

#include "dplocalest/slope_fit.h"

#include <cmath>
#include <set>

#include "dplocalest/errors.h"

namespace dplocalest {

SlopeFit FitLogLogSlope(const std::vector<std::pair<double, double>>& points) {
  std::set<double> xs;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) {
      throw ParamError("FitLogLogSlope: coordinates must be positive");
    }
    xs.insert(x);
  }
  if (xs.size() < 2) throw ParamError("FitLogLogSlope: need two distinct x");
  const double m = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    sx += std::log(x);
    sy += std::log(y);
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    const double dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (const auto& [x, y] : points) {
    const double r = std::log(y) - (fit.intercept + fit.slope * std::log(x));
    ss_res += r * r;
  }
  if (syy <= 1e-300) {
    fit.r2 = 1.0;
  } else {
    fit.r2 = std::fmax(0.0, std::fmin(1.0, 1.0 - ss_res / syy));
  }
  return fit;
}

}  // namespace dplocalest
