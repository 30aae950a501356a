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

#include "dplocalest/numerics.h"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dplocalest {

double Integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  if (!(b > a)) return 0.0;
  double error = 0.0;
  double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, 15, rel_tol, &error);
  if (!std::isfinite(value)) throw NumericalError("Integrate: non-finite value");
  return value;
}

double IntegrateSegments(const std::function<double(double)>& f, double a,
                         double b, int segments, double rel_tol) {
  if (segments < 1) segments = 1;
  double width = (b - a) / segments;
  double total = 0.0;
  for (int i = 0; i < segments; ++i) {
    double lo = a + i * width;
    double hi = (i + 1 == segments) ? b : lo + width;
    total += Integrate(f, lo, hi, rel_tol);
  }
  return total;
}

namespace {

double Wilson(std::size_t successes, std::size_t trials, double z, double sign) {
  if (trials == 0) return sign < 0 ? 0.0 : 1.0;
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double center = p + z2 / (2.0 * n);
  double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return std::clamp((center + sign * spread) / (1.0 + z2 / n), 0.0, 1.0);
}

}  // namespace

double WilsonLower(std::size_t successes, std::size_t trials, double z) {
  return Wilson(successes, trials, z, -1.0);
}

double WilsonUpper(std::size_t successes, std::size_t trials, double z) {
  return Wilson(successes, trials, z, 1.0);
}

double Median(std::vector<double> values) {
  if (values.empty()) throw EmptyError("Median of empty collection");
  std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

}  // namespace dplocalest
