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

#ifndef DPLOCALEST_NUMERICS_H_
#define DPLOCALEST_NUMERICS_H_

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "dplocalest/errors.h"

namespace dplocalest {

inline constexpr double kThetaTolerance = 1e-10;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool Contains(double x) const { return x > lo && x < hi; }
  double Clip(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
};

// Root of a continuous function with f(lo) and f(hi) of opposite sign (or
// zero). Iterates until the bracket is narrower than `tol`.
template <typename F>
double Bisect(F&& f, double lo, double hi, double tol = kThetaTolerance) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NumericalError("Bisect: no sign change on bracket");
  }
  for (int i = 0; i < 400 && hi - lo > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct MonotoneSolution {
  double x = 0.0;
  // True when `target` lies outside the range of f on the search limits and
  // the nearest limit was returned instead.
  bool projected = false;
};

// Solves f(x) = target for a nondecreasing f. The bracket grows
// geometrically from `start` and is confined to `limits`.
template <typename F>
MonotoneSolution SolveIncreasing(F&& f, double target, double start,
                                 Interval limits, double tol = kThetaTolerance,
                                 double initial_step = 0.5) {
  start = limits.Clip(start);
  double f_start = f(start);
  if (f_start == target) return {start, false};
  double lo = start;
  double hi = start;
  double step = initial_step;
  if (f_start < target) {
    while (true) {
      double next = limits.Clip(start + step);
      if (f(next) >= target) {
        hi = next;
        break;
      }
      lo = next;
      if (next >= limits.hi) return {limits.hi, true};
      step *= 2.0;
    }
  } else {
    while (true) {
      double next = limits.Clip(start - step);
      if (f(next) <= target) {
        lo = next;
        break;
      }
      hi = next;
      if (next <= limits.lo) return {limits.lo, true};
      step *= 2.0;
    }
  }
  for (int i = 0; i < 400 && hi - lo > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), false};
}

// Adaptive Gauss-Kronrod (15 point) integral of f over [a, b]. Refinement
// stops once the error estimate is below rel_tol times the L1 norm.
double Integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-11);

// Same, after splitting [a, b] into `segments` equal pieces.
double IntegrateSegments(const std::function<double(double)>& f, double a,
                         double b, int segments, double rel_tol = 1e-11);

// One-sided Wilson score bounds for a binomial proportion.
double WilsonLower(std::size_t successes, std::size_t trials, double z);
double WilsonUpper(std::size_t successes, std::size_t trials, double z);

double Median(std::vector<double> values);

// Standard normal upper tail P(Z > z).
inline double NormalUpperTail(double z) {
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace dplocalest

#endif  // DPLOCALEST_NUMERICS_H_
