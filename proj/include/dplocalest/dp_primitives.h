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

#ifndef DPLOCALEST_DP_PRIMITIVES_H_
#define DPLOCALEST_DP_PRIMITIVES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dplocalest/rng.h"
#include "dplocalest/sample.h"

namespace dplocalest {

struct PrivacyParams {
  double eps = 1.0;
  double delta = 0.0;

  // Throws ParamError unless eps > 0 and delta in [0, 1).
  void Validate() const;
};

// Laplace draw with density exp(-|z| / scale) / (2 scale).
double SampleLaplace(double scale, Rng& rng);

// min(hi, max(lo, x)). Throws ParamError when lo > hi.
double Clamp(double x, double lo, double hi);

struct BinRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;  // inclusive
};

class HistogramSpec {
 public:
  enum class Kind { kLinear, kExponential };

  // Bins ((j - 1/2) width, (j + 1/2) width] for integer j, so bin 0 is
  // centered at the origin.
  static HistogramSpec Linear(double width,
                              std::optional<BinRange> range = std::nullopt);

  // Bins (2^j, 2^(j+1)]. Values <= 0 fall in no bin.
  static HistogramSpec Exponential(std::optional<BinRange> range = std::nullopt);

  // Bin of x, or nullopt when x is outside every declared bin.
  std::optional<std::int64_t> BinOf(double x) const;

  // Half-open bounds (lo, hi] of bin j.
  std::pair<double, double> BinBounds(std::int64_t j) const;

  Kind kind() const { return kind_; }
  double width() const { return width_; }
  bool bounded() const { return range_.has_value(); }
  const std::optional<BinRange>& range() const { return range_; }

 private:
  HistogramSpec(Kind kind, double width, std::optional<BinRange> range)
      : kind_(kind), width_(width), range_(range) {}

  Kind kind_;
  double width_;
  std::optional<BinRange> range_;
};

struct PrivateHistogram {
  HistogramSpec spec;
  std::map<std::int64_t, double> noisy_mass;
};

// Per-bin frequencies with Laplace noise of scale 2 / (eps n). A bounded
// spec releases every bin in range. An unbounded spec needs delta in
// (0, 1/n): only occupied bins are noised and those below
// 2 ln(2 / delta) / (eps n) + 1/n are suppressed.
PrivateHistogram PrivatizeHistogram(const Sample& x, const HistogramSpec& spec,
                                    const PrivacyParams& priv, Rng& rng);

// Bin with the largest noisy mass, ties toward the smaller index.
std::int64_t ArgmaxBin(const PrivateHistogram& h);

// Per-stage record of privacy spending under basic composition.
class PrivacyLedger {
 public:
  struct Entry {
    std::string stage;
    double eps;
    double delta;
  };

  void Charge(std::string stage, double eps, double delta);
  void Append(const PrivacyLedger& other);

  const std::vector<Entry>& entries() const { return entries_; }
  PrivacyParams Total() const;

  // True when the totals equal `advertised` up to `tol`.
  bool Matches(const PrivacyParams& advertised, double tol = 1e-12) const;

 private:
  std::vector<Entry> entries_;
};

}  // namespace dplocalest

#endif  // DPLOCALEST_DP_PRIMITIVES_H_
