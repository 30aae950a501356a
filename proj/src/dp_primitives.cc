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

#include "dplocalest/dp_primitives.h"

#include <cmath>
#include <limits>

#include "dplocalest/errors.h"

namespace dplocalest {

void PrivacyParams::Validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw ParamError("privacy: eps must be positive and finite");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw ParamError("privacy: delta must lie in [0, 1)");
  }
}

double SampleLaplace(double scale, Rng& rng) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ParamError("SampleLaplace: scale must be positive and finite");
  }
  double u = rng.UniformOpen() - 0.5;
  double magnitude = -scale * std::log1p(-2.0 * std::fabs(u));
  return u < 0.0 ? -magnitude : magnitude;
}

double Clamp(double x, double lo, double hi) {
  if (lo > hi) throw ParamError("Clamp: lo > hi");
  return x < lo ? lo : (x > hi ? hi : x);
}

HistogramSpec HistogramSpec::Linear(double width,
                                    std::optional<BinRange> range) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw ParamError("HistogramSpec: width must be positive");
  }
  if (range && range->lo > range->hi) {
    throw ParamError("HistogramSpec: empty bin range");
  }
  return HistogramSpec(Kind::kLinear, width, range);
}

HistogramSpec HistogramSpec::Exponential(std::optional<BinRange> range) {
  if (range && range->lo > range->hi) {
    throw ParamError("HistogramSpec: empty bin range");
  }
  return HistogramSpec(Kind::kExponential, 2.0, range);
}

std::optional<std::int64_t> HistogramSpec::BinOf(double x) const {
  if (!std::isfinite(x)) return std::nullopt;
  std::int64_t j;
  if (kind_ == Kind::kExponential) {
    if (!(x > 0.0)) return std::nullopt;
    int e = 0;
    double m = std::frexp(x, &e);  // x = m 2^e with m in [1/2, 1)
    j = (m == 0.5) ? e - 2 : e - 1;
  } else {
    double c = std::ceil(x / width_ - 0.5);
    if (std::fabs(c) > 9e15) return std::nullopt;
    j = static_cast<std::int64_t>(c);
  }
  if (range_ && (j < range_->lo || j > range_->hi)) return std::nullopt;
  return j;
}

std::pair<double, double> HistogramSpec::BinBounds(std::int64_t j) const {
  if (kind_ == Kind::kExponential) {
    double lo = std::ldexp(1.0, static_cast<int>(j));
    return {lo, 2.0 * lo};
  }
  double c = static_cast<double>(j);
  return {(c - 0.5) * width_, (c + 0.5) * width_};
}

PrivateHistogram PrivatizeHistogram(const Sample& x, const HistogramSpec& spec,
                                    const PrivacyParams& priv, Rng& rng) {
  priv.Validate();
  PrivateHistogram out{spec, {}};
  const std::size_t n = x.n();
  if (n == 0) return out;
  const double nd = static_cast<double>(n);

  std::map<std::int64_t, double> counts;
  for (double v : x.values()) {
    if (auto j = spec.BinOf(v)) counts[*j] += 1.0;
  }
  const double scale = 2.0 / (priv.eps * nd);

  if (spec.bounded()) {
    const BinRange r = *spec.range();
    for (std::int64_t j = r.lo; j <= r.hi; ++j) {
      auto it = counts.find(j);
      double freq = it == counts.end() ? 0.0 : it->second / nd;
      out.noisy_mass[j] = freq + SampleLaplace(scale, rng);
    }
    return out;
  }

  if (!(priv.delta > 0.0)) {
    throw ParamError("PrivatizeHistogram: unbounded bins need delta > 0");
  }
  if (!(priv.delta < 1.0 / nd)) {
    throw ParamError("PrivatizeHistogram: unbounded bins need delta < 1/n");
  }
  const double threshold = 2.0 * std::log(2.0 / priv.delta) / (priv.eps * nd) +
                           1.0 / nd;
  for (const auto& [j, count] : counts) {
    double noisy = count / nd + SampleLaplace(scale, rng);
    if (noisy >= threshold) out.noisy_mass[j] = noisy;
  }
  return out;
}

std::int64_t ArgmaxBin(const PrivateHistogram& h) {
  if (h.noisy_mass.empty()) throw EmptyError("ArgmaxBin: no released bins");
  auto best = h.noisy_mass.begin();
  for (auto it = h.noisy_mass.begin(); it != h.noisy_mass.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

void PrivacyLedger::Charge(std::string stage, double eps, double delta) {
  entries_.push_back({std::move(stage), eps, delta});
}

void PrivacyLedger::Append(const PrivacyLedger& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

PrivacyParams PrivacyLedger::Total() const {
  PrivacyParams total{0.0, 0.0};
  for (const Entry& e : entries_) {
    total.eps += e.eps;
    total.delta += e.delta;
  }
  return total;
}

bool PrivacyLedger::Matches(const PrivacyParams& advertised, double tol) const {
  PrivacyParams total = Total();
  return std::fabs(total.eps - advertised.eps) <= tol * std::max(1.0, advertised.eps) &&
         std::fabs(total.delta - advertised.delta) <= tol;
}

}  // namespace dplocalest
