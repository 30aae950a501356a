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

#include "dplocalest/initial_estimator.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dplocalest/errors.h"
#include "dplocalest/numerics.h"

namespace dplocalest {

void InitialMeanConfig::Validate() const {
  if (!(zeta >= 1.0)) throw ParamError("initial mean: zeta must be >= 1");
  if (!(C > 0.0)) throw ParamError("initial mean: C must be positive");
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ParamError("initial mean: beta must lie in (0, 1)");
  }
  if (phi_override && *phi_override < 1) {
    throw ParamError("initial mean: phi must be >= 1");
  }
  if (!(berry_esseen_nu > 0.0)) {
    throw ParamError("initial mean: nu must be positive");
  }
  if (!(min_n_constant >= 0.0)) {
    throw ParamError("initial mean: minimum-n constant must be >= 0");
  }
}

std::size_t InitialMeanConfig::Phi() const {
  if (phi_override) return *phi_override;
  double root = 600.0 * berry_esseen_nu * zeta;
  return static_cast<std::size_t>(std::ceil(root * root));
}

std::vector<double> BlockMeans(const Sample& x, std::size_t phi) {
  if (phi == 0) throw ParamError("BlockMeans: phi must be positive");
  std::vector<double> z(x.n() / phi);
  for (std::size_t i = 0; i < z.size(); ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < phi; ++j) total += x[i * phi + j];
    z[i] = total / static_cast<double>(phi);
  }
  return z;
}

std::vector<double> PairDifferences(const std::vector<double>& z) {
  std::vector<double> y(z.size() / 2);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = z[2 * i + 1] - z[2 * i];
  return y;
}

VarianceEstimate PrivateVariance(const Sample& x, const InitialMeanConfig& cfg,
                                 const PrivacyParams& priv, Rng& rng) {
  cfg.Validate();
  priv.Validate();
  const std::size_t phi = cfg.Phi();
  if (x.n() < 2 * phi) {
    throw InsufficientData("PrivateVariance: need n >= 2 phi = " +
                           std::to_string(2 * phi));
  }
  std::vector<double> y = PairDifferences(BlockMeans(x, phi));
  for (double& v : y) v = std::fabs(v);
  const Sample abs_y(std::move(y));
  PrivateHistogram h =
      PrivatizeHistogram(abs_y, HistogramSpec::Exponential(), priv, rng);
  if (h.noisy_mass.empty()) {
    throw InsufficientData("PrivateVariance: no histogram bin released");
  }
  const std::int64_t l = ArgmaxBin(h);
  const double sigma_hat =
      std::ldexp(1.0, static_cast<int>(l) + 2) * std::sqrt(static_cast<double>(phi));
  return {sigma_hat, phi, l};
}

double RangeHalfWidth(double sigma_hat, std::size_t n, double C, double beta) {
  return sigma_hat * (6.0 + C) *
         std::sqrt(std::log(4.0 * static_cast<double>(n) / beta));
}

RangeEstimate PrivateRange(const Sample& x, double sigma_hat,
                           const InitialMeanConfig& cfg,
                           const PrivacyParams& priv, Rng& rng) {
  cfg.Validate();
  priv.Validate();
  if (!(sigma_hat > 0.0) || !std::isfinite(sigma_hat)) {
    throw ParamError("PrivateRange: sigma_hat must be positive");
  }
  if (x.empty()) throw InsufficientData("PrivateRange: empty sample");
  PrivateHistogram h =
      PrivatizeHistogram(x, HistogramSpec::Linear(2.0 * sigma_hat), priv, rng);
  if (h.noisy_mass.empty()) {
    throw InsufficientData("PrivateRange: no histogram bin released");
  }
  const std::int64_t l = ArgmaxBin(h);
  const double center = 2.0 * sigma_hat * static_cast<double>(l);
  const double half = RangeHalfWidth(sigma_hat, x.n(), cfg.C, cfg.beta);
  return {center - half, center + half, l};
}

double ClampedMean(const Sample& x, const RangeEstimate& range) {
  if (x.empty()) throw EmptyError("ClampedMean: empty sample");
  double total = 0.0;
  for (double v : x.values()) total += Clamp(v, range.x_min, range.x_max);
  return total / static_cast<double>(x.n());
}

double ClampedMeanRelease(const Sample& x, const RangeEstimate& range,
                          const PrivacyParams& priv, Rng& rng) {
  priv.Validate();
  if (!(range.width() > 0.0)) {
    throw ParamError("ClampedMeanRelease: range width must be positive");
  }
  double clean = ClampedMean(x, range);
  return clean + SampleLaplace(
                     range.width() / (priv.eps * static_cast<double>(x.n())),
                     rng);
}

InitialMeanResult InitialMean(const Sample& x, const InitialMeanConfig& cfg,
                              const PrivacyParams& priv, Rng& rng) {
  cfg.Validate();
  priv.Validate();
  if (!(priv.delta > 0.0)) {
    throw ParamError("InitialMean: requires delta > 0");
  }
  const double min_n = cfg.min_n_constant * std::max(cfg.zeta * cfg.zeta, 1.0) *
                       std::log(1.0 / (priv.delta * cfg.beta)) / priv.eps;
  if (static_cast<double>(x.n()) < min_n) {
    throw InsufficientData("InitialMean: n = " + std::to_string(x.n()) +
                           " below minimum " + std::to_string(min_n));
  }
  InitialMeanConfig stage_cfg = cfg;
  stage_cfg.beta = cfg.beta / 3.0;
  const PrivacyParams hist_priv{priv.eps / 3.0, priv.delta / 2.0};
  const PrivacyParams release_priv{priv.eps / 3.0, 0.0};

  InitialMeanResult out;
  Rng variance_rng = rng.Substream(0);
  Rng range_rng = rng.Substream(1);
  Rng release_rng = rng.Substream(2);
  out.variance = PrivateVariance(x, stage_cfg, hist_priv, variance_rng);
  out.ledger.Charge("initial.variance", hist_priv.eps, hist_priv.delta);
  out.range =
      PrivateRange(x, out.variance.sigma_hat, stage_cfg, hist_priv, range_rng);
  out.ledger.Charge("initial.range", hist_priv.eps, hist_priv.delta);
  out.mean = ClampedMeanRelease(x, out.range, release_priv, release_rng);
  out.ledger.Charge("initial.release", release_priv.eps, release_priv.delta);
  return out;
}

ThetaEstimate InitialTheta(const ExpFamily& family, double mean_estimate,
                           double margin) {
  if (std::isnan(mean_estimate)) {
    throw ParamError("InitialTheta: mean estimate is NaN");
  }
  const Interval range = family.MeanRange();
  ThetaEstimate out;
  double target = mean_estimate;
  if (std::isfinite(range.lo) && target <= range.lo) {
    target = range.lo + margin;
    out.projected = true;
  }
  if (std::isfinite(range.hi) && target >= range.hi) {
    target = range.hi - margin;
    out.projected = true;
  }
  const Interval search = family.SearchDomain();
  MonotoneSolution s = SolveIncreasing(
      [&](double theta) { return family.Mean(theta); }, target,
      search.Clip(0.0), search, 1e-13);
  out.theta = s.x;
  out.projected = out.projected || s.projected;
  return out;
}

}  // namespace dplocalest
