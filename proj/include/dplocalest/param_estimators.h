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

#ifndef DPLOCALEST_PARAM_ESTIMATORS_H_
#define DPLOCALEST_PARAM_ESTIMATORS_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "dplocalest/dp_primitives.h"
#include "dplocalest/exp_family.h"
#include "dplocalest/initial_estimator.h"
#include "dplocalest/rng.h"
#include "dplocalest/sample.h"

namespace dplocalest {

enum class Regime { kHigh, kLow, kNonprivate };

std::string_view RegimeName(Regime regime);

// Private mean estimator used for the initial estimate t_hat.
struct MeanEstimatorSpec {
  enum class Kind {
    // The variance, range and clamped-mean pipeline.
    kInitialMean,
    // Clamp to a public interval [lo, hi] and add Lap((hi - lo) / (eps n)).
    kPublicRange,
  };
  Kind kind = Kind::kInitialMean;
  double lo = 0.0;
  double hi = 0.0;
};

enum class NcllreNoise {
  // Lap(2 / (C alpha n)): clamp width over n, divided by eps.
  kSensitivity,
  // Lap(2 / (eps n C alpha)).
  kEpsScaled,
};

struct EstimatorConfig {
  InitialMeanConfig initial;
  MeanEstimatorSpec mean;
  // Clamp constant of the low-privacy statistic.
  double C = 1.0;
  // The high-privacy branch is taken when eps <= k_threshold / sqrt(n).
  double k_threshold = 1.0;
  NcllreNoise noise = NcllreNoise::kSensitivity;
  double projection_margin = 1e-6;

  void Validate() const;
};

struct EstimatorReport {
  double theta_hat = 0.0;
  double t_hat = 0.0;
  Regime regime = Regime::kNonprivate;
  PrivacyLedger ledger;
  std::map<std::string, double> diagnostics;
  // Set when the estimate was moved to a boundary of the search range.
  bool projected = false;
};

// Inverse mean map applied to the sample mean.
double NonprivateOpt(const ExpFamily& family, const Sample& x);

// First part has ceil(n/2) points and feeds the initial estimate.
std::pair<Sample, Sample> SplitSample(const Sample& x);

// ThetaEstimate solving P_theta(x > t_hat) = fraction. Fractions outside the
// attainable range shrunk by `margin` are clipped to it and flagged.
ThetaEstimate InvertTailFraction(const ExpFamily& family, double t_hat,
                                 double fraction, double margin = 1e-6);

struct CountResult {
  double theta = 0.0;
  bool projected = false;
  double fraction = 0.0;
  double noisy_fraction = 0.0;
};

// Fraction of points above t_hat plus Lap(1 / (eps n)), mapped back to theta.
CountResult CountEstimate(const ExpFamily& family, const Sample& x,
                          double t_hat, double eps, Rng& rng,
                          double margin = 1e-6);

// E_theta[clamp(x - t_hat, -half_width, half_width)].
double ClampedShiftExpectation(const ExpFamily& family, double theta,
                               double t_hat, double half_width);

struct NcllreResult {
  double theta = 0.0;
  bool projected = false;
  double alpha = 0.0;
  double half_width = 0.0;
  double noise_scale = 0.0;
  double statistic = 0.0;
  double noisy_statistic = 0.0;
};

// Theta whose clamped shift expectation matches the noisy clamped mean.
// With `noise_free` the Laplace term is omitted.
NcllreResult NcllreEstimate(const ExpFamily& family, const Sample& x,
                            double t_hat, double C, double eps, Rng& rng,
                            NcllreNoise noise = NcllreNoise::kSensitivity,
                            bool noise_free = false);

// Initial estimate on the first half at (eps/2, delta), then Count on the
// second half at eps/2.
EstimatorReport AHigh(const ExpFamily& family, const Sample& x,
                      const EstimatorConfig& cfg, const PrivacyParams& priv,
                      Rng& rng);

// Initial estimate on the first half at (eps/2, delta), then the noisy
// clamped statistic on the second half at eps/2.
EstimatorReport ALow(const ExpFamily& family, const Sample& x,
                     const EstimatorConfig& cfg, const PrivacyParams& priv,
                     Rng& rng);

// kHigh iff eps <= k / sqrt(n).
Regime ChooseRegime(std::size_t n, double eps, double k_threshold);

EstimatorReport ADispatch(const ExpFamily& family, const Sample& x,
                          const EstimatorConfig& cfg,
                          const PrivacyParams& priv, Rng& rng);

}  // namespace dplocalest

#endif  // DPLOCALEST_PARAM_ESTIMATORS_H_
