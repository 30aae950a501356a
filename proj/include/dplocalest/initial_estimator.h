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

#ifndef DPLOCALEST_INITIAL_ESTIMATOR_H_
#define DPLOCALEST_INITIAL_ESTIMATOR_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dplocalest/dp_primitives.h"
#include "dplocalest/exp_family.h"
#include "dplocalest/rng.h"
#include "dplocalest/sample.h"

namespace dplocalest {

struct InitialMeanConfig {
  // Bound on the standardized fourth moment.
  double zeta = 3.0;
  // Range slack constant.
  double C = 1.0;
  // Failure probability budget.
  double beta = 0.04;
  // Block size. When unset the conservative ceil((600 nu zeta)^2) is used.
  std::optional<std::size_t> phi_override = 16;
  double berry_esseen_nu = 0.4748;
  // Minimum sample size is c max(zeta^2, 1) ln(1 / (delta beta)) / eps.
  double min_n_constant = 1.0;

  void Validate() const;
  std::size_t Phi() const;
};

struct VarianceEstimate {
  double sigma_hat = 0.0;
  std::size_t phi = 0;
  std::int64_t bin_index = 0;
};

struct RangeEstimate {
  double x_min = 0.0;
  double x_max = 0.0;
  std::int64_t center_bin = 0;

  double width() const { return x_max - x_min; }
};

// Means of consecutive blocks of `phi` points. A trailing partial block is
// dropped.
std::vector<double> BlockMeans(const Sample& x, std::size_t phi);

// Y_i = Z_{2i+1} - Z_{2i} over consecutive pairs of z.
std::vector<double> PairDifferences(const std::vector<double>& z);

// sigma_hat = 2^(l + 2) sqrt(phi), where l is the private mode of the
// exponential histogram of |Y|. Throws InsufficientData when n < 2 phi or
// when no bin survives the release threshold.
VarianceEstimate PrivateVariance(const Sample& x, const InitialMeanConfig& cfg,
                                 const PrivacyParams& priv, Rng& rng);

// sigma_hat (6 + C) sqrt(ln(4 n / beta)).
double RangeHalfWidth(double sigma_hat, std::size_t n, double C, double beta);

// Interval around the private mode of width-2 sigma_hat bins.
RangeEstimate PrivateRange(const Sample& x, double sigma_hat,
                           const InitialMeanConfig& cfg,
                           const PrivacyParams& priv, Rng& rng);

double ClampedMean(const Sample& x, const RangeEstimate& range);

// ClampedMean plus Lap(width / (eps n)).
double ClampedMeanRelease(const Sample& x, const RangeEstimate& range,
                          const PrivacyParams& priv, Rng& rng);

struct InitialMeanResult {
  double mean = 0.0;
  VarianceEstimate variance;
  RangeEstimate range;
  PrivacyLedger ledger;
};

// Variance, range and clamped-mean stages at eps/3 each. The two histogram
// stages take delta/2 each; the final release is pure. Stage failure
// probabilities are beta/3.
InitialMeanResult InitialMean(const Sample& x, const InitialMeanConfig& cfg,
                              const PrivacyParams& priv, Rng& rng);

struct ThetaEstimate {
  double theta = 0.0;
  bool projected = false;
};

// Inverse of the mean map. Means outside the attainable range are first
// moved `margin` inside its nearest finite endpoint.
ThetaEstimate InitialTheta(const ExpFamily& family, double mean_estimate,
                           double margin = 1e-6);

}  // namespace dplocalest

#endif  // DPLOCALEST_INITIAL_ESTIMATOR_H_
