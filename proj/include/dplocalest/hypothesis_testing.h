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

#ifndef DPLOCALEST_HYPOTHESIS_TESTING_H_
#define DPLOCALEST_HYPOTHESIS_TESTING_H_

#include <cstddef>
#include <functional>
#include <memory>

#include "dplocalest/distribution.h"
#include "dplocalest/dp_primitives.h"
#include "dplocalest/rng.h"
#include "dplocalest/sample.h"

namespace dplocalest {

// Simple hypotheses. Decision 0 selects p0, decision 1 selects p1.
struct TestProblem {
  std::shared_ptr<const Distribution> p0;
  std::shared_ptr<const Distribution> p1;

  // Throws ParamError on null members or incomparable classes.
  void Validate() const;
};

// `statistic` is oriented toward p1: decision is 1 iff statistic >= threshold.
struct TestDecision {
  int decision = 0;
  double statistic = 0.0;
  double threshold = 0.0;

  static TestDecision FromStatistic(double statistic, double threshold) {
    return {statistic >= threshold ? 1 : 0, statistic, threshold};
  }
};

using SampleTest = std::function<TestDecision(const Sample&, Rng&)>;

// ln(p0(x) / p1(x)).
double LogLikelihoodRatio(const TestProblem& prob, double x);

// Sum of clamp(ln(p0/p1)(x_i), a, b) without noise.
double ClampedLlr(const Sample& x, const TestProblem& prob, double a, double b);

// ClampedLlr plus Laplace noise of scale (b - a) / eps. Large under p0.
double NcllrStatistic(const Sample& x, const TestProblem& prob, double a,
                      double b, const PrivacyParams& priv, Rng& rng);

// Noisy clamped LLR test with a = -eps, b = eps. The threshold is the
// midpoint of the noise-free expectations under p0 and p1, computed once.
SampleTest MakeNcllrTest(const TestProblem& prob, const PrivacyParams& priv);
TestDecision NcllrTest(const Sample& x, const TestProblem& prob,
                       const PrivacyParams& priv, Rng& rng);

// Noisy Scheffe test on E = {p0 > p1}: fraction in E plus Lap(1 / (eps n)),
// thresholded at the midpoint of P0(E) and P1(E).
SampleTest MakeScheffeTest(const TestProblem& prob, const PrivacyParams& priv);
TestDecision ScheffeTest(const Sample& x, const TestProblem& prob,
                         const PrivacyParams& priv, Rng& rng);

// Probabilities of the Scheffe set under p0 and p1.
struct ScheffeMasses {
  double p0 = 0.0;
  double p1 = 0.0;
};
ScheffeMasses ScheffeSetMasses(const TestProblem& prob);

using Estimator = std::function<double(const Sample&, Rng&)>;

// Test returning 1 iff est(x) >= tau.
SampleTest EstimatorToTest(Estimator est, double tau);

struct PowerEstimate {
  std::size_t successes_p0 = 0;
  std::size_t successes_p1 = 0;
  std::size_t trials = 0;

  double rate_p0() const { return static_cast<double>(successes_p0) / trials; }
  double rate_p1() const { return static_cast<double>(successes_p1) / trials; }
};

// Monte Carlo success counts at sample size n. Trial i on side s uses
// stream rng.Substream(2 i + s) whatever n is, so successive sample sizes
// share random numbers.
PowerEstimate EstimatePower(const TestProblem& prob, const SampleTest& test,
                            std::size_t n, std::size_t trials, const Rng& rng);

struct SampleComplexityOptions {
  std::size_t trials = 1000;
  std::size_t max_n = 10'000'000;
  double target = 0.75;
  double wilson_floor = 0.70;
  double wilson_z = 1.645;
};

struct SCEstimate {
  std::size_t n = 0;
  double power_p0 = 0.0;
  double power_p1 = 0.0;
  std::size_t trials = 0;
};

// True when both success rates reach target and both one-sided Wilson lower
// bounds reach the floor.
bool Certifies(const PowerEstimate& power, const SampleComplexityOptions& opts);

// Smallest certified n found by doubling and then binary search. Throws
// SampleComplexityCapExceeded past max_n and, immediately, for identical
// hypotheses.
SCEstimate EmpiricalSampleComplexity(const TestProblem& prob,
                                     const SampleTest& test,
                                     const SampleComplexityOptions& opts,
                                     const Rng& rng);

enum class TestKind { kNcllr, kScheffe };

SCEstimate EmpiricalSampleComplexity(const TestProblem& prob, TestKind kind,
                                     const PrivacyParams& priv,
                                     const SampleComplexityOptions& opts,
                                     const Rng& rng);

// 1 / (eps tv).
double ScHighPrivacyFormula(double tv, double eps);

}  // namespace dplocalest

#endif  // DPLOCALEST_HYPOTHESIS_TESTING_H_
