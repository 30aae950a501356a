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

#ifndef DPLOCALEST_TAIL_FUNCTIONAL_H_
#define DPLOCALEST_TAIL_FUNCTIONAL_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dplocalest/distribution.h"
#include "dplocalest/hypothesis_testing.h"
#include "dplocalest/rng.h"
#include "dplocalest/sample.h"

namespace dplocalest {

// Densities C x^t (1 + h(x)) on [0, delta] with |h(x)| <= gamma x^p.
struct TailFamilyConfig {
  double c_minus = 1.0;
  double c_plus = 1.0;
  double delta = 0.9;
  double t0 = 0.5;
  double t1 = 1.5;
  double gamma = 0.1;
  double p = 1.0;

  void Validate() const;
};

enum class TailShape { kPlusGamma, kMinusGamma, kZero };

// Member with core density C x^t (1 + s gamma x^p) on [0, core_end] and a
// uniform remainder on (core_end, core_end + remainder_length] carrying the
// leftover mass.
class TailMember final : public Distribution {
 public:
  // core_end = delta, remainder of length 1.
  static TailMember Make(const TailFamilyConfig& cfg, double t, double C,
                         TailShape shape);
  static TailMember MakeWithCoreEnd(const TailFamilyConfig& cfg, double t,
                                    double C, TailShape shape, double core_end,
                                    double remainder_length = 1.0);

  double Density(double x) const;
  double CoreDensity(double x) const;
  // Integral of the core density over [0, x], for x in [0, core_end].
  double CoreCdf(double x) const;
  double Cdf(double x) const;

  double t() const { return t_; }
  double C() const { return C_; }
  TailShape shape() const { return shape_; }
  double core_end() const { return core_end_; }
  double support_end() const { return core_end_ + remainder_length_; }
  double mass_beyond_core() const { return mass_beyond_; }
  const TailFamilyConfig& config() const { return cfg_; }

  double LogDensity(double x) const override;
  double Draw(Rng& rng) const override;
  double Expect(const std::function<double(double)>& g) const override;
  std::string ComparisonClass() const override { return "tails"; }
  bool SameLaw(const Distribution& other) const override;
  std::string Describe() const override;

 private:
  TailMember(const TailFamilyConfig& cfg, double t, double C, TailShape shape,
             double core_end, double remainder_length);

  double Sign() const;

  TailFamilyConfig cfg_;
  double t_;
  double C_;
  TailShape shape_;
  double core_end_;
  double remainder_length_;
  double mass_beyond_;
};

struct WorstCasePair {
  std::shared_ptr<const TailMember> f0;
  std::shared_ptr<const TailMember> f1;
  double t = 0.0;
  double delta_t = 0.0;
  double a1 = 0.0;
  // f0(a1) / f1(a1), equal to the density ratio beyond a1.
  double ratio_beyond = 0.0;
  double residual = 0.0;

  TestProblem AsProblem() const { return {f0, f1}; }
};

// f0(a)/f1(a) - (1 - F0(a)) / (1 - F1(a)) for the core densities
// C- a^t (1 - gamma a^p) and C+ a^(t + Delta) (1 + gamma a^p).
double MassBalanceResidual(const TailFamilyConfig& cfg, double t,
                           double delta_t, double a);

// Locates the first sign change of the residual on (0, delta] by a grid scan
// and bisection. Throws NoCrossover when the residual stays positive.
WorstCasePair MakeWorstCasePair(const TailFamilyConfig& cfg, double t,
                                double delta_t, double remainder_length = 1.0);

// ln((C+/C-) x^Delta (1 + gamma x^p) / (1 - gamma x^p)), frozen at a1.
double TailLlr(const WorstCasePair& pair, double x);

enum class TailThreshold {
  // Fixed threshold 1.
  kConstant,
  // n times the midpoint of the per-point expectations under f0 and f1.
  kCalibrated,
};

// Sum of clamp(TailLlr, -eps, eps) plus Lap(2). Decision 1 rejects the
// lower hypothesis.
class CompoundTailTest {
 public:
  CompoundTailTest(WorstCasePair pair, double eps, TailThreshold mode);

  double Threshold(std::size_t n) const;
  double CleanStatistic(const Sample& x) const;
  TestDecision Run(const Sample& x, Rng& rng) const;

  double expectation_f0() const { return e0_; }
  double expectation_f1() const { return e1_; }

 private:
  WorstCasePair pair_;
  double eps_;
  TailThreshold mode_;
  double e0_ = 0.0;
  double e1_ = 0.0;
};

TestDecision CompoundTailTestDecision(const Sample& x, const WorstCasePair& pair,
                                      double eps, Rng& rng,
                                      TailThreshold mode = TailThreshold::kCalibrated);

// Draws from a fixed law and counts every draw.
class SampleOracle {
 public:
  explicit SampleOracle(std::shared_ptr<const Distribution> truth)
      : truth_(std::move(truth)) {}

  Sample Draw(std::size_t n, Rng& rng);
  std::size_t draws() const { return draws_; }

 private:
  std::shared_ptr<const Distribution> truth_;
  std::size_t draws_ = 0;
};

using RoundTest =
    std::function<TestDecision(const WorstCasePair&, const Sample&, Rng&)>;

// Samples to request for a round given the pair, the per-round failure
// probability and the total number of rounds.
using PerRoundSize =
    std::function<std::size_t(const WorstCasePair&, double, int)>;

// n max(1, ceil(ln k)) per round.
PerRoundSize FixedPerRound(std::size_t n);

// Empirical sample complexity of the compound test scaled by ln(3k)/ln 4.
PerRoundSize EmpiricalPerRound(double eps, TailThreshold mode,
                               const SampleComplexityOptions& opts,
                               const Rng& rng);

struct TernarySearchOptions {
  int rounds = 1;
  double eps = 1.0;
  TailThreshold threshold = TailThreshold::kCalibrated;
  PerRoundSize per_round;
  // Defaults to the compound tail test.
  RoundTest test;
};

// Noise-free decision by the true rate: 1 iff t_true > t + Delta / 2.
RoundTest OracleRoundTest(double t_true);

struct TernaryRound {
  double t_min = 0.0;
  double t_max = 0.0;
  double delta_t = 0.0;
  std::size_t samples = 0;
  TestDecision decision;
};

struct TernarySearchResult {
  double estimate = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::vector<TernaryRound> rounds;
  std::size_t draws = 0;
};

TernarySearchResult TernarySearch(SampleOracle& oracle,
                                  const TailFamilyConfig& cfg,
                                  const TernarySearchOptions& opts, Rng& rng);

struct ModulusOptions {
  std::size_t trials = 400;
  TailThreshold threshold = TailThreshold::kCalibrated;
  double tolerance = 1e-3;
};

// Largest Delta in (0, t1 - t] whose worst-case pair is not certified at n.
double ModulusAtT(const TailFamilyConfig& cfg, double t, std::size_t n,
                  double eps, const Rng& rng, const ModulusOptions& opts = {});

// ceil(log_{3/2}((t1 - t0) / omega)).
int KStar(double t0, double t1, double omega);

// n k max(1, ceil(ln k)).
std::size_t TotalDraws(std::size_t n, int k);

}  // namespace dplocalest

#endif  // DPLOCALEST_TAIL_FUNCTIONAL_H_
