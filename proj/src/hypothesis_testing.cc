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

#include "dplocalest/hypothesis_testing.h"

#include <cmath>
#include <utility>
#include <vector>

#include "dplocalest/errors.h"
#include "dplocalest/exp_family.h"
#include "dplocalest/numerics.h"
#include "dplocalest/parallel.h"

namespace dplocalest {
namespace {

std::size_t CountInScheffeSet(const Sample& x, const TestProblem& prob) {
  std::size_t in = 0;
  for (double v : x.values()) {
    if (LogLikelihoodRatio(prob, v) > 0.0) ++in;
  }
  return in;
}

}  // namespace

void TestProblem::Validate() const {
  if (p0 == nullptr || p1 == nullptr) {
    throw ParamError("TestProblem: null hypothesis");
  }
  if (p0->ComparisonClass() != p1->ComparisonClass()) {
    throw FamilyMismatch("TestProblem: " + p0->Describe() + " vs " +
                         p1->Describe());
  }
}

double LogLikelihoodRatio(const TestProblem& prob, double x) {
  double r = prob.p0->LogDensity(x) - prob.p1->LogDensity(x);
  return std::isnan(r) ? 0.0 : r;
}

double ClampedLlr(const Sample& x, const TestProblem& prob, double a,
                  double b) {
  if (!(a < 0.0) || !(b > 0.0)) {
    throw ParamError("ClampedLlr: need a < 0 < b");
  }
  double total = 0.0;
  for (double v : x.values()) total += Clamp(LogLikelihoodRatio(prob, v), a, b);
  return total;
}

double NcllrStatistic(const Sample& x, const TestProblem& prob, double a,
                      double b, const PrivacyParams& priv, Rng& rng) {
  priv.Validate();
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw ParamError("NcllrStatistic: clamp bounds must be finite");
  }
  double clean = ClampedLlr(x, prob, a, b);
  return clean + SampleLaplace((b - a) / priv.eps, rng);
}

SampleTest MakeNcllrTest(const TestProblem& prob, const PrivacyParams& priv) {
  prob.Validate();
  priv.Validate();
  const double a = -priv.eps;
  const double b = priv.eps;
  auto clamped = [prob, a, b](double x) {
    return Clamp(LogLikelihoodRatio(prob, x), a, b);
  };
  const double mid =
      0.5 * (prob.p0->Expect(clamped) + prob.p1->Expect(clamped));
  return [prob, priv, a, b, mid](const Sample& x, Rng& rng) {
    double s = NcllrStatistic(x, prob, a, b, priv, rng);
    double tau = mid * static_cast<double>(x.n());
    return TestDecision::FromStatistic(-s, -tau);
  };
}

TestDecision NcllrTest(const Sample& x, const TestProblem& prob,
                       const PrivacyParams& priv, Rng& rng) {
  return MakeNcllrTest(prob, priv)(x, rng);
}

ScheffeMasses ScheffeSetMasses(const TestProblem& prob) {
  prob.Validate();
  const auto* m0 = dynamic_cast<const FamilyMember*>(prob.p0.get());
  const auto* m1 = dynamic_cast<const FamilyMember*>(prob.p1.get());
  if (m0 != nullptr && m1 != nullptr) {
    const double t0 = m0->theta();
    const double t1 = m1->theta();
    if (t0 == t1) return {0.0, 0.0};
    const ExpFamily& f = m0->family();
    const double m = (f.LogPartition(t0) - f.LogPartition(t1)) / (t0 - t1);
    // E = {x > m} when t0 > t1, and {x < m} otherwise.
    auto mass = [&](double theta) {
      if (t0 > t1) return f.TailProb(theta, m);
      return 1.0 - f.TailProb(theta, m) - f.PointMass(theta, m);
    };
    return {mass(t0), mass(t1)};
  }
  auto indicator = [&prob](double x) {
    return LogLikelihoodRatio(prob, x) > 0.0 ? 1.0 : 0.0;
  };
  return {prob.p0->Expect(indicator), prob.p1->Expect(indicator)};
}

SampleTest MakeScheffeTest(const TestProblem& prob, const PrivacyParams& priv) {
  priv.Validate();
  const ScheffeMasses masses = ScheffeSetMasses(prob);
  const double mid = 0.5 * (masses.p0 + masses.p1);
  return [prob, priv, mid](const Sample& x, Rng& rng) {
    const double n = static_cast<double>(std::max<std::size_t>(x.n(), 1));
    double fraction =
        x.empty() ? 0.0 : static_cast<double>(CountInScheffeSet(x, prob)) / n;
    double s = fraction + SampleLaplace(1.0 / (priv.eps * n), rng);
    return TestDecision::FromStatistic(-s, -mid);
  };
}

TestDecision ScheffeTest(const Sample& x, const TestProblem& prob,
                         const PrivacyParams& priv, Rng& rng) {
  return MakeScheffeTest(prob, priv)(x, rng);
}

SampleTest EstimatorToTest(Estimator est, double tau) {
  return [est = std::move(est), tau](const Sample& x, Rng& rng) {
    return TestDecision::FromStatistic(est(x, rng), tau);
  };
}

PowerEstimate EstimatePower(const TestProblem& prob, const SampleTest& test,
                            std::size_t n, std::size_t trials, const Rng& rng) {
  prob.Validate();
  std::vector<unsigned char> ok(2 * trials, 0);
  ParallelFor(2 * trials, [&](std::size_t k) {
    const std::size_t side = k % 2;
    Rng trial_rng = rng.Substream(k);
    Rng data_rng = trial_rng.Substream(0);
    Rng noise_rng = trial_rng.Substream(1);
    const Distribution& truth = side == 0 ? *prob.p0 : *prob.p1;
    Sample x = truth.DrawSample(n, data_rng);
    ok[k] = test(x, noise_rng).decision == static_cast<int>(side) ? 1 : 0;
  });
  PowerEstimate out;
  out.trials = trials;
  for (std::size_t k = 0; k < 2 * trials; ++k) {
    if (!ok[k]) continue;
    if (k % 2 == 0) {
      ++out.successes_p0;
    } else {
      ++out.successes_p1;
    }
  }
  return out;
}

bool Certifies(const PowerEstimate& power,
               const SampleComplexityOptions& opts) {
  if (power.trials == 0) return false;
  return power.rate_p0() >= opts.target && power.rate_p1() >= opts.target &&
         WilsonLower(power.successes_p0, power.trials, opts.wilson_z) >=
             opts.wilson_floor &&
         WilsonLower(power.successes_p1, power.trials, opts.wilson_z) >=
             opts.wilson_floor;
}

SCEstimate EmpiricalSampleComplexity(const TestProblem& prob,
                                     const SampleTest& test,
                                     const SampleComplexityOptions& opts,
                                     const Rng& rng) {
  prob.Validate();
  if (opts.trials < 100) {
    throw ParamError("EmpiricalSampleComplexity: need at least 100 trials");
  }
  if (opts.max_n < 1) throw ParamError("EmpiricalSampleComplexity: max_n < 1");
  if (prob.p0->SameLaw(*prob.p1)) {
    throw SampleComplexityCapExceeded(
        "EmpiricalSampleComplexity: hypotheses are identical");
  }
  auto power_at = [&](std::size_t n) {
    return EstimatePower(prob, test, n, opts.trials, rng);
  };
  std::size_t hi = 1;
  PowerEstimate hi_power = power_at(hi);
  std::size_t lo = 0;
  while (!Certifies(hi_power, opts)) {
    if (hi >= opts.max_n) {
      throw SampleComplexityCapExceeded(
          "EmpiricalSampleComplexity: not certified at n = " +
          std::to_string(opts.max_n));
    }
    lo = hi;
    hi = std::min(2 * hi, opts.max_n);
    hi_power = power_at(hi);
  }
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    PowerEstimate p = power_at(mid);
    if (Certifies(p, opts)) {
      hi = mid;
      hi_power = p;
    } else {
      lo = mid;
    }
  }
  return {hi, hi_power.rate_p0(), hi_power.rate_p1(), opts.trials};
}

SCEstimate EmpiricalSampleComplexity(const TestProblem& prob, TestKind kind,
                                     const PrivacyParams& priv,
                                     const SampleComplexityOptions& opts,
                                     const Rng& rng) {
  prob.Validate();
  if (prob.p0->SameLaw(*prob.p1)) {
    throw SampleComplexityCapExceeded(
        "EmpiricalSampleComplexity: hypotheses are identical");
  }
  SampleTest test = kind == TestKind::kNcllr ? MakeNcllrTest(prob, priv)
                                             : MakeScheffeTest(prob, priv);
  return EmpiricalSampleComplexity(prob, test, opts, rng);
}

double ScHighPrivacyFormula(double tv, double eps) {
  if (!(tv > 0.0 && tv <= 1.0)) {
    throw ParamError("ScHighPrivacyFormula: tv must lie in (0, 1]");
  }
  if (!(eps > 0.0)) throw ParamError("ScHighPrivacyFormula: eps must be > 0");
  return 1.0 / (eps * tv);
}

}  // namespace dplocalest
