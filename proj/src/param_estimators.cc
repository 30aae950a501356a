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

#include "dplocalest/param_estimators.h"

#include <cmath>
#include <string>

#include "dplocalest/errors.h"
#include "dplocalest/numerics.h"

namespace dplocalest {
namespace {

double PrivateMean(const Sample& x, const EstimatorConfig& cfg,
                   const PrivacyParams& priv, Rng& rng, EstimatorReport& report) {
  if (cfg.mean.kind == MeanEstimatorSpec::Kind::kPublicRange) {
    RangeEstimate range{cfg.mean.lo, cfg.mean.hi, 0};
    if (x.empty()) throw InsufficientData("public-range mean: empty sample");
    report.ledger.Charge("mean.public_range", priv.eps, priv.delta);
    return ClampedMeanRelease(x, range, PrivacyParams{priv.eps, 0.0}, rng);
  }
  InitialMeanResult r = InitialMean(x, cfg.initial, priv, rng);
  report.ledger.Append(r.ledger);
  report.diagnostics["initial.sigma_hat"] = r.variance.sigma_hat;
  report.diagnostics["initial.x_min"] = r.range.x_min;
  report.diagnostics["initial.x_max"] = r.range.x_max;
  return r.mean;
}

}  // namespace

std::string_view RegimeName(Regime regime) {
  switch (regime) {
    case Regime::kHigh:
      return "high";
    case Regime::kLow:
      return "low";
    case Regime::kNonprivate:
      return "nonprivate";
  }
  return "unknown";
}

void EstimatorConfig::Validate() const {
  initial.Validate();
  if (!(C > 0.0)) throw ParamError("estimator: C must be positive");
  if (!(k_threshold > 0.0)) {
    throw ParamError("estimator: k_threshold must be positive");
  }
  if (mean.kind == MeanEstimatorSpec::Kind::kPublicRange &&
      !(mean.hi > mean.lo)) {
    throw ParamError("estimator: public range needs hi > lo");
  }
  if (!(projection_margin > 0.0 && projection_margin < 0.5)) {
    throw ParamError("estimator: projection margin must lie in (0, 1/2)");
  }
}

double NonprivateOpt(const ExpFamily& family, const Sample& x) {
  if (x.empty()) throw EmptyError("NonprivateOpt: empty sample");
  return InitialTheta(family, x.Mean()).theta;
}

std::pair<Sample, Sample> SplitSample(const Sample& x) {
  const std::size_t first = (x.n() + 1) / 2;
  return {x.Slice(0, first), x.Slice(first, x.n())};
}

ThetaEstimate InvertTailFraction(const ExpFamily& family, double t_hat,
                                 double fraction, double margin) {
  const Interval search = family.SearchDomain();
  auto g = [&](double theta) { return family.TailProb(theta, t_hat); };
  const double lo_target = g(search.lo) + margin;
  const double hi_target = g(search.hi) - margin;
  const double start = InitialTheta(family, t_hat).theta;
  if (!(lo_target < hi_target)) return {start, true};
  ThetaEstimate out;
  double target = fraction;
  if (target < lo_target) {
    target = lo_target;
    out.projected = true;
  } else if (target > hi_target) {
    target = hi_target;
    out.projected = true;
  }
  MonotoneSolution s = SolveIncreasing(g, target, start, search, 1e-12);
  out.theta = s.x;
  out.projected = out.projected || s.projected;
  return out;
}

CountResult CountEstimate(const ExpFamily& family, const Sample& x,
                          double t_hat, double eps, Rng& rng, double margin) {
  PrivacyParams{eps, 0.0}.Validate();
  if (x.empty()) throw InsufficientData("CountEstimate: empty sample");
  std::size_t above = 0;
  for (double v : x.values()) {
    if (v > t_hat) ++above;
  }
  const double n = static_cast<double>(x.n());
  CountResult out;
  out.fraction = static_cast<double>(above) / n;
  out.noisy_fraction = out.fraction + SampleLaplace(1.0 / (eps * n), rng);
  ThetaEstimate t = InvertTailFraction(family, t_hat, out.noisy_fraction, margin);
  out.theta = t.theta;
  out.projected = t.projected;
  return out;
}

double ClampedShiftExpectation(const ExpFamily& family, double theta,
                               double t_hat, double half_width) {
  if (!(half_width > 0.0)) {
    throw ParamError("ClampedShiftExpectation: half width must be positive");
  }
  return family.Expect(theta, [&](double x) {
    return Clamp(x - t_hat, -half_width, half_width);
  });
}

NcllreResult NcllreEstimate(const ExpFamily& family, const Sample& x,
                            double t_hat, double C, double eps, Rng& rng,
                            NcllreNoise noise, bool noise_free) {
  PrivacyParams{eps, 0.0}.Validate();
  if (!(C > 0.0)) throw ParamError("NcllreEstimate: C must be positive");
  if (x.empty()) throw InsufficientData("NcllreEstimate: empty sample");
  const double n = static_cast<double>(x.n());
  const double start = InitialTheta(family, t_hat).theta;

  NcllreResult out;
  out.alpha = 1.0 / std::sqrt(n * family.Variance(start));
  out.half_width = eps / (C * out.alpha);
  double total = 0.0;
  for (double v : x.values()) {
    total += Clamp(v - t_hat, -out.half_width, out.half_width);
  }
  out.statistic = total / n;
  out.noise_scale = noise == NcllreNoise::kSensitivity
                        ? 2.0 / (C * out.alpha * n)
                        : 2.0 / (eps * n * C * out.alpha);
  out.noisy_statistic =
      out.statistic + (noise_free ? 0.0 : SampleLaplace(out.noise_scale, rng));

  const double hw = out.half_width;
  MonotoneSolution s = SolveIncreasing(
      [&](double theta) {
        return ClampedShiftExpectation(family, theta, t_hat, hw);
      },
      out.noisy_statistic, start, family.SearchDomain());
  out.theta = s.x;
  out.projected = s.projected;
  return out;
}

EstimatorReport AHigh(const ExpFamily& family, const Sample& x,
                      const EstimatorConfig& cfg, const PrivacyParams& priv,
                      Rng& rng) {
  cfg.Validate();
  priv.Validate();
  if (x.n() < 2) throw InsufficientData("AHigh: need n >= 2");
  auto [first, second] = SplitSample(x);
  EstimatorReport report;
  report.regime = Regime::kHigh;
  Rng mean_rng = rng.Substream(0);
  Rng count_rng = rng.Substream(1);
  report.t_hat =
      PrivateMean(first, cfg, PrivacyParams{priv.eps / 2.0, priv.delta},
                  mean_rng, report);
  CountResult c = CountEstimate(family, second, report.t_hat, priv.eps / 2.0,
                                count_rng, cfg.projection_margin);
  report.ledger.Charge("count", priv.eps / 2.0, 0.0);
  report.theta_hat = c.theta;
  report.projected = c.projected;
  report.diagnostics["count.fraction"] = c.fraction;
  report.diagnostics["count.noisy_fraction"] = c.noisy_fraction;
  return report;
}

EstimatorReport ALow(const ExpFamily& family, const Sample& x,
                     const EstimatorConfig& cfg, const PrivacyParams& priv,
                     Rng& rng) {
  cfg.Validate();
  priv.Validate();
  if (x.n() < 2) throw InsufficientData("ALow: need n >= 2");
  auto [first, second] = SplitSample(x);
  EstimatorReport report;
  report.regime = Regime::kLow;
  Rng mean_rng = rng.Substream(0);
  Rng stat_rng = rng.Substream(1);
  report.t_hat =
      PrivateMean(first, cfg, PrivacyParams{priv.eps / 2.0, priv.delta},
                  mean_rng, report);
  NcllreResult r = NcllreEstimate(family, second, report.t_hat, cfg.C,
                                  priv.eps / 2.0, stat_rng, cfg.noise);
  report.ledger.Charge("ncllre", priv.eps / 2.0, 0.0);
  report.theta_hat = r.theta;
  report.projected = r.projected;
  report.diagnostics["ncllre.alpha"] = r.alpha;
  report.diagnostics["ncllre.half_width"] = r.half_width;
  report.diagnostics["ncllre.noisy_statistic"] = r.noisy_statistic;
  return report;
}

Regime ChooseRegime(std::size_t n, double eps, double k_threshold) {
  if (n == 0) return Regime::kHigh;
  return eps <= k_threshold / std::sqrt(static_cast<double>(n)) ? Regime::kHigh
                                                                 : Regime::kLow;
}

EstimatorReport ADispatch(const ExpFamily& family, const Sample& x,
                          const EstimatorConfig& cfg,
                          const PrivacyParams& priv, Rng& rng) {
  if (ChooseRegime(x.n(), priv.eps, cfg.k_threshold) == Regime::kHigh) {
    return AHigh(family, x, cfg, priv, rng);
  }
  return ALow(family, x, cfg, priv, rng);
}

}  // namespace dplocalest
