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

#include "dplocalest/tail_functional.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "dplocalest/dp_primitives.h"
#include "dplocalest/errors.h"
#include "dplocalest/numerics.h"

namespace dplocalest {
namespace {

constexpr double kRangeSlack = 1e-12;

double ShapeSign(TailShape shape) {
  switch (shape) {
    case TailShape::kPlusGamma:
      return 1.0;
    case TailShape::kMinusGamma:
      return -1.0;
    case TailShape::kZero:
      return 0.0;
  }
  return 0.0;
}

}  // namespace

void TailFamilyConfig::Validate() const {
  if (!(c_minus > 0.0 && c_minus <= c_plus && std::isfinite(c_plus))) {
    throw ParamError("tails: need 0 < c_minus <= c_plus < inf");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParamError("tails: delta must lie in (0, 1)");
  }
  if (!(t0 > 0.0 && t0 <= t1 && std::isfinite(t1))) {
    throw ParamError("tails: need 0 < t0 <= t1 < inf");
  }
  if (!(gamma >= 0.0)) throw ParamError("tails: gamma must be >= 0");
  if (!(p > 0.0)) throw ParamError("tails: p must be positive");
  if (!(gamma * std::pow(delta, p) < 1.0)) {
    throw ParamError("tails: need gamma delta^p < 1");
  }
}

TailMember TailMember::Make(const TailFamilyConfig& cfg, double t, double C,
                            TailShape shape) {
  return TailMember(cfg, t, C, shape, cfg.delta, 1.0);
}

TailMember TailMember::MakeWithCoreEnd(const TailFamilyConfig& cfg, double t,
                                       double C, TailShape shape,
                                       double core_end,
                                       double remainder_length) {
  return TailMember(cfg, t, C, shape, core_end, remainder_length);
}

TailMember::TailMember(const TailFamilyConfig& cfg, double t, double C,
                       TailShape shape, double core_end,
                       double remainder_length)
    : cfg_(cfg),
      t_(t),
      C_(C),
      shape_(shape),
      core_end_(core_end),
      remainder_length_(remainder_length) {
  cfg_.Validate();
  if (!(t >= cfg.t0 - kRangeSlack && t <= cfg.t1 + kRangeSlack)) {
    throw ParamError("TailMember: t outside [t0, t1]");
  }
  if (!(C >= cfg.c_minus && C <= cfg.c_plus)) {
    throw ParamError("TailMember: C outside [c_minus, c_plus]");
  }
  if (!(core_end > 0.0 && core_end <= cfg.delta)) {
    throw ParamError("TailMember: core end must lie in (0, delta]");
  }
  if (!(remainder_length > 0.0) || !std::isfinite(remainder_length)) {
    throw ParamError("TailMember: remainder length must be positive");
  }
  mass_beyond_ = 1.0 - CoreCdf(core_end_);
  if (mass_beyond_ < 0.0) {
    throw ParamError("TailMember: core mass exceeds one");
  }
}

double TailMember::Sign() const { return ShapeSign(shape_); }

double TailMember::CoreDensity(double x) const {
  if (x < 0.0 || x > core_end_) return 0.0;
  return C_ * std::pow(x, t_) * (1.0 + Sign() * cfg_.gamma * std::pow(x, cfg_.p));
}

double TailMember::CoreCdf(double x) const {
  x = std::clamp(x, 0.0, core_end_);
  const double a = t_ + 1.0;
  const double b = t_ + cfg_.p + 1.0;
  return C_ * (std::pow(x, a) / a + Sign() * cfg_.gamma * std::pow(x, b) / b);
}

double TailMember::Density(double x) const {
  if (x < 0.0) return 0.0;
  if (x <= core_end_) return CoreDensity(x);
  if (x <= support_end()) return mass_beyond_ / remainder_length_;
  return 0.0;
}

double TailMember::Cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x <= core_end_) return CoreCdf(x);
  if (x >= support_end()) return 1.0;
  return (1.0 - mass_beyond_) +
         mass_beyond_ * (x - core_end_) / remainder_length_;
}

double TailMember::LogDensity(double x) const { return std::log(Density(x)); }

double TailMember::Draw(Rng& rng) const {
  const double u = rng.UniformOpen();
  const double core_mass = 1.0 - mass_beyond_;
  if (u >= core_mass) {
    return core_end_ + remainder_length_ * (u - core_mass) / mass_beyond_;
  }
  double lo = 0.0;
  double hi = core_end_;
  double x = std::min(core_end_, std::pow((t_ + 1.0) * u / C_, 1.0 / (t_ + 1.0)));
  for (int i = 0; i < 100; ++i) {
    const double h = CoreCdf(x) - u;
    if (h == 0.0) break;
    if (h > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double d = CoreDensity(x);
    double next = d > 0.0 ? x - h / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-15 * std::max(x, 1e-300)) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

double TailMember::Expect(const std::function<double(double)>& g) const {
  double total = IntegrateSegments(
      [&](double x) { return g(x) * CoreDensity(x); }, 0.0, core_end_, 8);
  if (mass_beyond_ > 0.0) {
    const double level = mass_beyond_ / remainder_length_;
    total += IntegrateSegments([&](double x) { return g(x) * level; },
                               core_end_, support_end(), 2);
  }
  return total;
}

bool TailMember::SameLaw(const Distribution& other) const {
  const auto* m = dynamic_cast<const TailMember*>(&other);
  if (m == nullptr) return false;
  return m->t_ == t_ && m->C_ == C_ && m->shape_ == shape_ &&
         m->core_end_ == core_end_ &&
         m->remainder_length_ == remainder_length_ &&
         m->cfg_.gamma == cfg_.gamma && m->cfg_.p == cfg_.p;
}

std::string TailMember::Describe() const {
  std::ostringstream os;
  os.precision(12);
  os << "tails[t=" << t_ << ", C=" << C_ << ", shape=" << Sign()
     << ", core_end=" << core_end_ << "]";
  return os.str();
}

double MassBalanceResidual(const TailFamilyConfig& cfg, double t,
                           double delta_t, double a) {
  const double g = cfg.gamma * std::pow(a, cfg.p);
  const double ratio = (cfg.c_minus / cfg.c_plus) * std::pow(a, -delta_t) *
                       (1.0 - g) / (1.0 + g);
  const double s = t + delta_t;
  const double mass0 =
      cfg.c_minus * (std::pow(a, t + 1.0) / (t + 1.0) -
                     cfg.gamma * std::pow(a, t + cfg.p + 1.0) / (t + cfg.p + 1.0));
  const double mass1 =
      cfg.c_plus * (std::pow(a, s + 1.0) / (s + 1.0) +
                    cfg.gamma * std::pow(a, s + cfg.p + 1.0) / (s + cfg.p + 1.0));
  if (!(mass1 < 1.0)) return -kInf;
  return ratio - (1.0 - mass0) / (1.0 - mass1);
}

WorstCasePair MakeWorstCasePair(const TailFamilyConfig& cfg, double t,
                                double delta_t, double remainder_length) {
  cfg.Validate();
  if (!(delta_t > 0.0)) throw ParamError("worst-case pair: Delta must be > 0");
  if (!(t >= cfg.t0 - kRangeSlack && t + delta_t <= cfg.t1 + kRangeSlack)) {
    throw ParamError("worst-case pair: t and t + Delta must lie in [t0, t1]");
  }
  auto residual = [&](double a) {
    return MassBalanceResidual(cfg, t, delta_t, a);
  };
  constexpr int kGrid = 2048;
  const double log_lo = std::log(cfg.delta) - 200.0 * std::log(10.0);
  const double log_hi = std::log(cfg.delta);
  double prev_a = std::exp(log_lo);
  double prev_r = residual(prev_a);
  double root_lo = 0.0;
  double root_hi = 0.0;
  bool found = false;
  if (prev_r > 0.0) {
    for (int k = 1; k < kGrid; ++k) {
      double a = (k + 1 == kGrid)
                     ? cfg.delta
                     : std::exp(log_lo + (log_hi - log_lo) * k / (kGrid - 1));
      double r = residual(a);
      if (r <= 0.0) {
        root_lo = prev_a;
        root_hi = a;
        found = true;
        break;
      }
      prev_a = a;
      prev_r = r;
    }
  }
  if (!found) {
    std::ostringstream os;
    os << "worst-case pair: residual has no sign change on (0, delta]; "
       << "residual(a_min) = " << residual(std::exp(log_lo))
       << ", residual(delta) = " << residual(cfg.delta);
    throw NoCrossover(os.str());
  }
  const double a1 = Bisect(residual, root_lo, root_hi, 0.0);

  WorstCasePair pair;
  pair.t = t;
  pair.delta_t = delta_t;
  pair.a1 = a1;
  pair.f0 = std::make_shared<const TailMember>(TailMember::MakeWithCoreEnd(
      cfg, t, cfg.c_minus, TailShape::kMinusGamma, a1, remainder_length));
  pair.f1 = std::make_shared<const TailMember>(TailMember::MakeWithCoreEnd(
      cfg, t + delta_t, cfg.c_plus, TailShape::kPlusGamma, a1,
      remainder_length));
  pair.ratio_beyond = pair.f0->CoreDensity(a1) / pair.f1->CoreDensity(a1);
  pair.residual = residual(a1);
  return pair;
}

double TailLlr(const WorstCasePair& pair, double x) {
  const TailFamilyConfig& cfg = pair.f0->config();
  const double v = std::min(x, pair.a1);
  if (!(v > 0.0)) return -kInf;
  const double g = cfg.gamma * std::pow(v, cfg.p);
  return std::log(cfg.c_plus / cfg.c_minus) + pair.delta_t * std::log(v) +
         std::log1p(g) - std::log1p(-g);
}

CompoundTailTest::CompoundTailTest(WorstCasePair pair, double eps,
                                   TailThreshold mode)
    : pair_(std::move(pair)), eps_(eps), mode_(mode) {
  PrivacyParams{eps, 0.0}.Validate();
  auto clamped = [this](double x) {
    return Clamp(TailLlr(pair_, x), -eps_, eps_);
  };
  e0_ = pair_.f0->Expect(clamped);
  e1_ = pair_.f1->Expect(clamped);
}

double CompoundTailTest::Threshold(std::size_t n) const {
  if (mode_ == TailThreshold::kConstant) return 1.0;
  return static_cast<double>(n) * 0.5 * (e0_ + e1_);
}

double CompoundTailTest::CleanStatistic(const Sample& x) const {
  double total = 0.0;
  for (double v : x.values()) total += Clamp(TailLlr(pair_, v), -eps_, eps_);
  return total;
}

TestDecision CompoundTailTest::Run(const Sample& x, Rng& rng) const {
  const double s = CleanStatistic(x) + SampleLaplace(2.0, rng);
  return TestDecision::FromStatistic(s, Threshold(x.n()));
}

TestDecision CompoundTailTestDecision(const Sample& x, const WorstCasePair& pair,
                                      double eps, Rng& rng,
                                      TailThreshold mode) {
  return CompoundTailTest(pair, eps, mode).Run(x, rng);
}

Sample SampleOracle::Draw(std::size_t n, Rng& rng) {
  draws_ += n;
  return truth_->DrawSample(n, rng);
}

std::size_t TotalDraws(std::size_t n, int k) {
  if (k <= 0) return 0;
  const double log_k = std::ceil(std::log(static_cast<double>(k)));
  return n * static_cast<std::size_t>(k) *
         static_cast<std::size_t>(std::max(1.0, log_k));
}

PerRoundSize FixedPerRound(std::size_t n) {
  return [n](const WorstCasePair&, double, int rounds) {
    return rounds <= 0 ? 0 : TotalDraws(n, rounds) / static_cast<std::size_t>(rounds);
  };
}

PerRoundSize EmpiricalPerRound(double eps, TailThreshold mode,
                               const SampleComplexityOptions& opts,
                               const Rng& rng) {
  return [eps, mode, opts, rng](const WorstCasePair& pair, double failure,
                                int) {
    CompoundTailTest test(pair, eps, mode);
    SampleTest run = [test](const Sample& x, Rng& r) { return test.Run(x, r); };
    SCEstimate sc = EmpiricalSampleComplexity(pair.AsProblem(), run, opts, rng);
    const double boost = std::log(1.0 / failure) / std::log(4.0);
    return static_cast<std::size_t>(
        std::ceil(static_cast<double>(sc.n) * std::max(1.0, boost)));
  };
}

RoundTest OracleRoundTest(double t_true) {
  return [t_true](const WorstCasePair& pair, const Sample&, Rng&) {
    const double cut = pair.t + 0.5 * pair.delta_t;
    return TestDecision::FromStatistic(t_true > cut ? 1.0 : 0.0, 0.5);
  };
}

TernarySearchResult TernarySearch(SampleOracle& oracle,
                                  const TailFamilyConfig& cfg,
                                  const TernarySearchOptions& opts, Rng& rng) {
  cfg.Validate();
  if (opts.rounds < 1) throw ParamError("TernarySearch: rounds must be >= 1");
  if (!opts.per_round) throw ParamError("TernarySearch: per-round size unset");
  PrivacyParams{opts.eps, 0.0}.Validate();
  const std::size_t draws_before = oracle.draws();

  TernarySearchResult out;
  double t_min = cfg.t0;
  double t_max = cfg.t1;
  const double failure = 1.0 / (3.0 * opts.rounds);
  for (int i = 0; i < opts.rounds; ++i) {
    const double d = (t_max - t_min) / 3.0;
    WorstCasePair pair;
    try {
      pair = MakeWorstCasePair(cfg, t_min + d, d);
    } catch (const NoCrossover& e) {
      throw NoCrossover("round " + std::to_string(i) + ": " + e.what());
    }
    TernaryRound round;
    round.t_min = t_min;
    round.t_max = t_max;
    round.delta_t = d;
    round.samples = opts.per_round(pair, failure, opts.rounds);
    Rng data_rng = rng.Substream(2 * static_cast<std::uint64_t>(i));
    Rng noise_rng = rng.Substream(2 * static_cast<std::uint64_t>(i) + 1);
    Sample x = oracle.Draw(round.samples, data_rng);
    if (opts.test) {
      round.decision = opts.test(pair, x, noise_rng);
    } else {
      round.decision =
          CompoundTailTest(pair, opts.eps, opts.threshold).Run(x, noise_rng);
    }
    if (round.decision.decision == 0) {
      t_max -= d;
    } else {
      t_min += d;
    }
    out.rounds.push_back(round);
  }
  out.estimate = t_min;
  out.t_min = t_min;
  out.t_max = t_max;
  out.draws = oracle.draws() - draws_before;
  return out;
}

double ModulusAtT(const TailFamilyConfig& cfg, double t, std::size_t n,
                  double eps, const Rng& rng, const ModulusOptions& opts) {
  cfg.Validate();
  if (!(t >= cfg.t0 && t <= cfg.t1)) {
    throw ParamError("ModulusAtT: t outside [t0, t1]");
  }
  const double reach = cfg.t1 - t;
  if (reach <= 0.0) return 0.0;
  SampleComplexityOptions sc_opts;
  sc_opts.trials = opts.trials;
  auto certified = [&](double d) {
    WorstCasePair pair = MakeWorstCasePair(cfg, t, d);
    CompoundTailTest test(pair, eps, opts.threshold);
    SampleTest run = [&test](const Sample& x, Rng& r) { return test.Run(x, r); };
    return Certifies(EstimatePower(pair.AsProblem(), run, n, opts.trials, rng),
                     sc_opts);
  };
  if (!certified(reach)) return reach;
  double lo = 0.0;
  double hi = reach;
  while (hi - lo > opts.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (certified(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

int KStar(double t0, double t1, double omega) {
  if (!(omega > 0.0)) throw ParamError("KStar: omega must be positive");
  if (!(t1 >= t0)) throw ParamError("KStar: need t0 <= t1");
  const double ratio = (t1 - t0) / omega;
  if (ratio <= 1.0) return 0;
  return static_cast<int>(std::ceil(std::log(ratio) / std::log(1.5) - 1e-12));
}

}  // namespace dplocalest
