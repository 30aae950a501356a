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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dplocalest/dp_audit.h"
#include "dplocalest/errors.h"
#include "dplocalest/exp_family.h"
#include "dplocalest/experiment.h"
#include "dplocalest/hypothesis_testing.h"
#include "dplocalest/initial_estimator.h"
#include "dplocalest/numerics.h"
#include "dplocalest/parallel.h"
#include "dplocalest/param_estimators.h"
#include "dplocalest/slope_fit.h"
#include "dplocalest/tail_functional.h"

namespace dplocalest {
namespace {

using nlohmann::json;

// Pinned tolerances.
constexpr double kSlopeTol1 = 0.2;
constexpr double kMinR2 = 0.9;
constexpr double kNcllrPower = 0.75;
constexpr double kNcllrScFactor = 4.0;
constexpr double kSlopeTol3 = 0.2;
constexpr double kPoissonRatioTarget = 2.0;
constexpr double kPoissonRatioTol = 0.4;
constexpr double kLowRatioMax = 3.0;
constexpr double kSlopeTol4 = 0.15;
constexpr double kBernoulliHighFactor = 2.0;
constexpr double kBernoulliNpTol = 0.3;
constexpr double kSigmaHatLo = 1.0;
constexpr double kSigmaHatHi = 8.0;
constexpr double kSigmaHatRate = 0.90;
constexpr double kRangeRate = 0.95;
constexpr double kMeanError = 0.1;
constexpr double kMeanRate = 0.80;
constexpr double kConcentrationBeta = 0.05;
constexpr double kConcentrationSigmas = 3.0;
constexpr double kRoundTripTol = 1e-8;
constexpr double kNormalizationTol = 1e-6;
constexpr double kRatioConstancyTol = 1e-9;
constexpr double kResidualTol = 1e-8;
constexpr double kTernarySuccess = 2.0 / 3.0;

struct Outcome {
  bool pass = false;
  std::string detail;
  // Every CSV produced by the criterion, concatenated.
  std::string csv;
};

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[1024];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

struct Run {
  ExperimentResult result;
  std::string csv;
};

Run RunConfig(const json& doc) {
  ExperimentConfig cfg = ParseExperimentConfig(doc);
  std::ostringstream os;
  Run run;
  run.result = RunExperiment(cfg, &os);
  run.csv = os.str();
  if (run.csv != RenderCsv(cfg, run.result)) {
    throw NumericalError("streamed CSV differs from rendered CSV");
  }
  return run;
}

// Median abs_error per grid index.
std::vector<double> Medians(const ExperimentResult& r, std::size_t grid_size) {
  std::vector<std::vector<double>> errors(grid_size);
  for (const auto& t : r.trials) {
    errors[t.grid_index].push_back(std::isnan(t.abs_error) ? kInf : t.abs_error);
  }
  std::vector<double> out;
  for (auto& e : errors) out.push_back(Median(e));
  return out;
}

json Grid(const std::vector<std::pair<std::size_t, double>>& points) {
  json g = json::array();
  for (auto [n, eps] : points) {
    json p = {{"eps", eps}};
    if (n > 0) p["n"] = n;
    g.push_back(p);
  }
  return g;
}

bool Within(double value, double target, double tol) {
  return std::fabs(value - target) <= tol;
}

Outcome Criterion1() {
  json doc = {{"kind", "scCurve"},
              {"seed", 1001},
              {"family", {{"family", "gaussian"}}},
              {"theta0", 0.0},
              {"theta1", 1.0},
              {"test", "scheffe"},
              {"trials", 1000},
              {"grid", Grid({{0, 0.02}, {0, 0.04}, {0, 0.08}})}};
  Run run = RunConfig(doc);
  std::vector<std::pair<double, double>> pts;
  std::string ns;
  for (const auto& r : run.result.sc) {
    if (r.status != "ok") return {false, "sample complexity failed: " + r.status, run.csv};
    pts.push_back({r.eps, static_cast<double>(r.sc_n)});
    ns += Fmt(" %zu", r.sc_n);
  }
  SlopeFit fit = FitLogLogSlope(pts);
  bool pass = Within(fit.slope, -1.0, kSlopeTol1) && fit.r2 >= kMinR2;
  return {pass,
          Fmt("tv=%.4f sc_n=[%s ] slope=%.3f (want -1+-%.1f) r2=%.3f (want >=%.1f)",
              run.result.sc[0].tv, ns.c_str() + 1, fit.slope, kSlopeTol1,
              fit.r2, kMinR2),
          run.csv};
}

Outcome Criterion2() {
  const double eps = 0.05;
  FamilyPtr gaussian = MakeGaussianFamily();
  auto p0 = std::make_shared<FamilyMember>(gaussian, 0.0);
  auto p1 = std::make_shared<FamilyMember>(gaussian, 1.0);
  TestProblem prob{p0, p1};
  const double tv = TvDistance(*p0, *p1);
  const auto n = static_cast<std::size_t>(
      std::ceil(4.0 * ScHighPrivacyFormula(tv, eps)));
  PowerEstimate power =
      EstimatePower(prob, MakeNcllrTest(prob, {eps, 0.0}), n, 2000, Rng(2001));
  std::string csv = Fmt("n,trials,rate_p0,rate_p1\n%zu,%zu,%.17g,%.17g\n", n,
                        power.trials, power.rate_p0(), power.rate_p1());
  std::map<std::string, std::size_t> sc;
  for (const char* test : {"ncllr", "scheffe"}) {
    json doc = {{"kind", "scCurve"},
                {"seed", 2002},
                {"family", {{"family", "gaussian"}}},
                {"theta0", 0.0},
                {"theta1", 1.0},
                {"test", test},
                {"trials", 1000},
                {"grid", Grid({{0, eps}})}};
    Run run = RunConfig(doc);
    csv += run.csv;
    if (run.result.sc[0].status != "ok") {
      return {false, std::string(test) + " sample complexity failed", csv};
    }
    sc[test] = run.result.sc[0].sc_n;
  }
  const double ratio =
      static_cast<double>(sc["ncllr"]) / static_cast<double>(sc["scheffe"]);
  bool pass = power.rate_p0() >= kNcllrPower &&
              power.rate_p1() >= kNcllrPower && ratio <= kNcllrScFactor &&
              ratio >= 1.0 / kNcllrScFactor;
  return {pass,
          Fmt("n=%zu success p0=%.3f p1=%.3f (want >=%.2f); sc ncllr=%zu "
              "scheffe=%zu ratio=%.3f (want within x%.0f)",
              n, power.rate_p0(), power.rate_p1(), kNcllrPower, sc["ncllr"],
              sc["scheffe"], ratio, kNcllrScFactor),
          csv};
}

json HighRateDoc(std::uint64_t seed, const char* family, double theta,
                 double lo, double hi) {
  return {{"kind", "rateCurve"},
          {"seed", seed},
          {"trials", 300},
          {"family", {{"family", family}}},
          {"theta", theta},
          {"grid", Grid({{5000, 0.02}, {10000, 0.02}, {20000, 0.02}, {40000, 0.02}})},
          {"estimator",
           {{"name", "high"},
            {"mean", {{"kind", "publicRange"}, {"lo", lo}, {"hi", hi}}}}}};
}

Outcome Criterion3() {
  const std::vector<double> ns = {5000, 10000, 20000, 40000};
  struct Curve {
    const char* label;
    json doc;
    std::vector<double> medians;
    SlopeFit fit;
  };
  std::vector<Curve> curves = {
      {"gaussian", HighRateDoc(3001, "gaussian", 0.0, -5.0, 5.0), {}, {}},
      {"poisson4", HighRateDoc(3002, "poisson", std::log(4.0), 0.0, 20.0), {}, {}},
      {"poisson1", HighRateDoc(3003, "poisson", 0.0, 0.0, 20.0), {}, {}},
  };
  std::string csv;
  bool pass = true;
  std::string detail;
  for (auto& c : curves) {
    Run run = RunConfig(c.doc);
    csv += run.csv;
    c.medians = Medians(run.result, ns.size());
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < ns.size(); ++i) pts.push_back({ns[i], c.medians[i]});
    c.fit = FitLogLogSlope(pts);
    detail += Fmt("%s slope=%.3f ", c.label, c.fit.slope);
  }
  pass = Within(curves[0].fit.slope, -1.0, kSlopeTol3) &&
         Within(curves[1].fit.slope, -1.0, kSlopeTol3);
  double log_ratio = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    log_ratio += std::log(curves[2].medians[i] / curves[1].medians[i]);
  }
  const double ratio = std::exp(log_ratio / ns.size());
  pass = pass && std::fabs(ratio - kPoissonRatioTarget) <=
                     kPoissonRatioTol * kPoissonRatioTarget;
  detail += Fmt("(want -1+-%.1f); error ratio lambda1/lambda4=%.3f (want 2+-40%%)",
                kSlopeTol3, ratio);
  return {pass, detail, csv};
}

json LowDoc(std::uint64_t seed, const char* family, double theta, double lo,
            double hi, const char* name, double C,
            const std::vector<std::pair<std::size_t, double>>& grid,
            std::size_t trials) {
  return {{"kind", "rateCurve"},
          {"seed", seed},
          {"trials", trials},
          {"family", {{"family", family}}},
          {"theta", theta},
          {"grid", Grid(grid)},
          {"estimator",
           {{"name", name},
            {"C", C},
            {"mean", {{"kind", "publicRange"}, {"lo", lo}, {"hi", hi}}}}}};
}

struct LowCase {
  const char* label;
  const char* family;
  double theta;
  double lo;
  double hi;
};

const LowCase kLowCases[] = {
    {"gaussian", "gaussian", 2.0, -5.0, 9.0},
    {"poisson5", "poisson", std::log(5.0), 0.0, 25.0},
};

Outcome Criterion4() {
  std::string csv;
  std::string detail = "sweep(seed 4001) max ratio:";
  // C is chosen on a separate seed and evaluated on a fresh one.
  double best_c = 0.0;
  double best_ratio = kInf;
  for (double c : {1.0, 2.0, 4.0, 8.0}) {
    double worst = 0.0;
    for (const LowCase& lc : kLowCases) {
      Run low = RunConfig(LowDoc(4001, lc.family, lc.theta, lc.lo, lc.hi, "low",
                                 c, {{10000, 1.0}}, 300));
      Run np = RunConfig(LowDoc(4001, lc.family, lc.theta, lc.lo, lc.hi,
                                "nonprivate", c, {{10000, 1.0}}, 300));
      csv += low.csv + np.csv;
      worst = std::max(worst, Medians(low.result, 1)[0] / Medians(np.result, 1)[0]);
    }
    detail += Fmt(" C=%g:%.2f", c, worst);
    if (worst < best_ratio) {
      best_ratio = worst;
      best_c = c;
    }
  }
  detail += Fmt("; eval(seed 4002) C=%g:", best_c);
  bool pass = true;
  const std::vector<double> ns = {1000, 10000, 100000};
  for (const LowCase& lc : kLowCases) {
    std::vector<std::pair<std::size_t, double>> grid = {
        {1000, 1.0}, {10000, 1.0}, {100000, 1.0}};
    Run low = RunConfig(
        LowDoc(4002, lc.family, lc.theta, lc.lo, lc.hi, "low", best_c, grid, 300));
    Run np = RunConfig(LowDoc(4002, lc.family, lc.theta, lc.lo, lc.hi,
                              "nonprivate", best_c, grid, 300));
    csv += low.csv + np.csv;
    std::vector<double> ml = Medians(low.result, 3);
    std::vector<double> mn = Medians(np.result, 3);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < 3; ++i) pts.push_back({ns[i], ml[i]});
    SlopeFit fit = FitLogLogSlope(pts);
    const double ratio = ml[1] / mn[1];
    pass = pass && ratio <= kLowRatioMax && Within(fit.slope, -0.5, kSlopeTol4);
    detail += Fmt(" %s ratio=%.2f slope=%.3f", lc.label, ratio, fit.slope);
  }
  detail += Fmt(" (want ratio<=%.0f, slope -0.5+-%.2f)", kLowRatioMax, kSlopeTol4);
  return {pass, detail, csv};
}

Outcome Criterion5() {
  const std::size_t n = 100000;
  const double eps = 0.5 / std::sqrt(static_cast<double>(n));
  std::map<std::string, double> med;
  std::string csv;
  for (double p : {0.5, 0.1}) {
    for (const char* name : {"high", "nonprivate"}) {
      json doc = {{"kind", "rateCurve"},
                  {"seed", 5001},
                  {"trials", 1000},
                  {"family", {{"family", "bernoulli"}}},
                  {"theta", std::log(p / (1.0 - p))},
                  {"errorScale", "mean"},
                  {"grid", Grid({{n, eps}})},
                  {"estimator",
                   {{"name", name},
                    {"mean", {{"kind", "publicRange"}, {"lo", 0.0}, {"hi", 1.0}}}}}};
      Run run = RunConfig(doc);
      csv += run.csv;
      med[Fmt("%s%.1f", name, p)] = Medians(run.result, 1)[0];
    }
  }
  const double high_ratio = std::max(med["high0.5"], med["high0.1"]) /
                            std::min(med["high0.5"], med["high0.1"]);
  const double np_ratio = med["nonprivate0.5"] / med["nonprivate0.1"];
  const double np_target = std::sqrt(0.25 / 0.09);
  bool pass = high_ratio <= kBernoulliHighFactor &&
              std::fabs(np_ratio - np_target) <= kBernoulliNpTol * np_target;
  return {pass,
          Fmt("high median p=0.5:%.4g p=0.1:%.4g ratio=%.3f (want <=%.0f); "
              "nonprivate ratio=%.3f (want %.3f+-30%%)",
              med["high0.5"], med["high0.1"], high_ratio, kBernoulliHighFactor,
              np_ratio, np_target),
          csv};
}

Outcome Criterion6() {
  const std::size_t trials = 200;
  const std::size_t n = std::size_t{1} << 14;
  const PrivacyParams priv{1.0, 1e-6};
  FamilyMember truth(MakeGaussianFamily(), 0.0);
  InitialMeanConfig cfg;
  struct Row {
    double sigma_hat = 0.0;
    double x_min = 0.0;
    double x_max = 0.0;
    double mean = 0.0;
    bool covers = false;
    std::string status = "ok";
  };
  std::vector<Row> rows(trials);
  const Rng root(6001);
  ParallelFor(trials, [&](std::size_t i) {
    Rng trial = root.Substream(i);
    Rng data_rng = trial.Substream(0);
    Rng mech_rng = trial.Substream(1);
    Sample x = truth.DrawSample(n, data_rng);
    try {
      InitialMeanResult r = InitialMean(x, cfg, priv, mech_rng);
      auto [lo, hi] = std::minmax_element(x.values().begin(), x.values().end());
      rows[i] = {r.variance.sigma_hat, r.range.x_min, r.range.x_max, r.mean,
                 *lo >= r.range.x_min && *hi <= r.range.x_max, "ok"};
    } catch (const Error& e) {
      rows[i].status = e.what();
    }
  });
  std::size_t sigma_ok = 0, range_ok = 0, mean_ok = 0;
  std::string csv = "trial,sigma_hat,x_min,x_max,mean,covers,status\n";
  for (std::size_t i = 0; i < trials; ++i) {
    const Row& r = rows[i];
    csv += Fmt("%zu,%.17g,%.17g,%.17g,%.17g,%d,%s\n", i, r.sigma_hat, r.x_min,
               r.x_max, r.mean, r.covers ? 1 : 0, r.status.c_str());
    if (r.status != "ok") continue;
    sigma_ok += r.sigma_hat >= kSigmaHatLo && r.sigma_hat <= kSigmaHatHi;
    range_ok += r.covers;
    mean_ok += std::fabs(r.mean) <= kMeanError;
  }
  const double fs = static_cast<double>(sigma_ok) / trials;
  const double fr = static_cast<double>(range_ok) / trials;
  const double fm = static_cast<double>(mean_ok) / trials;
  bool pass = fs >= kSigmaHatRate && fr >= kRangeRate && fm >= kMeanRate;
  return {pass,
          Fmt("sigma_hat in [1,8]: %.3f (want >=%.2f); range covers: %.3f "
              "(want >=%.2f); |mean err|<=0.1: %.3f (want >=%.2f)",
              fs, kSigmaHatRate, fr, kRangeRate, fm, kMeanRate),
          csv};
}

Outcome Criterion7() {
  struct Case {
    const char* label;
    FamilyPtr family;
    double theta;
  };
  const std::vector<Case> cases = {{"gaussian", MakeGaussianFamily(), 0.0},
                                   {"poisson4", MakePoissonFamily(), std::log(4.0)}};
  const std::size_t draws = 100000;
  const double slack =
      kConcentrationSigmas *
      std::sqrt(kConcentrationBeta * (1.0 - kConcentrationBeta) / draws);
  bool pass = true;
  std::string detail;
  std::string csv = "family,threshold,mass_beyond\n";
  Rng rng(7001);
  for (const Case& c : cases) {
    const double kappa = Kappa(*c.family, c.theta).radius;
    const double thr =
        ConcentrationThreshold(*c.family, c.theta, kConcentrationBeta, kappa);
    const double mean = c.family->Mean(c.theta);
    std::vector<double> x(draws);
    c.family->DrawMany(c.theta, rng, x.data(), draws);
    std::size_t beyond = 0;
    for (double v : x) beyond += std::fabs(v - mean) > thr;
    const double mass = static_cast<double>(beyond) / draws;
    pass = pass && mass <= kConcentrationBeta + slack;
    detail += Fmt("%s thr=%.3f mass=%.5f; ", c.label, thr, mass);
    csv += Fmt("%s,%.17g,%.17g\n", c.label, thr, mass);
  }
  detail += Fmt("(want <= %.4f)", kConcentrationBeta + slack);
  return {pass, detail, csv};
}

Outcome Criterion8() {
  struct Case {
    FamilyPtr family;
    double lo;
    double hi;
  };
  const std::vector<Case> cases = {{MakeGaussianFamily(), -3.0, 3.0},
                                   {MakeGaussianFamily(2.0), -1.0, 1.0},
                                   {MakePoissonFamily(), -1.0, 3.0},
                                   {MakeBernoulliFamily(), -4.0, 4.0}};
  double worst_tail = 0.0;
  double worst_mean = 0.0;
  std::string csv = "family,theta,t_hat,tail_inverse,mean_inverse\n";
  for (const Case& c : cases) {
    for (int i = 0; i <= 20; ++i) {
      const double theta = c.lo + (c.hi - c.lo) * i / 20.0;
      const double mean = c.family->Mean(theta);
      ThetaEstimate m = InitialTheta(*c.family, mean);
      worst_mean = std::max(worst_mean, std::fabs(m.theta - theta));
      // Cut points near the mean, where the tail map is well conditioned.
      std::vector<double> cuts;
      if (c.family->name().rfind("bernoulli", 0) == 0) {
        cuts = {0.5};
      } else if (c.family->name().rfind("poisson", 0) == 0) {
        cuts = {std::floor(mean), std::floor(mean) + 1.0};
      } else {
        const double sd = std::sqrt(c.family->Variance(theta));
        cuts = {mean - sd, mean, mean + sd};
      }
      for (double t_hat : cuts) {
        const double g = c.family->TailProb(theta, t_hat);
        ThetaEstimate r = InvertTailFraction(*c.family, t_hat, g);
        worst_tail = std::max(worst_tail, std::fabs(r.theta - theta));
        csv += Fmt("%s,%.17g,%.17g,%.17g,%.17g\n", c.family->name().c_str(),
                   theta, t_hat, r.theta, m.theta);
      }
    }
  }
  bool pass = worst_tail <= kRoundTripTol && worst_mean <= kRoundTripTol;
  return {pass,
          Fmt("max |g^-1(g(theta)) - theta|=%.2e, max |initialTheta(A'(theta)) "
              "- theta|=%.2e (want <=%.0e)",
              worst_tail, worst_mean, kRoundTripTol),
          csv};
}

Outcome Criterion9() {
  std::string csv;
  bool pass = true;
  std::string detail;
  const std::vector<std::pair<const char*, bool>> mechanisms = {
      {"laplace", true},
      {"histogram", true},
      {"histogramStable", true},
      {"count", true},
      {"laplaceUndersized", false}};
  std::uint64_t seed = 9001;
  for (auto [mech, should_pass] : mechanisms) {
    json doc = {{"kind", "dpAudit"},
                {"seed", seed++},
                {"mechanism", mech},
                {"trials", 100000},
                {"delta", 1e-6},
                {"grid", Grid({{0, 0.5}, {0, 1.0}})}};
    Run run = RunConfig(doc);
    csv += run.csv;
    double worst = -kInf;
    bool all = true;
    bool any = false;
    for (const auto& a : run.result.audits) {
      worst = std::max(worst, a.report.max_violation);
      all = all && a.report.pass;
      any = any || a.report.pass;
    }
    const bool ok = should_pass ? all : !any;
    pass = pass && ok;
    detail += Fmt("%s %s(max viol %.2e, want %s); ", mech,
                  all ? "PASS" : (any ? "MIXED" : "FAIL"), worst,
                  should_pass ? "PASS" : "FAIL");
  }
  detail.resize(detail.size() - 2);
  return {pass, detail, csv};
}

Outcome Criterion10() {
  TailFamilyConfig cfg;
  cfg.gamma = 0.3;
  Rng rng(10001);
  double worst_norm = 0.0;
  double worst_ratio = 0.0;
  double worst_residual = 0.0;
  std::string csv = "t,delta_t,a1,norm0,norm1,ratio_dev,residual\n";
  std::string failures;
  for (int i = 0; i < 20; ++i) {
    const double range = cfg.t1 - cfg.t0;
    const double delta_t = range * (0.02 + 0.98 * rng.Uniform());
    const double t = cfg.t0 + (range - delta_t) * rng.Uniform();
    try {
      WorstCasePair pair = MakeWorstCasePair(cfg, t, delta_t);
      double norms[2];
      int k = 0;
      for (const auto& f : {pair.f0, pair.f1}) {
        auto dens = [&f](double x) { return f->Density(x); };
        norms[k++] = Integrate(dens, 0.0, f->core_end(), 1e-12) +
                     Integrate(dens, f->core_end(), f->support_end(), 1e-12);
      }
      double ratio_dev = 0.0;
      Rng xr = rng.Substream(i);
      for (int j = 0; j < 100; ++j) {
        const double x =
            pair.a1 + (pair.f0->support_end() - pair.a1) * xr.UniformOpen();
        const double r = pair.f0->Density(x) / pair.f1->Density(x);
        ratio_dev = std::max(ratio_dev, std::fabs(r - pair.ratio_beyond) /
                                            pair.ratio_beyond);
      }
      const double residual =
          std::fabs(MassBalanceResidual(cfg, t, delta_t, pair.a1));
      worst_norm = std::max({worst_norm, std::fabs(norms[0] - 1.0),
                             std::fabs(norms[1] - 1.0)});
      worst_ratio = std::max(worst_ratio, ratio_dev);
      worst_residual = std::max(worst_residual, residual);
      csv += Fmt("%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t, delta_t,
                 pair.a1, norms[0], norms[1], ratio_dev, residual);
    } catch (const Error& e) {
      failures += Fmt(" (t=%.3f,D=%.3f)", t, delta_t);
      csv += Fmt("%.17g,%.17g,error\n", t, delta_t);
    }
  }
  bool pass = failures.empty() && worst_norm <= kNormalizationTol &&
              worst_ratio <= kRatioConstancyTol && worst_residual <= kResidualTol;
  return {pass,
          Fmt("20 pairs: max |mass-1|=%.2e (want <=%.0e), ratio dev=%.2e (want "
              "<=%.0e), residual=%.2e (want <=%.0e)%s%s",
              worst_norm, kNormalizationTol, worst_ratio, kRatioConstancyTol,
              worst_residual, kResidualTol, failures.empty() ? "" : "; errors:",
              failures.c_str()),
          csv};
}

json TailDoc(std::uint64_t seed, double truth, int rounds, const json& per_round,
             std::size_t n, std::size_t trials) {
  return {{"kind", "tailEstimate"},
          {"seed", seed},
          {"trials", trials},
          {"tail",
           {{"cMinus", 1.0}, {"cPlus", 1.0}, {"delta", 0.9}, {"t0", 0.5},
            {"t1", 1.5}, {"gamma", 0.3}, {"p", 1.0}}},
          {"truth", {{"t", truth}, {"C", 1.0}, {"shape", "zero"}}},
          {"rounds", rounds},
          {"perRound", per_round},
          {"threshold", "calibrated"},
          {"grid", Grid({{n, 1.0}})}};
}

Outcome Criterion11() {
  std::string csv;
  // Oracle decisions.
  bool oracle_ok = true;
  std::size_t oracle_runs = 0;
  std::uint64_t seed = 11001;
  for (double truth : {0.55, 0.8, 1.0, 1.234, 1.49}) {
    for (int k = 1; k <= 10; ++k) {
      Run run = RunConfig(TailDoc(seed++, truth, k, {{"mode", "oracle"}}, 0, 1));
      csv += run.csv;
      const double width = std::pow(2.0 / 3.0, k) * 1.0;
      const auto& r = run.result.trials.at(0);
      oracle_ok = oracle_ok && r.status == "ok" && r.abs_error <= width &&
                  r.theta_hat <= truth;
      ++oracle_runs;
    }
  }
  // Private tests at a generous fixed per-round size.
  const int rounds = 4;
  Run dp = RunConfig(TailDoc(11101, 1.0, rounds, {{"mode", "fixed"}}, 20000, 100));
  csv += dp.csv;
  const double width = std::pow(2.0 / 3.0, rounds);
  std::size_t hits = 0;
  for (const auto& r : dp.result.trials) hits += r.status == "ok" && r.abs_error <= width;
  const double rate = static_cast<double>(hits) / dp.result.trials.size();
  // Draw accounting with k* rounds.
  TailFamilyConfig cfg;
  cfg.gamma = 0.3;
  const std::size_t n = 2000;
  const double omega = ModulusAtT(cfg, 1.0, n, 1.0, Rng(11201));
  const int k_star = KStar(cfg.t0, cfg.t1, omega);
  const auto expected = static_cast<std::size_t>(
      n * k_star * std::max(1.0, std::ceil(std::log(static_cast<double>(k_star)))));
  Run count = RunConfig(TailDoc(11202, 1.0, std::max(k_star, 1), {{"mode", "fixed"}}, n, 3));
  csv += count.csv;
  bool draws_ok = expected == TotalDraws(n, k_star);
  for (const auto& r : count.result.trials) draws_ok = draws_ok && r.n == expected;
  bool pass = oracle_ok && rate >= kTernarySuccess && draws_ok;
  return {pass,
          Fmt("oracle %zu/%zu within (2/3)^k; DP success %.2f (want >=%.3f); "
              "omega(n=%zu)=%.4f k*=%d draws=%zu expected=%zu",
              oracle_ok ? oracle_runs : 0, oracle_runs, rate, kTernarySuccess,
              n, omega, k_star, count.result.trials.at(0).n, expected),
          csv};
}

using CriterionFn = std::function<Outcome()>;

}  // namespace
}  // namespace dplocalest

int main() {
  using namespace dplocalest;
  const std::vector<CriterionFn> criteria = {
      Criterion1, Criterion2, Criterion3, Criterion4,  Criterion5, Criterion6,
      Criterion7, Criterion8, Criterion9, Criterion10, Criterion11};
  std::vector<std::string> first;
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), ""};
    }
    std::printf("criterion %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
    first.push_back(o.csv);
  }
  std::size_t identical = 0;
  std::size_t bytes = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string again;
    try {
      again = criteria[i]().csv;
    } catch (const std::exception&) {
      again.clear();
    }
    identical += !first[i].empty() && again == first[i];
    bytes += first[i].size();
  }
  const bool det = identical == criteria.size();
  std::printf("criterion 12: %s  %zu/%zu criterion CSVs byte-identical on re-run "
              "(%zu bytes)\n",
              det ? "PASS" : "FAIL", identical, criteria.size(), bytes);
  all = all && det;
  return all ? 0 : 1;
}
