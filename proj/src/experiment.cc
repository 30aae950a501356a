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

#include "dplocalest/experiment.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dplocalest/dp_primitives.h"
#include "dplocalest/errors.h"
#include "dplocalest/initial_estimator.h"
#include "dplocalest/parallel.h"

namespace dplocalest {
namespace {

using Clock = std::chrono::steady_clock;

std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string StatusOf(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kDomain:
      return "domain_error";
    case ErrorCode::kParam:
      return "param_error";
    case ErrorCode::kFamilyMismatch:
      return "family_mismatch";
    case ErrorCode::kEmpty:
      return "empty";
    case ErrorCode::kInsufficientData:
      return "insufficient_data";
    case ErrorCode::kNumerical:
      return "numerical_error";
    case ErrorCode::kNoCrossover:
      return "no_crossover";
    case ErrorCode::kSampleComplexityCap:
      return "cap_exceeded";
    case ErrorCode::kConfig:
      return "config_error";
  }
  return "error";
}

class WallGuard {
 public:
  explicit WallGuard(double seconds) : limit_(seconds), start_(Clock::now()) {}

  bool Expired() const {
    if (limit_ <= 0.0) return false;
    std::chrono::duration<double> elapsed = Clock::now() - start_;
    return elapsed.count() > limit_;
  }

 private:
  double limit_;
  Clock::time_point start_;
};

std::string Header(const ExperimentConfig& cfg) {
  std::string kind;
  std::string columns;
  switch (cfg.kind) {
    case ExperimentKind::kScCurve:
      kind = "sc";
      columns =
          "config_hash,grid_index,eps,sc_n,power_p0,power_p1,trials,tv,"
          "formula_n,status";
      break;
    case ExperimentKind::kDpAudit:
      kind = "audit";
      columns =
          "config_hash,grid_index,mechanism,projection,eps,delta,trials,"
          "max_violation,max_raw_violation,verdict,worst_cell";
      break;
    default:
      kind = "trial";
      columns =
          "config_hash,grid_index,n,eps,trial_index,theta_true,theta_hat,"
          "abs_error,regime,runtime_ms,status,ledger_eps,ledger_delta";
      break;
  }
  std::ostringstream os;
  os << "# dplocalest " << kind << "-records schema=1 kind="
     << ExperimentKindName(cfg.kind) << " seed=" << cfg.seed
     << " config_hash=" << ConfigHash(cfg) << "\n"
     << columns << "\n";
  return os.str();
}

std::string Row(const TrialRecord& r) {
  std::ostringstream os;
  os << r.config_hash << ',' << r.grid_index << ',' << r.n << ','
     << Num(r.eps) << ',' << r.trial_index << ',' << Num(r.theta_true) << ','
     << Num(r.theta_hat) << ',' << Num(r.abs_error) << ',' << r.regime << ','
     << Num(r.runtime_ms) << ',' << r.status << ','
     << Num(r.ledger_total.eps) << ',' << Num(r.ledger_total.delta) << '\n';
  return os.str();
}

std::string Row(const ScRecord& r) {
  std::ostringstream os;
  os << r.config_hash << ',' << r.grid_index << ',' << Num(r.eps) << ','
     << r.sc_n << ',' << Num(r.power_p0) << ',' << Num(r.power_p1) << ','
     << r.trials << ',' << Num(r.tv) << ',' << Num(r.formula_n) << ','
     << r.status << '\n';
  return os.str();
}

std::string Row(const AuditRecord& r) {
  std::ostringstream os;
  os << r.config_hash << ',' << r.grid_index << ',' << r.mechanism << ','
     << r.projection << ',' << Num(r.report.eps) << ','
     << Num(r.report.delta) << ',' << r.report.trials << ','
     << Num(r.report.max_violation) << ',' << Num(r.report.max_raw_violation)
     << ',' << (r.report.pass ? "PASS" : "FAIL") << ','
     << Quote(r.report.worst_cell) << '\n';
  return os.str();
}

const char* kIncompleteTrailer = "# status=INCOMPLETE\n";

template <typename R>
void Emit(std::ostream* csv, const std::vector<R>& rows, std::size_t from) {
  if (csv == nullptr) return;
  for (std::size_t i = from; i < rows.size(); ++i) *csv << Row(rows[i]);
  csv->flush();
}

// Family rate curves and single estimates.
void RunFamilyTrials(const ExperimentConfig& cfg, const std::string& hash,
                     const WallGuard& guard, ExperimentResult& result,
                     std::ostream* csv) {
  FamilyPtr family = MakeFamily(cfg.family);
  FamilyMember truth(family, cfg.theta);
  const Rng root(cfg.seed);
  const double true_value =
      cfg.error_scale == ErrorScale::kMean ? family->Mean(cfg.theta) : cfg.theta;
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    if (guard.Expired()) {
      result.status = RunStatus::kIncomplete;
      return;
    }
    const GridPoint gp = cfg.grid[g];
    const PrivacyParams priv{gp.eps, cfg.delta};
    std::vector<TrialRecord> rows(cfg.trials);
    std::atomic<bool> skipped{false};
    ParallelFor(cfg.trials, [&](std::size_t i) {
      TrialRecord& rec = rows[i];
      rec.config_hash = hash;
      rec.grid_index = g;
      rec.n = gp.n;
      rec.eps = gp.eps;
      rec.trial_index = i;
      rec.theta_true = true_value;
      if (guard.Expired()) {
        skipped = true;
        rec.status = "skipped";
        return;
      }
      Rng trial = root.Substream(g).Substream(i);
      Rng data_rng = trial.Substream(0);
      Rng est_rng = trial.Substream(1);
      Sample x = truth.DrawSample(gp.n, data_rng);
      auto start = Clock::now();
      try {
        EstimatorReport rep = RunEstimator(cfg, *family, x, priv, est_rng);
        rec.theta_hat = cfg.error_scale == ErrorScale::kMean
                            ? family->Mean(rep.theta_hat)
                            : rep.theta_hat;
        rec.abs_error = std::fabs(rec.theta_hat - rec.theta_true);
        rec.regime = std::string(RegimeName(rep.regime));
        rec.ledger_total = rep.ledger.Total();
        rec.status = rep.projected ? "projected" : "ok";
      } catch (const Error& e) {
        rec.theta_hat = std::nan("");
        rec.abs_error = std::nan("");
        rec.regime = "none";
        rec.ledger_total = {0.0, 0.0};
        rec.status = StatusOf(e);
      }
      if (cfg.record_timing) {
        std::chrono::duration<double, std::milli> ms = Clock::now() - start;
        rec.runtime_ms = ms.count();
      }
    });
    std::size_t from = result.trials.size();
    for (auto& r : rows) {
      if (r.status != "skipped") result.trials.push_back(std::move(r));
    }
    Emit(csv, result.trials, from);
    if (skipped) {
      result.status = RunStatus::kIncomplete;
      return;
    }
  }
}

void RunScCurve(const ExperimentConfig& cfg, const std::string& hash,
                const WallGuard& guard, ExperimentResult& result,
                std::ostream* csv) {
  FamilyPtr family = MakeFamily(cfg.family);
  auto p0 = std::make_shared<FamilyMember>(family, cfg.theta0);
  auto p1 = std::make_shared<FamilyMember>(family, cfg.theta1);
  const TestProblem prob{p0, p1};
  const double tv = TvDistance(*p0, *p1);
  SampleComplexityOptions opts;
  opts.trials = cfg.sc_trials;
  opts.max_n = cfg.max_n;
  const Rng root(cfg.seed);
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    if (guard.Expired()) {
      result.status = RunStatus::kIncomplete;
      return;
    }
    ScRecord rec;
    rec.config_hash = hash;
    rec.grid_index = g;
    rec.eps = cfg.grid[g].eps;
    rec.trials = cfg.sc_trials;
    rec.tv = tv;
    rec.formula_n = tv > 0.0 ? ScHighPrivacyFormula(tv, rec.eps) : kInf;
    try {
      SCEstimate sc = EmpiricalSampleComplexity(
          prob, cfg.test, PrivacyParams{rec.eps, 0.0}, opts, root.Substream(g));
      rec.sc_n = sc.n;
      rec.power_p0 = sc.power_p0;
      rec.power_p1 = sc.power_p1;
    } catch (const Error& e) {
      rec.power_p0 = std::nan("");
      rec.power_p1 = std::nan("");
      rec.status = StatusOf(e);
    }
    result.sc.push_back(rec);
    Emit(csv, result.sc, result.sc.size() - 1);
  }
}

void RunTail(const ExperimentConfig& cfg, const std::string& hash,
             const WallGuard& guard, ExperimentResult& result,
             std::ostream* csv) {
  auto truth = std::make_shared<TailMember>(
      TailMember::Make(cfg.tail, cfg.truth_t, cfg.truth_c, cfg.truth_shape));
  const Rng root(cfg.seed);
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    if (guard.Expired()) {
      result.status = RunStatus::kIncomplete;
      return;
    }
    const GridPoint gp = cfg.grid[g];
    TernarySearchOptions opts;
    opts.rounds = cfg.rounds;
    opts.eps = gp.eps;
    opts.threshold = cfg.threshold;
    switch (cfg.per_round) {
      case PerRoundMode::kFixed:
        opts.per_round = FixedPerRound(gp.n);
        break;
      case PerRoundMode::kEmpirical: {
        SampleComplexityOptions sc;
        sc.trials = cfg.sc_trials;
        sc.max_n = cfg.max_n;
        opts.per_round = EmpiricalPerRound(gp.eps, cfg.threshold, sc,
                                           root.Substream(g).Substream(~0ULL));
        break;
      }
      case PerRoundMode::kOracle:
        opts.per_round = [](const WorstCasePair&, double, int) {
          return std::size_t{0};
        };
        opts.test = OracleRoundTest(cfg.truth_t);
        break;
    }
    std::vector<TrialRecord> rows(cfg.trials);
    std::atomic<bool> skipped{false};
    ParallelFor(cfg.trials, [&](std::size_t i) {
      TrialRecord& rec = rows[i];
      rec.config_hash = hash;
      rec.grid_index = g;
      rec.eps = gp.eps;
      rec.trial_index = i;
      rec.theta_true = cfg.truth_t;
      rec.regime = "tail";
      if (guard.Expired()) {
        skipped = true;
        rec.status = "skipped";
        return;
      }
      Rng trial = root.Substream(g).Substream(i);
      SampleOracle oracle(truth);
      auto start = Clock::now();
      try {
        TernarySearchResult r = TernarySearch(oracle, cfg.tail, opts, trial);
        rec.n = r.draws;
        rec.theta_hat = r.estimate;
        rec.abs_error = std::fabs(r.estimate - cfg.truth_t);
        rec.ledger_total = {gp.eps, 0.0};
      } catch (const Error& e) {
        rec.n = oracle.draws();
        rec.theta_hat = std::nan("");
        rec.abs_error = std::nan("");
        rec.ledger_total = {0.0, 0.0};
        rec.status = StatusOf(e);
      }
      if (cfg.record_timing) {
        std::chrono::duration<double, std::milli> ms = Clock::now() - start;
        rec.runtime_ms = ms.count();
      }
    });
    std::size_t from = result.trials.size();
    for (auto& r : rows) {
      if (r.status != "skipped") result.trials.push_back(std::move(r));
    }
    Emit(csv, result.trials, from);
    if (skipped) {
      result.status = RunStatus::kIncomplete;
      return;
    }
  }
}

struct AuditCase {
  std::string mechanism;
  std::string projection;
  ScalarMechanism release;
  Sample d;
  Sample d2;
  std::vector<double> edges;
};

std::vector<double> Linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  }
  return out;
}

std::vector<AuditCase> BuildAuditCases(AuditMechanism mech, double eps,
                                       double delta, const Rng& rng) {
  std::vector<AuditCase> cases;
  switch (mech) {
    case AuditMechanism::kLaplace:
    case AuditMechanism::kLaplaceUndersized: {
      const bool under = mech == AuditMechanism::kLaplaceUndersized;
      const double scale = under ? 0.5 / eps : 1.0 / eps;
      AuditCase c;
      c.mechanism = under ? "laplaceUndersized" : "laplace";
      c.projection = "sum";
      c.release = [scale](const Sample& x, Rng& r) {
        double s = 0.0;
        for (double v : x.values()) s += v;
        return s + SampleLaplace(scale, r);
      };
      c.d = Sample({0.0});
      c.d2 = Sample({1.0});
      c.edges = Linspace(-6.0 / eps, 7.0 / eps, 53);
      cases.push_back(std::move(c));
      break;
    }
    case AuditMechanism::kHistogram: {
      const HistogramSpec spec = HistogramSpec::Linear(1.0, BinRange{0, 2});
      const double scale = 2.0 / (eps * 5.0);
      for (std::int64_t j = 0; j <= 2; ++j) {
        AuditCase c;
        c.mechanism = "histogram";
        c.projection = "bin" + std::to_string(j);
        c.release = [spec, eps, j](const Sample& x, Rng& r) {
          PrivateHistogram h = PrivatizeHistogram(x, spec, {eps, 0.0}, r);
          return h.noisy_mass.at(j);
        };
        c.d = Sample({0.0, 1.0, 2.0, 1.0, 0.0});
        c.d2 = Sample({2.0, 1.0, 2.0, 1.0, 0.0});
        c.edges = Linspace(-8.0 * scale, 1.0 + 8.0 * scale, 61);
        cases.push_back(std::move(c));
      }
      break;
    }
    case AuditMechanism::kHistogramStable: {
      const HistogramSpec spec = HistogramSpec::Linear(1.0);
      std::vector<double> base(100, 0.0);
      for (std::size_t i = 60; i < 100; ++i) base[i] = 1.0;
      std::vector<double> moved = base;
      moved[99] = 5.0;
      const double scale = 2.0 / (eps * 100.0);
      for (std::int64_t j : {0, 1, 5}) {
        AuditCase c;
        c.mechanism = "histogramStable";
        c.projection = "bin" + std::to_string(j);
        c.release = [spec, eps, delta, j](const Sample& x, Rng& r) {
          PrivateHistogram h = PrivatizeHistogram(x, spec, {eps, delta}, r);
          auto it = h.noisy_mass.find(j);
          return it == h.noisy_mass.end() ? std::nan("") : it->second;
        };
        c.d = Sample(base);
        c.d2 = Sample(moved);
        c.edges = Linspace(-8.0 * scale, 1.0 + 8.0 * scale, 61);
        cases.push_back(std::move(c));
      }
      break;
    }
    case AuditMechanism::kCount: {
      FamilyPtr poisson = MakePoissonFamily();
      AuditCase c;
      c.mechanism = "count";
      c.projection = "theta";
      c.release = [poisson, eps](const Sample& x, Rng& r) {
        return CountEstimate(*poisson, x, 0.5, eps, r).theta;
      };
      c.d = Sample({0.0, 1.0, 2.0, 1.0, 0.0});
      c.d2 = Sample({2.0, 1.0, 2.0, 1.0, 0.0});
      c.edges = QuantileEdges(c.release, c.d, 20000, 40, rng.Substream(~0ULL));
      cases.push_back(std::move(c));
      break;
    }
    case AuditMechanism::kScheffe: {
      FamilyPtr gaussian = MakeGaussianFamily();
      TestProblem prob{std::make_shared<FamilyMember>(gaussian, 0.0),
                       std::make_shared<FamilyMember>(gaussian, 1.0)};
      SampleTest test = MakeScheffeTest(prob, {eps, 0.0});
      AuditCase c;
      c.mechanism = "scheffe";
      c.projection = "statistic";
      c.release = [test](const Sample& x, Rng& r) {
        return test(x, r).statistic;
      };
      c.d = Sample({0.0, 0.0, 0.0, 0.0, 0.0});
      c.d2 = Sample({1.0, 0.0, 0.0, 0.0, 0.0});
      c.edges = QuantileEdges(c.release, c.d, 20000, 40, rng.Substream(~0ULL));
      cases.push_back(std::move(c));
      break;
    }
    case AuditMechanism::kDeterministic: {
      AuditCase c;
      c.mechanism = "deterministic";
      c.projection = "sum";
      c.release = [](const Sample& x, Rng&) {
        double s = 0.0;
        for (double v : x.values()) s += v;
        return s;
      };
      c.d = Sample({0.0});
      c.d2 = Sample({1.0});
      c.edges = {0.5};
      cases.push_back(std::move(c));
      break;
    }
  }
  return cases;
}

void RunAudit(const ExperimentConfig& cfg, const std::string& hash,
              const WallGuard& guard, ExperimentResult& result,
              std::ostream* csv) {
  const Rng root(cfg.seed);
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    const double eps = cfg.grid[g].eps;
    const Rng grid_rng = root.Substream(g);
    std::vector<AuditCase> cases =
        BuildAuditCases(cfg.mechanism, eps, cfg.delta, grid_rng);
    for (std::size_t k = 0; k < cases.size(); ++k) {
      if (guard.Expired()) {
        result.status = RunStatus::kIncomplete;
        return;
      }
      const AuditCase& c = cases[k];
      AuditRecord rec;
      rec.config_hash = hash;
      rec.grid_index = g;
      rec.mechanism = c.mechanism;
      rec.projection = c.projection;
      rec.report = DpAudit(c.release, c.d, c.d2, eps, cfg.delta, c.edges,
                           cfg.trials, grid_rng.Substream(k));
      result.audits.push_back(rec);
      Emit(csv, result.audits, result.audits.size() - 1);
    }
  }
}

}  // namespace

EstimatorReport RunEstimator(const ExperimentConfig& cfg,
                             const ExpFamily& family, const Sample& x,
                             const PrivacyParams& priv, Rng& rng) {
  switch (cfg.estimator) {
    case EstimatorName::kDispatch:
      return ADispatch(family, x, cfg.estimator_cfg, priv, rng);
    case EstimatorName::kHigh:
      return AHigh(family, x, cfg.estimator_cfg, priv, rng);
    case EstimatorName::kLow:
      return ALow(family, x, cfg.estimator_cfg, priv, rng);
    case EstimatorName::kNonprivate: {
      EstimatorReport rep;
      rep.regime = Regime::kNonprivate;
      rep.theta_hat = NonprivateOpt(family, x);
      rep.t_hat = x.Mean();
      return rep;
    }
    case EstimatorName::kInitialMean: {
      InitialMeanResult m =
          InitialMean(x, cfg.estimator_cfg.initial, priv, rng);
      ThetaEstimate th =
          InitialTheta(family, m.mean, cfg.estimator_cfg.projection_margin);
      EstimatorReport rep;
      rep.regime = Regime::kNonprivate;
      rep.theta_hat = th.theta;
      rep.t_hat = m.mean;
      rep.projected = th.projected;
      rep.ledger = m.ledger;
      return rep;
    }
  }
  throw ParamError("RunEstimator: unknown estimator");
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg, std::ostream* csv) {
  const std::string hash = ConfigHash(cfg);
  const WallGuard guard(cfg.max_wall_seconds);
  ExperimentResult result;
  if (csv != nullptr) *csv << Header(cfg);
  switch (cfg.kind) {
    case ExperimentKind::kRateCurve:
    case ExperimentKind::kSingleEstimate:
      RunFamilyTrials(cfg, hash, guard, result, csv);
      break;
    case ExperimentKind::kScCurve:
      RunScCurve(cfg, hash, guard, result, csv);
      break;
    case ExperimentKind::kTailEstimate:
      RunTail(cfg, hash, guard, result, csv);
      break;
    case ExperimentKind::kDpAudit:
      RunAudit(cfg, hash, guard, result, csv);
      break;
  }
  if (csv != nullptr && result.status == RunStatus::kIncomplete) {
    *csv << kIncompleteTrailer;
    csv->flush();
  }
  return result;
}

std::string RenderCsv(const ExperimentConfig& cfg, const ExperimentResult& r) {
  std::string out = Header(cfg);
  for (const auto& row : r.trials) out += Row(row);
  for (const auto& row : r.sc) out += Row(row);
  for (const auto& row : r.audits) out += Row(row);
  if (r.status == RunStatus::kIncomplete) out += kIncompleteTrailer;
  return out;
}

}  // namespace dplocalest
