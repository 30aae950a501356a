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

#ifndef DPLOCALEST_EXPERIMENT_H_
#define DPLOCALEST_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dplocalest/dp_audit.h"
#include "dplocalest/exp_family.h"
#include "dplocalest/hypothesis_testing.h"
#include "dplocalest/param_estimators.h"
#include "dplocalest/tail_functional.h"

namespace dplocalest {

enum class ExperimentKind {
  kRateCurve,
  kScCurve,
  kTailEstimate,
  kDpAudit,
  kSingleEstimate,
};

std::string_view ExperimentKindName(ExperimentKind kind);

enum class EstimatorName {
  kDispatch,
  kHigh,
  kLow,
  kNonprivate,
  kInitialMean,
};

enum class ErrorScale { kTheta, kMean };

enum class PerRoundMode { kFixed, kEmpirical, kOracle };

enum class AuditMechanism {
  kLaplace,
  kLaplaceUndersized,
  kHistogram,
  kHistogramStable,
  kCount,
  kScheffe,
  kDeterministic,
};

struct GridPoint {
  std::size_t n = 0;
  double eps = 1.0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kSingleEstimate;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::vector<GridPoint> grid;
  double delta = 1e-6;
  std::string output;
  double max_wall_seconds = 0.0;  // 0 disables the guard
  bool record_timing = false;

  // Family experiments.
  FamilyConfig family;
  double theta = 0.0;
  EstimatorName estimator = EstimatorName::kDispatch;
  EstimatorConfig estimator_cfg;
  ErrorScale error_scale = ErrorScale::kTheta;

  // Sample-complexity curves.
  double theta0 = 0.0;
  double theta1 = 1.0;
  TestKind test = TestKind::kScheffe;
  std::size_t max_n = 10'000'000;
  std::size_t sc_trials = 1000;

  // Tail estimation.
  TailFamilyConfig tail;
  double truth_t = 1.0;
  double truth_c = 1.0;
  TailShape truth_shape = TailShape::kZero;
  int rounds = 1;
  PerRoundMode per_round = PerRoundMode::kFixed;
  std::size_t per_round_n = 1000;
  TailThreshold threshold = TailThreshold::kCalibrated;

  // Audits.
  AuditMechanism mechanism = AuditMechanism::kLaplace;

  // The document the configuration was parsed from, with defaults filled.
  nlohmann::json document;
};

// Parses and validates. Throws ConfigError naming the offending field.
ExperimentConfig ParseExperimentConfig(const nlohmann::json& doc);

// 64-bit FNV-1a of the canonical configuration document, as hex.
std::string ConfigHash(const ExperimentConfig& cfg);

struct TrialRecord {
  std::string config_hash;
  std::size_t grid_index = 0;
  std::size_t n = 0;
  double eps = 0.0;
  std::size_t trial_index = 0;
  double theta_true = 0.0;
  double theta_hat = 0.0;
  double abs_error = 0.0;
  std::string regime;
  double runtime_ms = 0.0;
  std::string status = "ok";
  PrivacyParams ledger_total;
};

struct ScRecord {
  std::string config_hash;
  std::size_t grid_index = 0;
  double eps = 0.0;
  std::size_t sc_n = 0;
  double power_p0 = 0.0;
  double power_p1 = 0.0;
  std::size_t trials = 0;
  double tv = 0.0;
  double formula_n = 0.0;
  std::string status = "ok";
};

struct AuditRecord {
  std::string config_hash;
  std::size_t grid_index = 0;
  std::string mechanism;
  std::string projection;
  AuditReport report;
};

enum class RunStatus { kComplete, kIncomplete };

struct ExperimentResult {
  RunStatus status = RunStatus::kComplete;
  std::vector<TrialRecord> trials;
  std::vector<ScRecord> sc;
  std::vector<AuditRecord> audits;
};

// Runs every grid point. When `csv` is set, rows are written as soon as a
// grid point finishes, after a versioned header.
ExperimentResult RunExperiment(const ExperimentConfig& cfg,
                               std::ostream* csv = nullptr);

// Full CSV rendering of a result, as streamed by RunExperiment.
std::string RenderCsv(const ExperimentConfig& cfg, const ExperimentResult& r);

// Estimate theta with the configured estimator; used by rate curves.
EstimatorReport RunEstimator(const ExperimentConfig& cfg, const ExpFamily& family,
                             const Sample& x, const PrivacyParams& priv,
                             Rng& rng);

}  // namespace dplocalest

#endif  // DPLOCALEST_EXPERIMENT_H_
