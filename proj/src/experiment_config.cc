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

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "dplocalest/errors.h"
#include "dplocalest/experiment.h"

namespace dplocalest {
namespace {

using nlohmann::json;

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json* Find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double Number(const json& obj, const std::string& path, const char* key,
              std::optional<double> fallback = std::nullopt) {
  const json* v = Find(obj, key);
  if (v == nullptr) {
    if (fallback) return *fallback;
    throw ConfigError(Join(path, key), "is required");
  }
  if (!v->is_number()) throw ConfigError(Join(path, key), "must be a number");
  double d = v->get<double>();
  if (!std::isfinite(d)) throw ConfigError(Join(path, key), "must be finite");
  return d;
}

std::size_t Count(const json& obj, const std::string& path, const char* key,
                  std::optional<std::size_t> fallback, std::size_t min_value) {
  const json* v = Find(obj, key);
  std::size_t out;
  if (v == nullptr) {
    if (!fallback) throw ConfigError(Join(path, key), "is required");
    out = *fallback;
  } else if (v->is_number_unsigned() ||
             (v->is_number_integer() && v->get<long long>() >= 0)) {
    out = v->get<std::size_t>();
  } else if (v->is_number_float() && v->get<double>() >= 0 &&
             v->get<double>() == std::floor(v->get<double>()) &&
             v->get<double>() < 1.8e19) {
    out = static_cast<std::size_t>(v->get<double>());
  } else {
    throw ConfigError(Join(path, key), "must be a nonnegative integer");
  }
  if (out < min_value) {
    throw ConfigError(Join(path, key),
                      "must be at least " + std::to_string(min_value));
  }
  return out;
}

std::string String(const json& obj, const std::string& path, const char* key,
                   std::optional<std::string> fallback = std::nullopt) {
  const json* v = Find(obj, key);
  if (v == nullptr) {
    if (fallback) return *fallback;
    throw ConfigError(Join(path, key), "is required");
  }
  if (!v->is_string()) throw ConfigError(Join(path, key), "must be a string");
  return v->get<std::string>();
}

const json& Object(const json& obj, const std::string& path, const char* key) {
  const json* v = Find(obj, key);
  if (v == nullptr) throw ConfigError(Join(path, key), "is required");
  if (!v->is_object()) throw ConfigError(Join(path, key), "must be an object");
  return *v;
}

void RequirePositive(double v, const std::string& field) {
  if (!(v > 0.0)) throw ConfigError(field, "must be positive");
}

[[noreturn]] void BadChoice(const std::string& field, const std::string& value,
                            const std::string& allowed) {
  throw ConfigError(field, "unknown value '" + value + "' (expected " +
                               allowed + ")");
}

FamilyConfig ParseFamily(const json& doc) {
  const json& f = Object(doc, "", "family");
  FamilyConfig out;
  out.family = String(f, "family", "family");
  if (const json* params = Find(f, "params")) {
    if (!params->is_object()) {
      throw ConfigError("family.params", "must be an object");
    }
    for (auto it = params->begin(); it != params->end(); ++it) {
      out.params[it.key()] = Number(*params, "family.params", it.key().c_str());
    }
  }
  try {
    MakeFamily(out);
  } catch (const ParamError& e) {
    throw ConfigError("family", e.what());
  }
  return out;
}

std::vector<GridPoint> ParseGrid(const json& doc, bool need_n) {
  const json* g = Find(doc, "grid");
  if (g == nullptr) throw ConfigError("grid", "is required");
  if (!g->is_array() || g->empty()) {
    throw ConfigError("grid", "must be a nonempty array");
  }
  std::vector<GridPoint> out;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const std::string path = "grid[" + std::to_string(i) + "]";
    const json& point = (*g)[i];
    if (!point.is_object()) throw ConfigError(path, "must be an object");
    GridPoint gp;
    gp.eps = Number(point, path, "eps");
    RequirePositive(gp.eps, path + ".eps");
    gp.n = Count(point, path, "n",
                 need_n ? std::nullopt : std::optional<std::size_t>(0),
                 need_n ? 1 : 0);
    out.push_back(gp);
  }
  return out;
}

void ParseEstimator(const json& doc, ExperimentConfig& cfg) {
  const json* e = Find(doc, "estimator");
  if (e == nullptr) return;
  if (!e->is_object()) throw ConfigError("estimator", "must be an object");
  const std::string name = String(*e, "estimator", "name", "dispatch");
  if (name == "dispatch") {
    cfg.estimator = EstimatorName::kDispatch;
  } else if (name == "high") {
    cfg.estimator = EstimatorName::kHigh;
  } else if (name == "low") {
    cfg.estimator = EstimatorName::kLow;
  } else if (name == "nonprivate") {
    cfg.estimator = EstimatorName::kNonprivate;
  } else if (name == "initialMean") {
    cfg.estimator = EstimatorName::kInitialMean;
  } else {
    BadChoice("estimator.name", name, "dispatch|high|low|nonprivate|initialMean");
  }
  EstimatorConfig& ec = cfg.estimator_cfg;
  ec.C = Number(*e, "estimator", "C", ec.C);
  RequirePositive(ec.C, "estimator.C");
  ec.k_threshold = Number(*e, "estimator", "kThreshold", ec.k_threshold);
  RequirePositive(ec.k_threshold, "estimator.kThreshold");
  if (const json* phi = Find(*e, "phi")) {
    if (phi->is_string() && phi->get<std::string>() == "conservative") {
      ec.initial.phi_override.reset();
    } else {
      ec.initial.phi_override = Count(*e, "estimator", "phi", std::nullopt, 1);
    }
  }
  ec.initial.zeta = Number(*e, "estimator", "zeta", ec.initial.zeta);
  if (!(ec.initial.zeta >= 1.0)) {
    throw ConfigError("estimator.zeta", "must be >= 1");
  }
  ec.initial.C = Number(*e, "estimator", "rangeC", ec.initial.C);
  RequirePositive(ec.initial.C, "estimator.rangeC");
  ec.initial.beta = Number(*e, "estimator", "beta", ec.initial.beta);
  if (!(ec.initial.beta > 0.0 && ec.initial.beta < 1.0)) {
    throw ConfigError("estimator.beta", "must lie in (0, 1)");
  }
  ec.initial.berry_esseen_nu =
      Number(*e, "estimator", "nu", ec.initial.berry_esseen_nu);
  RequirePositive(ec.initial.berry_esseen_nu, "estimator.nu");
  ec.initial.min_n_constant =
      Number(*e, "estimator", "minNConstant", ec.initial.min_n_constant);
  if (!(ec.initial.min_n_constant >= 0.0)) {
    throw ConfigError("estimator.minNConstant", "must be >= 0");
  }
  const std::string noise = String(*e, "estimator", "noise", "sensitivity");
  if (noise == "sensitivity") {
    ec.noise = NcllreNoise::kSensitivity;
  } else if (noise == "epsScaled") {
    ec.noise = NcllreNoise::kEpsScaled;
  } else {
    BadChoice("estimator.noise", noise, "sensitivity|epsScaled");
  }
  if (const json* mean = Find(*e, "mean")) {
    if (!mean->is_object()) throw ConfigError("estimator.mean", "must be an object");
    const std::string kind = String(*mean, "estimator.mean", "kind", "initialMean");
    if (kind == "initialMean") {
      ec.mean.kind = MeanEstimatorSpec::Kind::kInitialMean;
    } else if (kind == "publicRange") {
      ec.mean.kind = MeanEstimatorSpec::Kind::kPublicRange;
      ec.mean.lo = Number(*mean, "estimator.mean", "lo");
      ec.mean.hi = Number(*mean, "estimator.mean", "hi");
      if (!(ec.mean.hi > ec.mean.lo)) {
        throw ConfigError("estimator.mean.hi", "must exceed lo");
      }
    } else {
      BadChoice("estimator.mean.kind", kind, "initialMean|publicRange");
    }
  }
}

void ParseTail(const json& doc, ExperimentConfig& cfg) {
  const json& t = Object(doc, "", "tail");
  TailFamilyConfig& tc = cfg.tail;
  tc.c_minus = Number(t, "tail", "cMinus", tc.c_minus);
  tc.c_plus = Number(t, "tail", "cPlus", tc.c_plus);
  tc.delta = Number(t, "tail", "delta", tc.delta);
  tc.t0 = Number(t, "tail", "t0", tc.t0);
  tc.t1 = Number(t, "tail", "t1", tc.t1);
  tc.gamma = Number(t, "tail", "gamma", tc.gamma);
  tc.p = Number(t, "tail", "p", tc.p);
  try {
    tc.Validate();
  } catch (const ParamError& e) {
    throw ConfigError("tail", e.what());
  }
  const json& truth = Object(doc, "", "truth");
  cfg.truth_t = Number(truth, "truth", "t");
  cfg.truth_c = Number(truth, "truth", "C", tc.c_minus);
  const std::string shape = String(truth, "truth", "shape", "zero");
  if (shape == "zero") {
    cfg.truth_shape = TailShape::kZero;
  } else if (shape == "plus") {
    cfg.truth_shape = TailShape::kPlusGamma;
  } else if (shape == "minus") {
    cfg.truth_shape = TailShape::kMinusGamma;
  } else {
    BadChoice("truth.shape", shape, "zero|plus|minus");
  }
  try {
    TailMember::Make(tc, cfg.truth_t, cfg.truth_c, cfg.truth_shape);
  } catch (const ParamError& e) {
    throw ConfigError("truth", e.what());
  }
  cfg.rounds = static_cast<int>(Count(doc, "", "rounds", std::nullopt, 1));
  if (cfg.rounds > 200) throw ConfigError("rounds", "must be at most 200");
  const json& per = Object(doc, "", "perRound");
  const std::string mode = String(per, "perRound", "mode");
  if (mode == "fixed") {
    cfg.per_round = PerRoundMode::kFixed;
  } else if (mode == "empirical") {
    cfg.per_round = PerRoundMode::kEmpirical;
    cfg.sc_trials = Count(per, "perRound", "trials", 400, 100);
  } else if (mode == "oracle") {
    cfg.per_round = PerRoundMode::kOracle;
  } else {
    BadChoice("perRound.mode", mode, "fixed|empirical|oracle");
  }
  const std::string threshold = String(doc, "", "threshold", "calibrated");
  if (threshold == "calibrated") {
    cfg.threshold = TailThreshold::kCalibrated;
  } else if (threshold == "constant") {
    cfg.threshold = TailThreshold::kConstant;
  } else {
    BadChoice("threshold", threshold, "calibrated|constant");
  }
}

}  // namespace

std::string_view ExperimentKindName(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kRateCurve:
      return "rateCurve";
    case ExperimentKind::kScCurve:
      return "scCurve";
    case ExperimentKind::kTailEstimate:
      return "tailEstimate";
    case ExperimentKind::kDpAudit:
      return "dpAudit";
    case ExperimentKind::kSingleEstimate:
      return "singleEstimate";
  }
  return "unknown";
}

ExperimentConfig ParseExperimentConfig(const json& doc) {
  if (!doc.is_object()) throw ConfigError("$", "config must be a JSON object");
  ExperimentConfig cfg;
  cfg.document = doc;
  const std::string kind = String(doc, "", "kind");
  if (kind == "rateCurve") {
    cfg.kind = ExperimentKind::kRateCurve;
  } else if (kind == "scCurve") {
    cfg.kind = ExperimentKind::kScCurve;
  } else if (kind == "tailEstimate") {
    cfg.kind = ExperimentKind::kTailEstimate;
  } else if (kind == "dpAudit") {
    cfg.kind = ExperimentKind::kDpAudit;
  } else if (kind == "singleEstimate") {
    cfg.kind = ExperimentKind::kSingleEstimate;
  } else {
    BadChoice("kind", kind,
              "rateCurve|scCurve|tailEstimate|dpAudit|singleEstimate");
  }
  if (const json* seed = Find(doc, "seed")) {
    if (seed->is_number_unsigned()) {
      cfg.seed = seed->get<std::uint64_t>();
    } else if (seed->is_number_integer() && seed->get<long long>() >= 0) {
      cfg.seed = static_cast<std::uint64_t>(seed->get<long long>());
    } else {
      throw ConfigError("seed", "must be an unsigned 64-bit integer");
    }
  }
  cfg.output = String(doc, "", "output", "");
  cfg.max_wall_seconds = Number(doc, "", "maxWallSeconds", 0.0);
  if (!(cfg.max_wall_seconds >= 0.0)) {
    throw ConfigError("maxWallSeconds", "must be >= 0");
  }
  if (const json* timing = Find(doc, "recordTiming")) {
    if (!timing->is_boolean()) {
      throw ConfigError("recordTiming", "must be a boolean");
    }
    cfg.record_timing = timing->get<bool>();
  }
  cfg.delta = Number(doc, "", "delta", 1e-6);
  if (!(cfg.delta >= 0.0 && cfg.delta < 1.0)) {
    throw ConfigError("delta", "must lie in [0, 1)");
  }

  switch (cfg.kind) {
    case ExperimentKind::kRateCurve:
    case ExperimentKind::kSingleEstimate: {
      cfg.trials = Count(doc, "", "trials", 1, 1);
      cfg.family = ParseFamily(doc);
      cfg.theta = Number(doc, "", "theta", 0.0);
      try {
        MakeFamily(cfg.family)->CheckTheta(cfg.theta);
      } catch (const DomainError& e) {
        throw ConfigError("theta", e.what());
      }
      cfg.grid = ParseGrid(doc, true);
      ParseEstimator(doc, cfg);
      const std::string scale = String(doc, "", "errorScale", "theta");
      if (scale == "theta") {
        cfg.error_scale = ErrorScale::kTheta;
      } else if (scale == "mean") {
        cfg.error_scale = ErrorScale::kMean;
      } else {
        BadChoice("errorScale", scale, "theta|mean");
      }
      break;
    }
    case ExperimentKind::kScCurve: {
      cfg.family = ParseFamily(doc);
      cfg.theta0 = Number(doc, "", "theta0");
      cfg.theta1 = Number(doc, "", "theta1");
      cfg.grid = ParseGrid(doc, false);
      cfg.sc_trials = Count(doc, "", "trials", 1000, 100);
      cfg.trials = cfg.sc_trials;
      cfg.max_n = Count(doc, "", "maxN", 10'000'000, 1);
      const std::string test = String(doc, "", "test", "scheffe");
      if (test == "scheffe") {
        cfg.test = TestKind::kScheffe;
      } else if (test == "ncllr") {
        cfg.test = TestKind::kNcllr;
      } else {
        BadChoice("test", test, "scheffe|ncllr");
      }
      break;
    }
    case ExperimentKind::kTailEstimate: {
      cfg.trials = Count(doc, "", "trials", 1, 1);
      ParseTail(doc, cfg);
      cfg.grid = ParseGrid(doc, cfg.per_round == PerRoundMode::kFixed);
      break;
    }
    case ExperimentKind::kDpAudit: {
      cfg.trials = Count(doc, "", "trials", 100000, 10000);
      cfg.grid = ParseGrid(doc, false);
      const std::string m = String(doc, "", "mechanism");
      if (m == "laplace") {
        cfg.mechanism = AuditMechanism::kLaplace;
      } else if (m == "laplaceUndersized") {
        cfg.mechanism = AuditMechanism::kLaplaceUndersized;
      } else if (m == "histogram") {
        cfg.mechanism = AuditMechanism::kHistogram;
      } else if (m == "histogramStable") {
        cfg.mechanism = AuditMechanism::kHistogramStable;
      } else if (m == "count") {
        cfg.mechanism = AuditMechanism::kCount;
      } else if (m == "scheffe") {
        cfg.mechanism = AuditMechanism::kScheffe;
      } else if (m == "deterministic") {
        cfg.mechanism = AuditMechanism::kDeterministic;
      } else {
        BadChoice("mechanism", m,
                  "laplace|laplaceUndersized|histogram|histogramStable|count|"
                  "scheffe|deterministic");
      }
      break;
    }
  }
  return cfg;
}

std::string ConfigHash(const ExperimentConfig& cfg) {
  const std::string text = cfg.document.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dplocalest
