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

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dplocalest/errors.h"
#include "dplocalest/experiment.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitIncomplete = 3;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int Run(const std::string& command, const Options& opts) {
  using dplocalest::ExperimentKind;
  static const std::map<std::string, std::vector<ExperimentKind>> kAllowed = {
      {"estimate", {ExperimentKind::kSingleEstimate, ExperimentKind::kRateCurve}},
      {"rate-curve", {ExperimentKind::kRateCurve}},
      {"sc-curve", {ExperimentKind::kScCurve}},
      {"tail-estimate", {ExperimentKind::kTailEstimate}},
      {"dp-audit", {ExperimentKind::kDpAudit}},
  };
  nlohmann::json doc;
  {
    std::ifstream in(opts.config);
    if (!in) {
      std::cerr << "error: cannot open config " << opts.config << "\n";
      return kExitInvalid;
    }
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
      return kExitInvalid;
    }
  }
  if (opts.seed && doc.is_object()) doc["seed"] = *opts.seed;

  dplocalest::ExperimentConfig cfg;
  try {
    cfg = dplocalest::ParseExperimentConfig(doc);
  } catch (const dplocalest::ConfigError& e) {
    std::cerr << "error: invalid config: " << e.what() << "\n";
    return kExitInvalid;
  }
  const auto& allowed = kAllowed.at(command);
  if (std::find(allowed.begin(), allowed.end(), cfg.kind) == allowed.end()) {
    std::cerr << "error: invalid config: kind: '"
              << dplocalest::ExperimentKindName(cfg.kind)
              << "' cannot be run by '" << command << "'\n";
    return kExitInvalid;
  }

  std::string out_path = opts.out.empty() ? cfg.output : opts.out;
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitFailure;
    }
    os = &file;
  }
  try {
    dplocalest::ExperimentResult r = dplocalest::RunExperiment(cfg, os);
    if (r.status == dplocalest::RunStatus::kIncomplete) {
      std::cerr << "warning: wall-clock limit reached, output is INCOMPLETE\n";
      return kExitIncomplete;
    }
  } catch (const dplocalest::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private local estimation experiments"};
  app.require_subcommand(1);
  Options opts;
  std::uint64_t seed = 0;
  for (const char* name :
       {"estimate", "rate-curve", "sc-curve", "tail-estimate", "dp-audit"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opts.config, "JSON experiment config")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override the config seed");
    sub->add_option("--out", opts.out, "CSV output path (- for stdout)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed") > 0) opts.seed = seed;
  return Run(chosen->get_name(), opts);
}
