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

#include "dplocalest/dp_audit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dplocalest/errors.h"
#include "dplocalest/numerics.h"
#include "dplocalest/parallel.h"

namespace dplocalest {
namespace {

struct Releases {
  std::vector<double> sorted;
  std::size_t absent = 0;

  // Count of releases in (lo, hi].
  std::size_t CountIn(double lo, double hi) const {
    auto a = std::upper_bound(sorted.begin(), sorted.end(), lo);
    auto b = std::upper_bound(sorted.begin(), sorted.end(), hi);
    return static_cast<std::size_t>(b - a);
  }
};

Releases Collect(const ScalarMechanism& mechanism, const Sample& d,
                 std::size_t trials, const Rng& rng) {
  std::vector<double> out(trials);
  ParallelFor(trials, [&](std::size_t i) {
    Rng r = rng.Substream(i);
    out[i] = mechanism(d, r);
  });
  Releases rel;
  rel.sorted.reserve(trials);
  for (double v : out) {
    if (std::isnan(v)) {
      ++rel.absent;
    } else {
      rel.sorted.push_back(v);
    }
  }
  std::sort(rel.sorted.begin(), rel.sorted.end());
  return rel;
}

}  // namespace

AuditReport DpAudit(const ScalarMechanism& mechanism, const Sample& d,
                    const Sample& d2, double eps, double delta,
                    std::vector<double> edges, std::size_t trials,
                    const Rng& rng, double z) {
  if (trials == 0) throw ParamError("DpAudit: trials must be positive");
  if (!(eps > 0.0) || !(delta >= 0.0)) {
    throw ParamError("DpAudit: need eps > 0 and delta >= 0");
  }
  const Releases r1 = Collect(mechanism, d, trials, rng.Substream(0));
  const Releases r2 = Collect(mechanism, d2, trials, rng.Substream(1));

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  struct Cell {
    double lo;
    double hi;
  };
  std::vector<Cell> cells;
  const double inf = std::numeric_limits<double>::infinity();
  double prev = -inf;
  for (double e : edges) {
    cells.push_back({prev, e});
    cells.push_back({-inf, e});
    cells.push_back({e, inf});
    prev = e;
  }
  cells.push_back({prev, inf});

  AuditReport report;
  report.eps = eps;
  report.delta = delta;
  report.trials = trials;
  report.max_violation = -inf;
  report.max_raw_violation = -inf;
  const double ratio = std::exp(eps);
  const double t = static_cast<double>(trials);
  auto consider = [&](std::size_t a, std::size_t b, const std::string& label) {
    const double lower = WilsonLower(a, trials, z) - ratio * WilsonUpper(b, trials, z) - delta;
    const double raw = a / t - ratio * (b / t) - delta;
    if (lower > report.max_violation) {
      report.max_violation = lower;
      report.worst_cell = label;
    }
    report.max_raw_violation = std::max(report.max_raw_violation, raw);
  };
  for (const Cell& c : cells) {
    std::ostringstream os;
    os << "(" << c.lo << ", " << c.hi << "]";
    const std::size_t a = r1.CountIn(c.lo, c.hi);
    const std::size_t b = r2.CountIn(c.lo, c.hi);
    consider(a, b, os.str());
    consider(b, a, os.str() + " reversed");
  }
  consider(r1.absent, r2.absent, "absent");
  consider(r2.absent, r1.absent, "absent reversed");
  report.pass = report.max_violation <= 0.0;
  return report;
}

std::vector<double> QuantileEdges(const ScalarMechanism& mechanism,
                                  const Sample& d, std::size_t pilot,
                                  std::size_t count, const Rng& rng) {
  Releases rel = Collect(mechanism, d, pilot, rng);
  std::vector<double> edges;
  if (rel.sorted.empty()) return edges;
  for (std::size_t i = 1; i <= count; ++i) {
    std::size_t k = i * (rel.sorted.size() - 1) / (count + 1);
    edges.push_back(rel.sorted[k]);
  }
  return edges;
}

}  // namespace dplocalest
