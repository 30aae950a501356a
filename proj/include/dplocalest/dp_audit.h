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

#ifndef DPLOCALEST_DP_AUDIT_H_
#define DPLOCALEST_DP_AUDIT_H_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "dplocalest/rng.h"
#include "dplocalest/sample.h"

namespace dplocalest {

// A randomized scalar release. NaN encodes "nothing released".
using ScalarMechanism = std::function<double(const Sample&, Rng&)>;

struct AuditReport {
  double eps = 0.0;
  double delta = 0.0;
  std::size_t trials = 0;
  // Largest lower-confidence violation p_lo - e^eps q_hi - delta over cells
  // and both directions. The audit passes when it is <= 0.
  double max_violation = 0.0;
  // Largest raw violation p - e^eps q - delta.
  double max_raw_violation = 0.0;
  std::string worst_cell;
  bool pass = false;
};

// Empirical check of the (eps, delta) inequality between the output laws on
// adjacent inputs d and d2. Cells are the intervals between consecutive
// edges, every half-line at an edge, and the "absent" outcome.
AuditReport DpAudit(const ScalarMechanism& mechanism, const Sample& d,
                    const Sample& d2, double eps, double delta,
                    std::vector<double> edges, std::size_t trials,
                    const Rng& rng, double z = 4.0);

// Empirical quantiles of pilot releases on d, usable as audit edges.
std::vector<double> QuantileEdges(const ScalarMechanism& mechanism,
                                  const Sample& d, std::size_t pilot,
                                  std::size_t count, const Rng& rng);

}  // namespace dplocalest

#endif  // DPLOCALEST_DP_AUDIT_H_
