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

#ifndef DPLOCALEST_PARALLEL_H_
#define DPLOCALEST_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace dplocalest {

// Worker count: hardware concurrency, capped by DPLOCALEST_THREADS.
std::size_t WorkerCount();

// Runs fn(i) for i in [0, count). Work is split into contiguous blocks per
// worker; the first exception thrown is rethrown after all workers join.
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace dplocalest

#endif  // DPLOCALEST_PARALLEL_H_
