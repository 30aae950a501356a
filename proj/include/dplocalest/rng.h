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

#ifndef DPLOCALEST_RNG_H_
#define DPLOCALEST_RNG_H_

#include <cstdint>
#include <limits>

namespace dplocalest {

// Counter-based generator. Output i of a stream is a bijective mix of
// (key, i), so a substream can be derived for any index without advancing
// the parent. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) : key_(Mix(key ^ kSeedSalt)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    ++counter_;
    return Mix(key_ + counter_ * kGolden);
  }

  // Child stream for `index`. Depends only on this stream's key.
  Rng Substream(std::uint64_t index) const {
    Rng child(0);
    child.key_ = Mix(key_ ^ Mix(index * kStreamMul + kStreamAdd));
    child.counter_ = 0;
    return child;
  }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1).
  double UniformOpen() {
    return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  static constexpr std::uint64_t Mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kSeedSalt = 0x6a09e667f3bcc909ULL;
  static constexpr std::uint64_t kStreamMul = 0xd1342543de82ef95ULL;
  static constexpr std::uint64_t kStreamAdd = 0x2545f4914f6cdd1dULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dplocalest

#endif  // DPLOCALEST_RNG_H_
