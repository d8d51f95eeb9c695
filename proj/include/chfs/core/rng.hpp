// Copyright 2026 The CHFS Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace chfs {

/// SplitMix64 finalizer; used for deterministic seed derivation.
std::uint64_t mix64(std::uint64_t x);

/// Seeded random stream. Identical (seed, stream_id) pairs produce identical
/// draw sequences. Not thread-safe; give each task its own stream.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  double uniform();
  double normal();
  bool bernoulli(double p);
  std::uint64_t binomial(std::uint64_t trials, double p);
  std::uint64_t uniform_int(std::uint64_t upper_exclusive);
  std::uint64_t next_u64() { return engine_(); }

  /// Derives an independent stream keyed by (seed, stream_id, sub).
  Rng child(std::uint64_t sub) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace chfs
