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
#include <map>
#include <memory>
#include <mutex>

#include <json.hpp>

#include "chfs/core/types.hpp"
#include "chfs/oracle/bitstring.hpp"
#include "chfs/oracle/length_function.hpp"

namespace chfs {

/// A lazily sampled family of Haar states |phi_x>, one per bit string x, each
/// on length_fn(|x|) qubits. The state for x depends only on (master_seed, x).
/// Safe for concurrent reads; the first sampled value for x is the one kept.
class ChfsInstance {
 public:
  ChfsInstance(std::uint64_t master_seed, LengthFunction length_fn,
               Limits limits = {});

  ChfsInstance(const ChfsInstance&) = delete;
  ChfsInstance& operator=(const ChfsInstance&) = delete;

  std::uint64_t master_seed() const { return seed_; }
  const LengthFunction& length_fn() const { return length_fn_; }
  const Limits& limits() const { return limits_; }

  /// Number of qubits of |phi_x> for inputs of the given length.
  int output_qubits(int input_length) const;

  /// |phi_x>. Throws std::invalid_argument on the empty string and
  /// DimensionCapExceeded when the output would exceed the qubit cap.
  PureState oracle_state(const BitString& x) const;

  /// The reflection swapping |0...0> and |phi_x>|1> on output_qubits(|x|)+1
  /// qubits, identity on the orthogonal complement.
  UnitaryMatrix swap_unitary(const BitString& x) const;

  /// Applies the same reflection to a vector in place without building the
  /// matrix.
  void apply_swap(const BitString& x, Complex* data, std::size_t stride) const;

  std::size_t cached_states() const;

  nlohmann::json descriptor() const;
  static std::unique_ptr<ChfsInstance> from_descriptor(const nlohmann::json& j,
                                                       Limits limits = {});

 private:
  std::uint64_t seed_for(const BitString& x) const;

  std::uint64_t seed_;
  LengthFunction length_fn_;
  Limits limits_;
  mutable std::mutex mu_;
  mutable std::map<BitString, std::shared_ptr<const PureState>> cache_;
};

}  // namespace chfs
