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
#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "chfs/core/types.hpp"
#include "chfs/oracle/chfs_instance.hpp"
#include "chfs/primitives/circuit.hpp"

namespace chfs {

/// One layer of a keyed no-ancilla circuit.
struct PruStep {
  enum class Kind {
    Unitary,        // gate on the register
    FixedQuery,     // S_x for a fixed string x on qubits [offset, offset + l(|x|) + 1)
    AdaptiveQuery,  // measure x_qubits, then S_x for the observed x at offset
    Depolarize,     // rho -> (1 - strength) rho + strength I / 2^n
  };

  Kind kind = Kind::Unitary;
  std::optional<Gate> gate;
  BitString x;
  std::vector<int> x_qubits;
  int offset = 0;
  double strength = 0.0;

  static PruStep unitary(Gate g);
  static PruStep fixed_query(BitString x, int offset);
  static PruStep adaptive_query(std::vector<int> x_qubits, int offset);
  static PruStep depolarize(double strength);

  nlohmann::json to_json() const;
  static PruStep from_json(const nlohmann::json& j);
};

/// Keyed family G_k acting on n qubits with no ancilla. Circuit k is indexed
/// by the key read as an unsigned integer.
class PruCandidate {
 public:
  PruCandidate(int key_bits, int n_qubits, std::vector<std::vector<PruStep>> circuits);

  int key_bits() const { return key_bits_; }
  int n_qubits() const { return n_qubits_; }
  bool uses_ancilla() const { return false; }
  const std::vector<PruStep>& steps(const BitString& key) const;
  /// True when some key's circuit measures or adds noise.
  bool has_nonunitary_steps() const;

  /// Strings queried by the fixed-query steps of the given key.
  std::vector<BitString> fixed_queries(const BitString& key) const;

  /// Throws DimensionMismatch if a query does not fit the register under l.
  void validate(const LengthFunction& ell) const;

  nlohmann::json to_json() const;
  static PruCandidate from_json(const nlohmann::json& j);

 private:
  int key_bits_;
  int n_qubits_;
  std::vector<std::vector<PruStep>> circuits_;
};

/// Returns the unitary used in place of S_x; an empty result means identity.
using QueryResolver = std::function<std::optional<UnitaryMatrix>(const BitString&)>;

/// Resolver answering every query with the true reflection of the oracle.
QueryResolver oracle_resolver(const ChfsInstance& oracle);

/// G_k(rho) with queries answered by the oracle.
DensityMatrix pru_apply(const PruCandidate& c, const ChfsInstance& oracle,
                        const BitString& key, const DensityMatrix& rho);
/// G_k(rho) with queries answered by resolver.
DensityMatrix pru_apply(const PruCandidate& c, const BitString& key,
                        const DensityMatrix& rho, const QueryResolver& resolver);
/// Pure-state path; throws std::logic_error if the key's circuit measures or
/// adds noise.
PureState pru_apply_pure(const PruCandidate& c, const ChfsInstance& oracle,
                         const BitString& key, const PureState& psi);

struct LayeredPruSpec {
  int n_qubits = 5;
  int key_bits = 3;
  /// One fixed query per entry; each query of length L sits at a key-seeded
  /// offset and acts on l(L) + 1 qubits.
  std::vector<int> query_lengths{3, 2};
  std::uint64_t seed = 1;
  /// Replace the last fixed query with an adaptive one reading qubits
  /// [0, length) of the register.
  bool adaptive_last = false;
  /// Depolarizing strength inserted before the final unitary layer (0 = none).
  double depolarize = 0.0;
};

/// U_m S_{x_m} ... U_1 S_{x_1} U_0 with key-seeded Haar layers U_i and
/// key-seeded query strings.
PruCandidate make_layered_pru(const LayeredPruSpec& spec, const LengthFunction& ell);

}  // namespace chfs
