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

#include <vector>

#include "chfs/core/types.hpp"
#include "chfs/oracle/chfs_instance.hpp"

namespace chfs {

/// Whether the input register is measured in the computational basis before
/// the oracle acts.
enum class Access { Quantum, Classical };

// Register layouts below list registers from the most significant qubit. X is
// the query input, Y the oracle output, Z untouched workspace.

/// Isometry oracle, input X.Z, output X.Y.Z with |Y| = output_qubits(|X|).
PureState isometry_query(const ChfsInstance& inst, const PureState& psi,
                         int x_qubits);
DensityMatrix isometry_query(const ChfsInstance& inst, const DensityMatrix& rho,
                             int x_qubits, Access access);

/// Unitarized oracle on X.Y.Z with |Y| = output_qubits(|X|) + 1; block S_x
/// acts on Y when X holds x.
PureState unitarized_query(const ChfsInstance& inst, const PureState& psi,
                           int x_qubits);
DensityMatrix unitarized_query(const ChfsInstance& inst,
                               const DensityMatrix& rho, int x_qubits,
                               Access access);

/// The controlled sum over every x of |x><x| (x) S_x as one matrix on
/// X.Y. Only assembled for |X| <= 6.
UnitaryMatrix controlled_swap_sum(const ChfsInstance& inst, int x_qubits);

/// Zeroes the coherences between distinct values of the leading x_qubits.
CMatrix dephase_leading(const CMatrix& rho, int n_qubits, int x_qubits);

struct UniversalBranch {
  int lambda;
  double probability;
  /// Normalized post-query state on Lambda.X.Y.rest, where the oracle acted on
  /// the first lambda qubits of X and Y follows X.
  DensityMatrix state;
};

/// Measures the leading lambda_qubits register, then applies the isometry
/// oracle for length lambda to the first lambda qubits of the following
/// x_qubits register. Zero-probability outcomes are omitted. Throws if an
/// outcome of positive weight is 0 or exceeds x_qubits.
std::vector<UniversalBranch> universal_query(const ChfsInstance& inst,
                                             const DensityMatrix& rho,
                                             int lambda_qubits, int x_qubits);

}  // namespace chfs
