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

namespace chfs {

/// Applies a k-qubit matrix to the listed target qubits of an n-qubit vector.
/// targets[0] is the most significant qubit of the gate.
void apply_on_qubits(CVector& state, int n_qubits, const CMatrix& gate,
                     const std::vector<int>& targets);

/// rho -> G rho G^dagger with G acting on targets.
void apply_on_qubits(CMatrix& rho, int n_qubits, const CMatrix& gate,
                     const std::vector<int>& targets);

/// Reorders qubits: output qubit j is input qubit order[j].
CVector permute_qubits(const CVector& state, int n_qubits,
                       const std::vector<int>& order);
CMatrix permute_qubits(const CMatrix& rho, int n_qubits,
                       const std::vector<int>& order);

/// Probability that the listed qubits read the given bit pattern
/// (targets[0] is the most significant bit of pattern).
double pattern_probability(const CVector& state, int n_qubits,
                           const std::vector<int>& targets,
                           std::uint64_t pattern);

/// Zeroes amplitudes whose target qubits differ from pattern (unnormalized).
void project_pattern(CVector& state, int n_qubits,
                     const std::vector<int>& targets, std::uint64_t pattern);

/// Reads the value of target qubits from a basis index.
std::uint64_t extract_bits(std::uint64_t index, int n_qubits,
                           const std::vector<int>& targets);

CMatrix pauli_x();
CMatrix pauli_z();
CMatrix hadamard();

}  // namespace chfs
