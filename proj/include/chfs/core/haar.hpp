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

#include "chfs/core/rng.hpp"
#include "chfs/core/types.hpp"

namespace chfs {

/// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
PureState haar_state(int n_qubits, Rng& rng, const Limits& limits = {});

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// diag(R) absorbed into Q.
UnitaryMatrix haar_unitary(int n_qubits, Rng& rng, const Limits& limits = {});

/// Random mixed state of the given rank, induced by tracing out a Haar
/// purification (Ginibre G G^dagger / Tr).
DensityMatrix random_density(int n_qubits, int rank, Rng& rng,
                             const Limits& limits = {});

}  // namespace chfs
