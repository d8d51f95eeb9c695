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

#include <cstddef>
#include <functional>

#include "chfs/core/rng.hpp"
#include "chfs/core/types.hpp"

namespace chfs {

/// Applies an unknown unitary to a state vector. Must be re-entrant.
using UnitaryBlackBox = std::function<CVector(const CVector&)>;

enum class NoiseMode { Exact, Perturbed };

struct TomographyResult {
  UnitaryMatrix reconstructed;
  double epsilon;
  double delta;
  int queries_used;
  /// diamond_distance_bound between the black box and the reconstruction.
  double diamond_bound;
};

inline constexpr std::size_t kMaxTomographyDim = 64;

/// Reads the black box column by column and fixes the global phase so the
/// first nonzero entry of column 0 is real-positive. Perturbed mode then
/// multiplies by a random unitary at phase-minimized operator distance
/// epsilon / 4 from the identity, which keeps the diamond bound at epsilon / 2.
/// Throws InvariantViolation when the columns are not orthonormal to 1e-6.
TomographyResult reconstruct_unitary(const UnitaryBlackBox& black_box,
                                     std::size_t dim, double epsilon,
                                     double delta, NoiseMode mode, Rng& rng);

/// Twice the phase-minimized operator-norm distance; never below the diamond
/// distance between the channels induced by u and v.
double diamond_distance_bound(const UnitaryMatrix& u, const UnitaryMatrix& v);

/// Exact diamond distance between two unitary channels: 2 sqrt(1 - r^2) with r
/// the distance from the origin to the convex hull of the spectrum of
/// u^dagger v.
double unitary_diamond_distance(const UnitaryMatrix& u, const UnitaryMatrix& v);

}  // namespace chfs
