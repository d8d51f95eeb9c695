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

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const CMatrix& hermitian);

/// Half the trace norm of a - b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_distance(const PureState& a, const PureState& b);

/// Reduced state on the subsystems listed in keep (any order; the result is
/// laid out in increasing subsystem order).
DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemSpec& spec,
                            const std::vector<int>& keep);

/// Tr(rho^2).
double purity(const DensityMatrix& rho);
/// Tr(rho_S^2) of a pure global state computed from the reshaped amplitude
/// matrix (Schmidt route).
double reduced_purity(const PureState& psi, const SubsystemSpec& spec,
                      const std::vector<int>& keep);

struct ClosestPure {
  PureState state;
  double distance;        // || rho - psi psi^dagger ||_1
  double top_eigenvalue;
  bool degenerate;
};

/// Top eigenvector of rho. Ties are broken toward the lowest eigen-solver
/// index and flagged; the phase is fixed so the first nonzero amplitude is
/// real-positive.
ClosestPure closest_pure_state(const DensityMatrix& rho);

PureState tensor_product(const PureState& a, const PureState& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);
UnitaryMatrix tensor_product(const UnitaryMatrix& a, const UnitaryMatrix& b);

PureState apply_unitary(const UnitaryMatrix& u, const PureState& psi);
DensityMatrix apply_unitary(const UnitaryMatrix& u, const DensityMatrix& rho);

/// min over theta of || U - e^{i theta} V ||_op. Exact: 2 sin(L/4) where L is
/// the shortest arc covering the eigenphases of U^dagger V.
double operator_norm_distance(const UnitaryMatrix& u, const UnitaryMatrix& v);

/// Unitary reflection mapping from to e^{i gamma} to (both unit vectors).
UnitaryMatrix householder_map(const CVector& from, const CVector& to);

}  // namespace chfs
