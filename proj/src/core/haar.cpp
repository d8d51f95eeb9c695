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

#include "chfs/core/haar.hpp"

#include <Eigen/QR>

#include <cmath>
#include <stdexcept>

namespace chfs {

namespace {

CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im) * M_SQRT1_2;
    }
  }
  return g;
}

}  // namespace

PureState haar_state(int n_qubits, Rng& rng, const Limits& limits) {
  check_qubit_cap(n_qubits, limits);
  // The one-dimensional space has a single state up to phase.
  if (n_qubits == 0) return PureState::zero(0);
  const auto d = static_cast<Eigen::Index>(dim_of(n_qubits));
  CVector v = ginibre(d, 1, rng).col(0);
  return PureState::normalized(std::move(v));
}

UnitaryMatrix haar_unitary(int n_qubits, Rng& rng, const Limits& limits) {
  check_qubit_cap(n_qubits, limits);
  const auto d = static_cast<Eigen::Index>(dim_of(n_qubits));
  const CMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    const Complex phase = mag > 0.0 ? rjj / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return UnitaryMatrix(std::move(q));
}

DensityMatrix random_density(int n_qubits, int rank, Rng& rng,
                             const Limits& limits) {
  check_qubit_cap(n_qubits, limits);
  const auto d = static_cast<Eigen::Index>(dim_of(n_qubits));
  if (rank < 1 || rank > d) {
    throw std::invalid_argument("random_density: rank out of range");
  }
  const CMatrix g = ginibre(d, rank, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::trusted(std::move(rho));
}

}  // namespace chfs
