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

#include "chfs/core/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "chfs/core/errors.hpp"

namespace chfs {

namespace {

// PSD validation above this dimension is skipped; the eigendecomposition
// would dominate the cost of constructing the state.
constexpr std::size_t kPsdCheckMaxDim = 1024;

int require_qubits(std::size_t dim, const char* what) {
  const int n = qubits_of(dim);
  if (n < 0) {
    throw DimensionMismatch(std::string(what) + ": dimension " +
                            std::to_string(dim) + " is not a power of two");
  }
  return n;
}

void check_hermitian_unit_trace(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("DensityMatrix: matrix is not square");
  }
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol::kStructural) {
    throw InvariantViolation("DensityMatrix: not Hermitian (deviation " +
                             std::to_string(herm) + ")");
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol::kStructural) {
    throw InvariantViolation("DensityMatrix: trace " + std::to_string(tr) +
                             " != 1");
  }
}

}  // namespace

void check_qubit_cap(int n_qubits, const Limits& limits) {
  if (n_qubits < 0) {
    throw std::invalid_argument("negative qubit count");
  }
  if (n_qubits > limits.max_qubits) {
    throw DimensionCapExceeded("register of " + std::to_string(n_qubits) +
                               " qubits exceeds cap of " +
                               std::to_string(limits.max_qubits));
  }
}

int qubits_of(std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0) return -1;
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

// ---------------------------------------------------------------- PureState

PureState::PureState(CVector amplitudes, int n_qubits)
    : amps_(std::move(amplitudes)), n_qubits_(n_qubits) {}

PureState::PureState(CVector amplitudes) : amps_(std::move(amplitudes)) {
  n_qubits_ = require_qubits(static_cast<std::size_t>(amps_.size()), "PureState");
  const double norm2 = amps_.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol::kStructural) {
    throw InvariantViolation("PureState: squared norm " +
                             std::to_string(norm2) + " != 1");
  }
}

PureState PureState::normalized(CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) {
    throw InvariantViolation("PureState: cannot normalize a zero vector");
  }
  amplitudes /= norm;
  const int n =
      require_qubits(static_cast<std::size_t>(amplitudes.size()), "PureState");
  return PureState(std::move(amplitudes), n);
}

PureState PureState::basis(int n_qubits, std::uint64_t index) {
  if (n_qubits < 0 || n_qubits > 62) {
    throw std::invalid_argument("PureState::basis: bad qubit count");
  }
  const std::size_t dim = dim_of(n_qubits);
  if (index >= dim) {
    throw std::out_of_range("PureState::basis: index out of range");
  }
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v), n_qubits);
}

DensityMatrix PureState::density() const {
  return DensityMatrix::trusted(amps_ * amps_.adjoint());
}

// ------------------------------------------------------------ DensityMatrix

DensityMatrix::DensityMatrix(CMatrix matrix, TrustedTag)
    : m_(std::move(matrix)) {
  n_qubits_ = require_qubits(static_cast<std::size_t>(m_.rows()), "DensityMatrix");
  check_hermitian_unit_trace(m_);
}

DensityMatrix::DensityMatrix(CMatrix matrix)
    : DensityMatrix(std::move(matrix), TrustedTag{}) {
  if (dim() <= kPsdCheckMaxDim) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -tol::kStructural) {
      throw InvariantViolation("DensityMatrix: negative eigenvalue " +
                               std::to_string(lo));
    }
  }
}

DensityMatrix DensityMatrix::trusted(CMatrix matrix) {
  // Symmetrize to remove rounding-level anti-Hermitian parts.
  CMatrix sym = 0.5 * (matrix + matrix.adjoint());
  return DensityMatrix(std::move(sym), TrustedTag{});
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const auto d = static_cast<Eigen::Index>(dim_of(n_qubits));
  return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d),
                       TrustedTag{});
}

// ------------------------------------------------------------ UnitaryMatrix

UnitaryMatrix::UnitaryMatrix(CMatrix matrix) : m_(std::move(matrix)) {
  if (m_.rows() != m_.cols()) {
    throw DimensionMismatch("UnitaryMatrix: matrix is not square");
  }
  n_qubits_ = require_qubits(static_cast<std::size_t>(m_.rows()), "UnitaryMatrix");
  const CMatrix gram = m_.adjoint() * m_;
  const double dev =
      (gram - CMatrix::Identity(m_.rows(), m_.cols())).norm();
  if (dev > tol::kUnitarity) {
    throw InvariantViolation("UnitaryMatrix: ||U^dagger U - I||_F = " +
                             std::to_string(dev));
  }
}

UnitaryMatrix UnitaryMatrix::identity(int n_qubits) {
  const auto d = static_cast<Eigen::Index>(dim_of(n_qubits));
  return UnitaryMatrix(CMatrix::Identity(d, d));
}

UnitaryMatrix UnitaryMatrix::adjoint() const {
  return UnitaryMatrix(m_.adjoint());
}

// ----------------------------------------------------------- SubsystemSpec

SubsystemSpec::SubsystemSpec(std::vector<int> local_dims)
    : dims_(std::move(local_dims)) {
  if (dims_.empty()) {
    throw std::invalid_argument("SubsystemSpec: no subsystems");
  }
  for (int d : dims_) {
    if (d < 2) {
      throw std::invalid_argument("SubsystemSpec: local dimension " +
                                  std::to_string(d) + " < 2");
    }
    total_ *= static_cast<std::size_t>(d);
  }
  if (qubits_of(total_) < 0) {
    throw DimensionMismatch("SubsystemSpec: total dimension " +
                            std::to_string(total_) +
                            " is not a power of two");
  }
}

SubsystemSpec SubsystemSpec::qubits(int m) {
  return SubsystemSpec(std::vector<int>(static_cast<std::size_t>(m), 2));
}

std::size_t SubsystemSpec::dim_of_parts(const std::vector<int>& parts) const {
  std::size_t d = 1;
  for (int p : parts) {
    if (p < 0 || p >= this->parts()) {
      throw std::out_of_range("SubsystemSpec: invalid subsystem index " +
                              std::to_string(p));
    }
    d *= static_cast<std::size_t>(dims_[static_cast<std::size_t>(p)]);
  }
  return d;
}

}  // namespace chfs
