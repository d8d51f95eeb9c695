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

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace chfs {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

namespace tol {
inline constexpr double kStructural = 1e-10;
inline constexpr double kDerived = 1e-8;
inline constexpr double kUnitarity = 1e-8;
}  // namespace tol

/// Global limits on simulated register sizes.
struct Limits {
  int max_qubits = 12;
};

/// Throws DimensionCapExceeded when n_qubits is negative or above the cap.
void check_qubit_cap(int n_qubits, const Limits& limits = {});

inline std::size_t dim_of(int n_qubits) { return std::size_t{1} << n_qubits; }

/// Returns n when dim == 2^n, otherwise -1.
int qubits_of(std::size_t dim);

class DensityMatrix;

/// Unit-norm amplitude vector over n qubits. Qubit 0 is the most significant
/// tensor factor.
class PureState {
 public:
  /// Validates length 2^n and unit norm within tol::kStructural.
  explicit PureState(CVector amplitudes);

  /// Normalizes the input; throws if the input norm is zero.
  static PureState normalized(CVector amplitudes);
  static PureState basis(int n_qubits, std::uint64_t index);
  static PureState zero(int n_qubits) { return basis(n_qubits, 0); }

  const CVector& amplitudes() const { return amps_; }
  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }

  DensityMatrix density() const;

 private:
  PureState(CVector amplitudes, int n_qubits);
  CVector amps_;
  int n_qubits_ = 0;
};

/// Hermitian, positive semidefinite, unit-trace matrix over n qubits.
class DensityMatrix {
 public:
  /// Full validation: Hermitian and trace within tol::kStructural, smallest
  /// eigenvalue >= -tol::kStructural.
  explicit DensityMatrix(CMatrix matrix);

  /// Checks shape, Hermiticity and trace only. For results of trusted
  /// completely-positive maps where an eigendecomposition would dominate cost.
  static DensityMatrix trusted(CMatrix matrix);

  static DensityMatrix maximally_mixed(int n_qubits);

  const CMatrix& matrix() const { return m_; }
  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

 private:
  struct TrustedTag {};
  DensityMatrix(CMatrix matrix, TrustedTag);
  CMatrix m_;
  int n_qubits_ = 0;
};

/// Square 2^n x 2^n matrix with U^dagger U = I within tol::kUnitarity (Frobenius).
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(CMatrix matrix);
  static UnitaryMatrix identity(int n_qubits);

  const CMatrix& matrix() const { return m_; }
  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  UnitaryMatrix adjoint() const;

 private:
  CMatrix m_;
  int n_qubits_ = 0;
};

/// Local dimensions d_1..d_m of a multipartite register; subsystem 0 is the
/// most significant factor.
class SubsystemSpec {
 public:
  explicit SubsystemSpec(std::vector<int> local_dims);
  /// m qubit-sized parts.
  static SubsystemSpec qubits(int m);

  const std::vector<int>& local_dims() const { return dims_; }
  int parts() const { return static_cast<int>(dims_.size()); }
  std::size_t total_dim() const { return total_; }
  /// Product of the local dimensions of the listed parts.
  std::size_t dim_of_parts(const std::vector<int>& parts) const;

 private:
  std::vector<int> dims_;
  std::size_t total_ = 1;
};

}  // namespace chfs
