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

#include "chfs/tomography/tomography.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "chfs/core/errors.hpp"
#include "chfs/core/haar.hpp"
#include "chfs/core/linalg.hpp"

namespace chfs {

namespace {

// Length of the shortest arc of the unit circle containing every eigenphase of
// u^dagger v.
double covering_arc(const UnitaryMatrix& u, const UnitaryMatrix& v) {
  if (u.dim() != v.dim()) {
    throw DimensionMismatch("unitary distance: dimension mismatch");
  }
  Eigen::ComplexEigenSolver<CMatrix> es(u.matrix().adjoint() * v.matrix(), false);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> ph;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double p = std::arg(es.eigenvalues()(i));
    if (p < 0) p += two_pi;
    ph.push_back(p);
  }
  std::sort(ph.begin(), ph.end());
  double gap = two_pi - (ph.back() - ph.front());
  for (std::size_t i = 1; i < ph.size(); ++i) gap = std::max(gap, ph[i] - ph[i - 1]);
  return std::max(0.0, two_pi - gap);
}

}  // namespace

double diamond_distance_bound(const UnitaryMatrix& u, const UnitaryMatrix& v) {
  return 2.0 * operator_norm_distance(u, v);
}

double unitary_diamond_distance(const UnitaryMatrix& u, const UnitaryMatrix& v) {
  const double arc = covering_arc(u, v);
  if (arc >= std::numbers::pi) return 2.0;
  return 2.0 * std::sin(arc / 2.0);
}

TomographyResult reconstruct_unitary(const UnitaryBlackBox& black_box,
                                     std::size_t dim, double epsilon,
                                     double delta, NoiseMode mode, Rng& rng) {
  if (dim < 1 || dim > kMaxTomographyDim || qubits_of(dim) < 0) {
    throw std::invalid_argument("reconstruct_unitary: dimension " +
                                std::to_string(dim) +
                                " must be a power of two at most " +
                                std::to_string(kMaxTomographyDim));
  }
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("reconstruct_unitary: epsilon and delta must lie in (0, 1)");
  }
  const auto d = static_cast<Eigen::Index>(dim);
  CMatrix z(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    CVector e = CVector::Zero(d);
    e(c) = 1.0;
    const CVector col = black_box(e);
    if (col.size() != d) {
      throw DimensionMismatch("reconstruct_unitary: black box changed the dimension");
    }
    z.col(c) = col;
  }
  const double gram_dev = (z.adjoint() * z - CMatrix::Identity(d, d)).norm();
  if (gram_dev > 1e-6) {
    throw InvariantViolation("reconstruct_unitary: black box is not unitary (Gram deviation " +
                             std::to_string(gram_dev) + ")");
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    const double mag = std::abs(z(i, 0));
    if (mag > tol::kStructural) {
      z *= std::conj(z(i, 0)) / mag;
      break;
    }
  }
  // Re-orthonormalize away rounding from the black box before validation.
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  const UnitaryMatrix exact(q);

  if (mode == NoiseMode::Exact) {
    return TomographyResult{exact, epsilon, delta, static_cast<int>(dim),
                            diamond_distance_bound(exact, exact)};
  }

  // exp(iH) with H having eigenvalues +-a (and the rest inside [-a, a]) sits
  // at operator distance 2 sin(a / 2) = epsilon / 4 from the identity.
  const double a = 2.0 * std::asin(epsilon / 8.0);
  const int n = qubits_of(dim);
  const auto basis = haar_unitary(n, rng);
  CVector phases(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    double theta = (2.0 * rng.uniform() - 1.0) * a;
    if (i == 0) theta = a;
    if (i == 1) theta = -a;
    phases(i) = std::polar(1.0, theta);
  }
  if (d == 1) phases(0) = 1.0;
  const CMatrix kick = basis.matrix() * phases.asDiagonal() * basis.matrix().adjoint();
  const UnitaryMatrix noisy(exact.matrix() * kick);
  const double bound = diamond_distance_bound(exact, noisy);
  if (bound > epsilon + 1e-12) {
    throw std::logic_error("reconstruct_unitary: perturbation exceeded the epsilon bound");
  }
  return TomographyResult{noisy, epsilon, delta, static_cast<int>(dim), bound};
}

}  // namespace chfs
