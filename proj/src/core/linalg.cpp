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

#include "chfs/core/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "chfs/core/errors.hpp"

namespace chfs {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimensions " +
                            std::to_string(a) + " and " + std::to_string(b));
  }
}

// Offsets of the basis index contributed by the digits of the listed parts,
// enumerated in mixed-radix order with the first listed part most significant.
std::vector<std::size_t> part_offsets(const SubsystemSpec& spec,
                                      const std::vector<int>& parts) {
  const auto& dims = spec.local_dims();
  std::vector<std::size_t> stride(dims.size());
  std::size_t s = 1;
  for (std::size_t p = dims.size(); p-- > 0;) {
    stride[p] = s;
    s *= static_cast<std::size_t>(dims[p]);
  }
  std::vector<std::size_t> out{0};
  for (int p : parts) {
    const auto d = static_cast<std::size_t>(dims[static_cast<std::size_t>(p)]);
    std::vector<std::size_t> next;
    next.reserve(out.size() * d);
    for (std::size_t base : out) {
      for (std::size_t k = 0; k < d; ++k) {
        next.push_back(base + k * stride[static_cast<std::size_t>(p)]);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::pair<std::vector<int>, std::vector<int>> split_parts(
    const SubsystemSpec& spec, const std::vector<int>& keep) {
  std::set<int> ks;
  for (int p : keep) {
    if (p < 0 || p >= spec.parts()) {
      throw std::out_of_range("invalid subsystem index " + std::to_string(p));
    }
    if (!ks.insert(p).second) {
      throw std::invalid_argument("duplicate subsystem index " +
                                  std::to_string(p));
    }
  }
  std::vector<int> k(ks.begin(), ks.end());
  std::vector<int> t;
  for (int p = 0; p < spec.parts(); ++p) {
    if (!ks.count(p)) t.push_back(p);
  }
  return {k, t};
}

}  // namespace

double trace_norm(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "trace_distance");
  return 0.5 * trace_norm(a.matrix() - b.matrix());
}

double trace_distance(const PureState& a, const PureState& b) {
  require_same_dim(a.dim(), b.dim(), "trace_distance");
  // sqrt(1 - |<a|b>|^2) as the norm of the part of b orthogonal to a, which
  // avoids cancellation for nearly equal states.
  const Complex ov = a.amplitudes().dot(b.amplitudes());
  return std::min(1.0, (b.amplitudes() - ov * a.amplitudes()).norm());
}

DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemSpec& spec,
                            const std::vector<int>& keep) {
  require_same_dim(rho.dim(), spec.total_dim(), "partial_trace");
  const auto [k, t] = split_parts(spec, keep);
  const auto ok = part_offsets(spec, k);
  const auto ot = part_offsets(spec, t);
  const auto dk = static_cast<Eigen::Index>(ok.size());
  CMatrix out = CMatrix::Zero(dk, dk);
  const CMatrix& m = rho.matrix();
  for (Eigen::Index j = 0; j < dk; ++j) {
    for (Eigen::Index i = 0; i < dk; ++i) {
      Complex acc = 0.0;
      for (std::size_t b : ot) {
        acc += m(static_cast<Eigen::Index>(ok[static_cast<std::size_t>(i)] + b),
                 static_cast<Eigen::Index>(ok[static_cast<std::size_t>(j)] + b));
      }
      out(i, j) = acc;
    }
  }
  return DensityMatrix::trusted(std::move(out));
}

double purity(const DensityMatrix& rho) {
  return rho.matrix().squaredNorm();
}

double reduced_purity(const PureState& psi, const SubsystemSpec& spec,
                      const std::vector<int>& keep) {
  require_same_dim(psi.dim(), spec.total_dim(), "reduced_purity");
  const auto [k, t] = split_parts(spec, keep);
  const auto ok = part_offsets(spec, k);
  const auto ot = part_offsets(spec, t);
  CMatrix m(static_cast<Eigen::Index>(ok.size()),
            static_cast<Eigen::Index>(ot.size()));
  const CVector& a = psi.amplitudes();
  for (std::size_t j = 0; j < ot.size(); ++j) {
    for (std::size_t i = 0; i < ok.size(); ++i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          a(static_cast<Eigen::Index>(ok[i] + ot[j]));
    }
  }
  if (m.rows() <= m.cols()) return (m * m.adjoint()).squaredNorm();
  return (m.adjoint() * m).squaredNorm();
}

ClosestPure closest_pure_state(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  const auto& ev = es.eigenvalues();
  const Eigen::Index d = ev.size();
  Eigen::Index top = d - 1;
  bool degenerate = false;
  while (top > 0 && ev(d - 1) - ev(top - 1) < tol::kStructural) {
    --top;
    degenerate = true;
  }
  CVector v = es.eigenvectors().col(top);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double mag = std::abs(v(i));
    if (mag > tol::kStructural) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(v(i).real(), 0.0);
      break;
    }
  }
  PureState psi = PureState::normalized(std::move(v));
  const double dist =
      trace_norm(rho.matrix() - psi.amplitudes() * psi.amplitudes().adjoint());
  return ClosestPure{std::move(psi), dist, ev(top), degenerate};
}

PureState tensor_product(const PureState& a, const PureState& b) {
  const CVector& x = a.amplitudes();
  const CVector& y = b.amplitudes();
  CVector out(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out.segment(i * y.size(), y.size()) = x(i) * y;
  }
  return PureState::normalized(std::move(out));
}

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::trusted(kron(a.matrix(), b.matrix()));
}

UnitaryMatrix tensor_product(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  return UnitaryMatrix(kron(a.matrix(), b.matrix()));
}

PureState apply_unitary(const UnitaryMatrix& u, const PureState& psi) {
  require_same_dim(u.dim(), psi.dim(), "apply_unitary");
  return PureState::normalized(u.matrix() * psi.amplitudes());
}

DensityMatrix apply_unitary(const UnitaryMatrix& u, const DensityMatrix& rho) {
  require_same_dim(u.dim(), rho.dim(), "apply_unitary");
  return DensityMatrix::trusted(u.matrix() * rho.matrix() *
                                u.matrix().adjoint());
}

double operator_norm_distance(const UnitaryMatrix& u, const UnitaryMatrix& v) {
  require_same_dim(u.dim(), v.dim(), "operator_norm_distance");
  Eigen::ComplexEigenSolver<CMatrix> es(u.matrix().adjoint() * v.matrix(),
                                        false);
  std::vector<double> phases;
  phases.reserve(static_cast<std::size_t>(es.eigenvalues().size()));
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double p = std::arg(es.eigenvalues()(i));
    if (p < 0) p += two_pi;
    phases.push_back(p);
  }
  std::sort(phases.begin(), phases.end());
  double gap = two_pi - (phases.back() - phases.front());
  for (std::size_t i = 1; i < phases.size(); ++i) {
    gap = std::max(gap, phases[i] - phases[i - 1]);
  }
  const double arc = std::max(0.0, two_pi - gap);
  return 2.0 * std::sin(arc / 4.0);
}

UnitaryMatrix householder_map(const CVector& from, const CVector& to) {
  if (from.size() != to.size()) {
    throw DimensionMismatch("householder_map: dimension mismatch");
  }
  if (std::abs(from.norm() - 1.0) > tol::kStructural ||
      std::abs(to.norm() - 1.0) > tol::kStructural) {
    throw InvariantViolation("householder_map: inputs must be unit vectors");
  }
  const Complex ov = to.dot(from);
  const Complex phase =
      std::abs(ov) > 0.0 ? ov / std::abs(ov) : Complex(1.0, 0.0);
  const CVector w = from - phase * to;
  const double wn2 = w.squaredNorm();
  const auto d = from.size();
  CMatrix h = CMatrix::Identity(d, d);
  if (wn2 > 1e-24) h -= (2.0 / wn2) * w * w.adjoint();
  return UnitaryMatrix(std::move(h));
}

}  // namespace chfs
