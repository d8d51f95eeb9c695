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

#include "chfs/oracle/queries.hpp"

#include <stdexcept>
#include <string>

#include "chfs/core/errors.hpp"

namespace chfs {

namespace {

void check_x_register(int x_qubits, int n_qubits, const char* what) {
  if (x_qubits < 1 || x_qubits > n_qubits) {
    throw DimensionMismatch(std::string(what) + ": X register of " +
                            std::to_string(x_qubits) +
                            " qubits does not fit a " +
                            std::to_string(n_qubits) + "-qubit state");
  }
}

// Inserts the oracle output register Y at qubit position y_pos of an n-qubit
// layout, with the query string read from qubits [x_start, x_start + x_len).
// For each output basis index, records the source index and the amplitude
// factor <y|phi_x>.
struct IsometryMap {
  int out_qubits = 0;
  std::vector<std::size_t> source;
  std::vector<Complex> factor;
};

IsometryMap isometry_map(const ChfsInstance& inst, int n, int x_start,
                         int x_len, int y_pos) {
  const int ell = inst.output_qubits(x_len);
  check_qubit_cap(n + ell, inst.limits());
  std::vector<CVector> phis;
  phis.reserve(std::size_t{1} << x_len);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << x_len); ++v) {
    phis.push_back(inst.oracle_state(BitString::from_uint(v, x_len)).amplitudes());
  }
  IsometryMap m;
  m.out_qubits = n + ell;
  const std::size_t out_dim = dim_of(n + ell);
  m.source.resize(out_dim);
  m.factor.resize(out_dim);
  const int low = n - y_pos;
  const std::uint64_t low_mask = (std::uint64_t{1} << low) - 1;
  const std::uint64_t y_mask = (std::uint64_t{1} << ell) - 1;
  const std::uint64_t x_mask = (std::uint64_t{1} << x_len) - 1;
  for (std::uint64_t o = 0; o < out_dim; ++o) {
    const std::uint64_t hi = o >> (ell + low);
    const std::uint64_t y = (o >> low) & y_mask;
    const std::uint64_t in = (hi << low) | (o & low_mask);
    const std::uint64_t x = (in >> (n - x_start - x_len)) & x_mask;
    m.source[o] = in;
    m.factor[o] = phis[x](static_cast<Eigen::Index>(y));
  }
  return m;
}

CVector apply_map(const IsometryMap& m, const CVector& v) {
  CVector out(static_cast<Eigen::Index>(m.source.size()));
  for (std::size_t o = 0; o < m.source.size(); ++o) {
    out(static_cast<Eigen::Index>(o)) =
        m.factor[o] * v(static_cast<Eigen::Index>(m.source[o]));
  }
  return out;
}

CMatrix apply_map(const IsometryMap& m, const CMatrix& rho) {
  const auto d = static_cast<Eigen::Index>(m.source.size());
  CMatrix out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto sj = static_cast<Eigen::Index>(m.source[static_cast<std::size_t>(j)]);
    const Complex fj = std::conj(m.factor[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < d; ++i) {
      out(i, j) = m.factor[static_cast<std::size_t>(i)] * fj *
                  rho(static_cast<Eigen::Index>(m.source[static_cast<std::size_t>(i)]), sj);
    }
  }
  return out;
}

// Applies S_x to Y for every X value x; layout X.Y.Z.
void apply_swap_blocks(const ChfsInstance& inst, Complex* data, int n,
                       int x_qubits) {
  const int ny = inst.output_qubits(x_qubits) + 1;
  const int nz = n - x_qubits - ny;
  if (nz < 0) {
    throw DimensionMismatch("unitarized_query: state too small for Y register");
  }
  const std::size_t zdim = dim_of(nz);
  const std::size_t block = dim_of(ny) * zdim;
  for (std::uint64_t x = 0; x < dim_of(x_qubits); ++x) {
    const BitString xs = BitString::from_uint(x, x_qubits);
    for (std::size_t z = 0; z < zdim; ++z) {
      inst.apply_swap(xs, data + x * block + z, zdim);
    }
  }
}

}  // namespace

CMatrix dephase_leading(const CMatrix& rho, int n_qubits, int x_qubits) {
  CMatrix out = rho;
  const int shift = n_qubits - x_qubits;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      if ((static_cast<std::uint64_t>(i) >> shift) !=
          (static_cast<std::uint64_t>(j) >> shift)) {
        out(i, j) = 0.0;
      }
    }
  }
  return out;
}

PureState isometry_query(const ChfsInstance& inst, const PureState& psi,
                         int x_qubits) {
  const int n = psi.n_qubits();
  check_x_register(x_qubits, n, "isometry_query");
  const auto m = isometry_map(inst, n, 0, x_qubits, x_qubits);
  return PureState::normalized(apply_map(m, psi.amplitudes()));
}

DensityMatrix isometry_query(const ChfsInstance& inst, const DensityMatrix& rho,
                             int x_qubits, Access access) {
  const int n = rho.n_qubits();
  check_x_register(x_qubits, n, "isometry_query");
  const auto m = isometry_map(inst, n, 0, x_qubits, x_qubits);
  if (access == Access::Classical) {
    return DensityMatrix::trusted(
        apply_map(m, dephase_leading(rho.matrix(), n, x_qubits)));
  }
  return DensityMatrix::trusted(apply_map(m, rho.matrix()));
}

PureState unitarized_query(const ChfsInstance& inst, const PureState& psi,
                           int x_qubits) {
  const int n = psi.n_qubits();
  check_x_register(x_qubits, n, "unitarized_query");
  CVector v = psi.amplitudes();
  apply_swap_blocks(inst, v.data(), n, x_qubits);
  return PureState::normalized(std::move(v));
}

DensityMatrix unitarized_query(const ChfsInstance& inst,
                               const DensityMatrix& rho, int x_qubits,
                               Access access) {
  const int n = rho.n_qubits();
  check_x_register(x_qubits, n, "unitarized_query");
  CMatrix m = access == Access::Classical
                  ? dephase_leading(rho.matrix(), n, x_qubits)
                  : rho.matrix();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    apply_swap_blocks(inst, m.col(c).data(), n, x_qubits);
  }
  CMatrix t = m.adjoint();
  for (Eigen::Index c = 0; c < t.cols(); ++c) {
    apply_swap_blocks(inst, t.col(c).data(), n, x_qubits);
  }
  return DensityMatrix::trusted(t.adjoint());
}

UnitaryMatrix controlled_swap_sum(const ChfsInstance& inst, int x_qubits) {
  if (x_qubits < 1 || x_qubits > 6) {
    throw std::invalid_argument(
        "controlled_swap_sum: only assembled for 1 <= |X| <= 6");
  }
  const int n = x_qubits + inst.output_qubits(x_qubits) + 1;
  check_qubit_cap(n, inst.limits());
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  CMatrix s = CMatrix::Identity(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    apply_swap_blocks(inst, s.col(c).data(), n, x_qubits);
  }
  return UnitaryMatrix(std::move(s));
}

std::vector<UniversalBranch> universal_query(const ChfsInstance& inst,
                                             const DensityMatrix& rho,
                                             int lambda_qubits, int x_qubits) {
  const int n = rho.n_qubits();
  const int nrest = n - lambda_qubits - x_qubits;
  if (lambda_qubits < 1 || x_qubits < 1 || nrest < 0) {
    throw DimensionMismatch("universal_query: registers do not fit the state");
  }
  const int shift = n - lambda_qubits;
  const std::size_t block = dim_of(shift);
  std::vector<UniversalBranch> out;
  for (std::uint64_t lam = 0; lam < dim_of(lambda_qubits); ++lam) {
    const auto off = static_cast<Eigen::Index>(lam * block);
    const auto b = static_cast<Eigen::Index>(block);
    const double p = rho.matrix().block(off, off, b, b).trace().real();
    if (p <= tol::kStructural) continue;
    if (lam == 0 || lam > static_cast<std::uint64_t>(x_qubits)) {
      throw std::invalid_argument(
          "universal_query: measured length " + std::to_string(lam) +
          " outside [1, " + std::to_string(x_qubits) + "]");
    }
    CMatrix proj = CMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
    proj.block(off, off, b, b) = rho.matrix().block(off, off, b, b) / p;
    const auto m = isometry_map(inst, n, lambda_qubits, static_cast<int>(lam),
                                lambda_qubits + x_qubits);
    out.push_back(UniversalBranch{static_cast<int>(lam), p,
                                  DensityMatrix::trusted(apply_map(m, proj))});
  }
  return out;
}

}  // namespace chfs
