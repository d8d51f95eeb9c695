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

#include "chfs/core/gates.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "chfs/core/errors.hpp"

namespace chfs {

namespace {

struct TargetLayout {
  std::uint64_t mask = 0;
  std::vector<std::uint64_t> offsets;  // offset for each k-bit pattern
};

TargetLayout layout_for(int n_qubits, const std::vector<int>& targets) {
  TargetLayout out;
  std::set<int> seen;
  for (int q : targets) {
    if (q < 0 || q >= n_qubits) {
      throw std::out_of_range("qubit index " + std::to_string(q) +
                              " out of range");
    }
    if (!seen.insert(q).second) {
      throw std::invalid_argument("duplicate target qubit " +
                                  std::to_string(q));
    }
    out.mask |= std::uint64_t{1} << (n_qubits - 1 - q);
  }
  const std::size_t k = targets.size();
  out.offsets.resize(std::size_t{1} << k);
  for (std::uint64_t p = 0; p < out.offsets.size(); ++p) {
    std::uint64_t off = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if ((p >> (k - 1 - j)) & 1U) {
        off |= std::uint64_t{1} << (n_qubits - 1 - targets[j]);
      }
    }
    out.offsets[p] = off;
  }
  return out;
}

void apply_raw(Complex* data, std::uint64_t dim, const CMatrix& gate,
               const TargetLayout& lay) {
  const std::size_t g = lay.offsets.size();
  CVector buf(static_cast<Eigen::Index>(g));
  CVector out(static_cast<Eigen::Index>(g));
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & lay.mask) continue;
    for (std::size_t p = 0; p < g; ++p) {
      buf(static_cast<Eigen::Index>(p)) = data[base + lay.offsets[p]];
    }
    out.noalias() = gate * buf;
    for (std::size_t p = 0; p < g; ++p) {
      data[base + lay.offsets[p]] = out(static_cast<Eigen::Index>(p));
    }
  }
}

void check_gate(const CMatrix& gate, std::size_t k) {
  const auto g = static_cast<Eigen::Index>(std::size_t{1} << k);
  if (gate.rows() != g || gate.cols() != g) {
    throw DimensionMismatch("gate shape does not match " + std::to_string(k) +
                            " target qubits");
  }
}

}  // namespace

void apply_on_qubits(CVector& state, int n_qubits, const CMatrix& gate,
                     const std::vector<int>& targets) {
  if (static_cast<std::size_t>(state.size()) != dim_of(n_qubits)) {
    throw DimensionMismatch("apply_on_qubits: state dimension mismatch");
  }
  check_gate(gate, targets.size());
  const auto lay = layout_for(n_qubits, targets);
  apply_raw(state.data(), dim_of(n_qubits), gate, lay);
}

void apply_on_qubits(CMatrix& rho, int n_qubits, const CMatrix& gate,
                     const std::vector<int>& targets) {
  const auto d = static_cast<Eigen::Index>(dim_of(n_qubits));
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionMismatch("apply_on_qubits: matrix dimension mismatch");
  }
  check_gate(gate, targets.size());
  const auto lay = layout_for(n_qubits, targets);
  const auto g = static_cast<Eigen::Index>(lay.offsets.size());
  const CMatrix gate_adj = gate.adjoint();
  CMatrix rows(g, d);
  CMatrix rows_out(g, d);
  CMatrix cols(d, g);
  CMatrix cols_out(d, g);
  for (std::uint64_t base = 0; base < static_cast<std::uint64_t>(d); ++base) {
    if (base & lay.mask) continue;
    for (Eigen::Index p = 0; p < g; ++p) {
      rows.row(p) = rho.row(static_cast<Eigen::Index>(base + lay.offsets[static_cast<std::size_t>(p)]));
    }
    rows_out.noalias() = gate * rows;
    for (Eigen::Index p = 0; p < g; ++p) {
      rho.row(static_cast<Eigen::Index>(base + lay.offsets[static_cast<std::size_t>(p)])) = rows_out.row(p);
    }
  }
  for (std::uint64_t base = 0; base < static_cast<std::uint64_t>(d); ++base) {
    if (base & lay.mask) continue;
    for (Eigen::Index p = 0; p < g; ++p) {
      cols.col(p) = rho.col(static_cast<Eigen::Index>(base + lay.offsets[static_cast<std::size_t>(p)]));
    }
    cols_out.noalias() = cols * gate_adj;
    for (Eigen::Index p = 0; p < g; ++p) {
      rho.col(static_cast<Eigen::Index>(base + lay.offsets[static_cast<std::size_t>(p)])) = cols_out.col(p);
    }
  }
}

namespace {

std::vector<std::uint64_t> permutation_map(int n_qubits,
                                           const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != n_qubits) {
    throw DimensionMismatch("permute_qubits: order has wrong length");
  }
  std::set<int> seen(order.begin(), order.end());
  if (static_cast<int>(seen.size()) != n_qubits || *seen.begin() != 0 ||
      *seen.rbegin() != n_qubits - 1) {
    throw std::invalid_argument("permute_qubits: order is not a permutation");
  }
  const std::uint64_t d = dim_of(n_qubits);
  std::vector<std::uint64_t> src(d);
  for (std::uint64_t out = 0; out < d; ++out) {
    std::uint64_t in = 0;
    for (int j = 0; j < n_qubits; ++j) {
      if ((out >> (n_qubits - 1 - j)) & 1U) {
        in |= std::uint64_t{1} << (n_qubits - 1 - order[static_cast<std::size_t>(j)]);
      }
    }
    src[out] = in;
  }
  return src;
}

}  // namespace

CVector permute_qubits(const CVector& state, int n_qubits,
                       const std::vector<int>& order) {
  const auto src = permutation_map(n_qubits, order);
  if (static_cast<std::size_t>(state.size()) != src.size()) {
    throw DimensionMismatch("permute_qubits: state dimension mismatch");
  }
  CVector out(state.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) =
        state(static_cast<Eigen::Index>(src[i]));
  }
  return out;
}

CMatrix permute_qubits(const CMatrix& rho, int n_qubits,
                       const std::vector<int>& order) {
  const auto src = permutation_map(n_qubits, order);
  if (static_cast<std::size_t>(rho.rows()) != src.size() ||
      rho.rows() != rho.cols()) {
    throw DimensionMismatch("permute_qubits: matrix dimension mismatch");
  }
  CMatrix out(rho.rows(), rho.cols());
  for (std::size_t j = 0; j < src.size(); ++j) {
    for (std::size_t i = 0; i < src.size(); ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rho(static_cast<Eigen::Index>(src[i]),
              static_cast<Eigen::Index>(src[j]));
    }
  }
  return out;
}

std::uint64_t extract_bits(std::uint64_t index, int n_qubits,
                           const std::vector<int>& targets) {
  std::uint64_t v = 0;
  for (int q : targets) {
    v = (v << 1) | ((index >> (n_qubits - 1 - q)) & 1U);
  }
  return v;
}

double pattern_probability(const CVector& state, int n_qubits,
                           const std::vector<int>& targets,
                           std::uint64_t pattern) {
  if (static_cast<std::size_t>(state.size()) != dim_of(n_qubits)) {
    throw DimensionMismatch("pattern_probability: dimension mismatch");
  }
  layout_for(n_qubits, targets);
  double p = 0.0;
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    if (extract_bits(static_cast<std::uint64_t>(i), n_qubits, targets) ==
        pattern) {
      p += std::norm(state(i));
    }
  }
  return p;
}

void project_pattern(CVector& state, int n_qubits,
                     const std::vector<int>& targets, std::uint64_t pattern) {
  if (static_cast<std::size_t>(state.size()) != dim_of(n_qubits)) {
    throw DimensionMismatch("project_pattern: dimension mismatch");
  }
  layout_for(n_qubits, targets);
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    if (extract_bits(static_cast<std::uint64_t>(i), n_qubits, targets) !=
        pattern) {
      state(i) = 0.0;
    }
  }
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix hadamard() {
  CMatrix m(2, 2);
  m << 1, 1, 1, -1;
  return m * M_SQRT1_2;
}

}  // namespace chfs
