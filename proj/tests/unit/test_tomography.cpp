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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chfs/core/errors.hpp"
#include "chfs/core/gates.hpp"
#include "chfs/core/haar.hpp"
#include "chfs/core/linalg.hpp"
#include "chfs/oracle/chfs_instance.hpp"
#include "chfs/tomography/tomography.hpp"

using namespace chfs;

namespace {

UnitaryBlackBox box_of(const UnitaryMatrix& u) {
  return [m = u.matrix()](const CVector& v) -> CVector { return m * v; };
}

// Diamond distance of two one-qubit unitary channels by brute force over a
// Bloch-sphere grid of pure inputs (an ancilla does not help for unitaries).
double diamond_by_grid(const UnitaryMatrix& u, const UnitaryMatrix& v) {
  double best = 0.0;
  const int steps = 400;
  for (int i = 0; i <= steps; ++i) {
    const double th = std::numbers::pi * i / steps;
    for (int j = 0; j < 2 * steps; ++j) {
      const double ph = std::numbers::pi * j / steps;
      CVector psi(2);
      psi << std::cos(th / 2), std::polar(std::sin(th / 2), ph);
      const CVector a = u.matrix() * psi, b = v.matrix() * psi;
      const CMatrix diff = a * a.adjoint() - b * b.adjoint();
      best = std::max(best, trace_norm(diff));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("exact reconstruction of the identity") {
  Rng rng(1, 0);
  const auto id = UnitaryMatrix::identity(2);
  const auto r = reconstruct_unitary(box_of(id), 4, 0.1, 0.1, NoiseMode::Exact, rng);
  CHECK((r.reconstructed.matrix() - id.matrix()).norm() < 1e-12);
  CHECK(r.diamond_bound < 1e-7);
  CHECK(r.queries_used == 4);
}

TEST_CASE("exact reconstruction of an oracle reflection") {
  Rng rng(2, 0);
  ChfsInstance inst(3, LengthFunction::identity());
  const auto s = inst.swap_unitary(BitString::parse("101"));
  const auto r = reconstruct_unitary(box_of(s), s.dim(), 0.05, 0.01, NoiseMode::Exact, rng);
  CHECK(operator_norm_distance(r.reconstructed, s) <= 1e-8);
  CHECK(r.queries_used == static_cast<int>(s.dim()));
  const auto& c0 = r.reconstructed.matrix().col(0);
  Eigen::Index first = 0;
  while (std::abs(c0(first)) <= 1e-10) ++first;
  CHECK(std::abs(c0(first).imag()) < 1e-12);
  CHECK(c0(first).real() > 0);
}

TEST_CASE("exact reconstruction reproduces the channel on random inputs") {
  Rng rng(4, 0);
  const auto u = haar_unitary(3, rng);
  const UnitaryMatrix phased(u.matrix() * std::polar(1.0, 0.7));
  const auto r = reconstruct_unitary(box_of(phased), 8, 0.1, 0.1, NoiseMode::Exact, rng);
  for (int i = 0; i < 100; ++i) {
    const auto psi = haar_state(3, rng);
    CHECK(trace_distance(apply_unitary(r.reconstructed, psi), apply_unitary(u, psi)) < 1e-8);
  }
}

TEST_CASE("perturbed reconstruction stays within its declared bound") {
  Rng rng(5, 0);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + i % 5;
    const auto u = haar_unitary(n, rng);
    const double eps = 0.01 + 0.98 * rng.uniform();
    const auto r = reconstruct_unitary(box_of(u), u.dim(), eps, 0.1, NoiseMode::Perturbed, rng);
    CHECK(r.diamond_bound <= eps + 1e-12);
    CHECK(diamond_distance_bound(u, r.reconstructed) <= eps + 1e-9);
    CHECK(operator_norm_distance(u, r.reconstructed) ==
          doctest::Approx(eps / 4).epsilon(1e-6));
  }
  const auto u = haar_unitary(2, rng);
  const auto r = reconstruct_unitary(box_of(u), 4, 0.1, 0.1, NoiseMode::Perturbed, rng);
  CHECK(r.diamond_bound <= 0.1);
}

TEST_CASE("reconstruction rejects bad inputs") {
  Rng rng(6, 0);
  const UnitaryBlackBox scaled = [](const CVector& v) -> CVector { return 1.1 * v; };
  CHECK_THROWS_AS(reconstruct_unitary(scaled, 2, 0.1, 0.1, NoiseMode::Exact, rng),
                  InvariantViolation);
  const auto id = UnitaryMatrix::identity(7);
  CHECK_THROWS(reconstruct_unitary(box_of(id), 128, 0.1, 0.1, NoiseMode::Exact, rng));
  CHECK_THROWS(reconstruct_unitary(box_of(UnitaryMatrix::identity(1)), 2, 0.0, 0.1,
                                   NoiseMode::Exact, rng));
  CHECK_THROWS(reconstruct_unitary(box_of(UnitaryMatrix::identity(1)), 3, 0.1, 0.1,
                                   NoiseMode::Exact, rng));
}

TEST_CASE("diamond distance bound") {
  Rng rng(7, 0);
  const auto u = haar_unitary(2, rng);
  CHECK(diamond_distance_bound(u, u) < 1e-7);
  CHECK(diamond_distance_bound(u, UnitaryMatrix(u.matrix() * std::polar(1.0, 2.0))) < 1e-7);

  const auto id = UnitaryMatrix::identity(1);
  const UnitaryMatrix z(pauli_z());
  CHECK(unitary_diamond_distance(id, z) == doctest::Approx(2.0));
  CHECK(diamond_by_grid(id, z) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(diamond_distance_bound(id, z) == doctest::Approx(2.0 * std::sqrt(2.0)));

  for (int i = 0; i < 20; ++i) {
    const auto a = haar_unitary(1, rng), b = haar_unitary(1, rng);
    const double grid = diamond_by_grid(a, b);
    CHECK(unitary_diamond_distance(a, b) == doctest::Approx(grid).epsilon(1e-3));
    CHECK(diamond_distance_bound(a, b) >= grid - 1e-9);
  }
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + i % 3;
    const auto a = haar_unitary(n, rng), b = haar_unitary(n, rng);
    CHECK(diamond_distance_bound(a, b) >= unitary_diamond_distance(a, b) - 1e-12);
    // Any pure input gives a lower bound on the exact value.
    const auto psi = haar_state(n, rng);
    const double lower = 2.0 * trace_distance(apply_unitary(a, psi), apply_unitary(b, psi));
    CHECK(lower <= unitary_diamond_distance(a, b) + 1e-9);
  }
}
