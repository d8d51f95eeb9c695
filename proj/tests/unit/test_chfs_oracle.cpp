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
#include <thread>

#include "chfs/core/errors.hpp"
#include "chfs/core/haar.hpp"
#include "chfs/core/linalg.hpp"
#include "chfs/core/stats.hpp"
#include "chfs/oracle/chfs_instance.hpp"
#include "chfs/oracle/queries.hpp"
#include "support/oracles.hpp"

using namespace chfs;
namespace ref = chfs::testing;

namespace {

BitString bs(const char* s) { return BitString::parse(s); }

CVector with_one_appended(const CVector& phi) {
  CVector v = CVector::Zero(2 * phi.size());
  for (Eigen::Index i = 0; i < phi.size(); ++i) v(2 * i + 1) = phi(i);
  return v;
}

}  // namespace

TEST_CASE("bit strings") {
  const auto b = bs("1011");
  CHECK(b.size() == 4);
  CHECK(b.to_uint() == 11);
  CHECK(b.to_string() == "1011");
  CHECK(BitString::from_uint(5, 4).to_string() == "0101");
  CHECK(bs("10").concat(bs("01")) == bs("1001"));
  CHECK_THROWS(bs("102"));
  CHECK_THROWS(BitString::from_uint(4, 2));
  CHECK(all_bitstrings(2).size() == 4);
  CHECK(all_bitstrings(3)[6] == bs("110"));
}

TEST_CASE("length functions") {
  const auto id = LengthFunction::identity();
  const auto fl = LengthFunction::floor_log();
  const auto tfl = LengthFunction::two_floor_log();
  CHECK(id(3) == 3);
  CHECK(fl(16) == 4);
  CHECK(fl(11) == 3);
  CHECK(fl(1) == 1);
  CHECK(fl(2) == 1);
  CHECK(tfl(2) == 2);
  CHECK(tfl(3) == 3);  // floor(2 log2 3) = floor(3.17)
  CHECK(tfl(4) == 4);
  CHECK(tfl(1) == 1);
  CHECK(LengthFunction::constant(2)(100) == 2);
  CHECK_THROWS(id(0));
  CHECK_THROWS(LengthFunction::constant(0));
  for (const auto& f : {id, fl, tfl, LengthFunction::constant(5)}) {
    CHECK(LengthFunction::parse(f.to_string()) == f);
    int prev = 0;
    for (int n = 1; n < 300; ++n) {
      CHECK(f(n) >= 1);
      CHECK(f(n) >= prev);
      prev = f(n);
    }
  }
  for (int n = 1; n < 300; ++n) {
    CHECK(tfl(n) == std::max(1, static_cast<int>(std::floor(2 * std::log2(n) + 1e-12))));
  }
  CHECK_THROWS(LengthFunction::parse("cubic"));
  CHECK_THROWS(LengthFunction::parse("constant:x"));
}

TEST_CASE("oracle states are deterministic, memoized and sized by the length function") {
  ChfsInstance a(99, LengthFunction::identity());
  ChfsInstance b(99, LengthFunction::identity());
  const auto x = bs("101");
  CHECK(a.oracle_state(x).n_qubits() == 3);
  CHECK(a.oracle_state(x).amplitudes() == b.oracle_state(x).amplitudes());
  CHECK(a.oracle_state(x).amplitudes() == a.oracle_state(x).amplitudes());
  CHECK(a.cached_states() == 1);
  CHECK(a.oracle_state(bs("100")).amplitudes() != a.oracle_state(x).amplitudes());
  CHECK(a.oracle_state(bs("0101")).n_qubits() == 4);
  // Strings that agree as integers but differ in length are different inputs.
  CHECK(std::abs(a.oracle_state(bs("01")).amplitudes()(0) -
                 a.oracle_state(bs("1")).amplitudes()(0)) > 0);
  CHECK_THROWS_AS(a.oracle_state(BitString()), std::invalid_argument);
  CHECK_THROWS_AS(a.oracle_state(BitString::from_uint(0, 13)), DimensionCapExceeded);
  ChfsInstance c(100, LengthFunction::identity());
  CHECK(c.oracle_state(x).amplitudes() != a.oracle_state(x).amplitudes());
}

TEST_CASE("concurrent lookups return the same state") {
  ChfsInstance inst(5, LengthFunction::identity());
  std::vector<CVector> seen(8);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      seen[static_cast<std::size_t>(t)] = inst.oracle_state(bs("1100")).amplitudes();
    });
  }
  for (auto& th : threads) th.join();
  for (const auto& v : seen) CHECK(v == seen[0]);
}

TEST_CASE("descriptor round trip") {
  ChfsInstance a(1234567890123ULL, LengthFunction::two_floor_log());
  const auto j = a.descriptor();
  const auto b = ChfsInstance::from_descriptor(j);
  CHECK(b->master_seed() == a.master_seed());
  CHECK(b->length_fn() == a.length_fn());
  CHECK(b->oracle_state(bs("11")).amplitudes() == a.oracle_state(bs("11")).amplitudes());
}

TEST_CASE("oracle states follow Haar statistics across seeds and are independent") {
  RunningStats m1, m2, cross, sa, sb;
  const double d = 4.0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    ChfsInstance inst(s, LengthFunction::identity());
    const double a = std::norm(inst.oracle_state(bs("01")).amplitudes()(0));
    const double b = std::norm(inst.oracle_state(bs("10")).amplitudes()(0));
    m1.add(a);
    m2.add(a * a);
    sa.add(a);
    sb.add(b);
    cross.add((a - 1.0 / d) * (b - 1.0 / d));
  }
  CHECK(std::abs(m1.mean() - ref::haar_overlap_moment(d, 1)) <= 3 * m1.standard_error());
  CHECK(std::abs(m2.mean() - ref::haar_overlap_moment(d, 2)) <= 3 * m2.standard_error());
  CHECK(std::abs(cross.mean()) <= 3 * cross.standard_error());
}

TEST_CASE("swap unitary is the reflection exchanging |0> and |phi>|1>") {
  ChfsInstance inst(7, LengthFunction::identity());
  const auto x = bs("10");
  const auto s = inst.swap_unitary(x);
  CHECK(s.n_qubits() == 3);
  const CVector phi1 = with_one_appended(inst.oracle_state(x).amplitudes());
  const CVector zero = PureState::zero(3).amplitudes();
  CHECK((s.matrix() * zero - phi1).norm() < 1e-12);
  CHECK((s.matrix() * phi1 - zero).norm() < 1e-12);
  CHECK((s.matrix() * s.matrix() - CMatrix::Identity(8, 8)).norm() < 1e-8);
  CHECK((s.matrix() - s.matrix().adjoint()).norm() < 1e-12);

  Rng rng(3, 0);
  CMatrix basis(8, 2);
  basis.col(0) = zero;
  basis.col(1) = phi1;
  for (int i = 0; i < 50; ++i) {
    const CVector v = haar_state(3, rng).amplitudes();
    const CVector inside = basis * (basis.adjoint() * v);
    const CVector outside = v - inside;
    CHECK((s.matrix() * outside - outside).norm() < 1e-12);
    // On the span the action is the 2x2 swap of the two basis vectors.
    const CVector swapped = basis.col(0) * basis.col(1).dot(v) +
                            basis.col(1) * basis.col(0).dot(v);
    CHECK((s.matrix() * inside - swapped).norm() < 1e-12);
  }
}

TEST_CASE("isometry query") {
  ChfsInstance inst(11, LengthFunction::identity());
  const auto x = bs("10"), xp = bs("01");
  const auto phi = inst.oracle_state(x).amplitudes();
  const auto phip = inst.oracle_state(xp).amplitudes();

  const auto in = PureState::basis(2, 2);
  const auto out = isometry_query(inst, in, 2);
  CHECK(out.n_qubits() == 4);
  CHECK((out.amplitudes() - ref::kron(in.amplitudes(), phi)).norm() < 1e-12);

  // Workspace register Z stays after Y.
  const auto with_z = tensor_product(in, PureState::basis(1, 1));
  const auto out_z = isometry_query(inst, with_z, 2);
  CHECK((out_z.amplitudes() -
         ref::kron(ref::kron(in.amplitudes(), phi), PureState::basis(1, 1).amplitudes()))
            .norm() < 1e-12);

  CVector sup = CVector::Zero(4);
  sup(2) = M_SQRT1_2;
  sup(1) = M_SQRT1_2;
  const PureState s(sup);
  const CVector coherent =
      M_SQRT1_2 * (ref::kron(PureState::basis(2, 2).amplitudes(), phi) +
                   ref::kron(PureState::basis(2, 1).amplitudes(), phip));
  CHECK((isometry_query(inst, s, 2).amplitudes() - coherent).norm() < 1e-12);
  CHECK((isometry_query(inst, s.density(), 2, Access::Quantum).matrix() -
         coherent * coherent.adjoint())
            .norm() < 1e-12);

  const CVector a = ref::kron(PureState::basis(2, 2).amplitudes(), phi);
  const CVector b = ref::kron(PureState::basis(2, 1).amplitudes(), phip);
  const CMatrix mix = 0.5 * (a * a.adjoint() + b * b.adjoint());
  CHECK((isometry_query(inst, s.density(), 2, Access::Classical).matrix() - mix).norm() <
        1e-12);
  CHECK_THROWS_AS(isometry_query(inst, s, 3), DimensionMismatch);
}

TEST_CASE("unitarized query") {
  ChfsInstance inst(13, LengthFunction::identity());
  const auto x = bs("11");
  const CVector phi1 = with_one_appended(inst.oracle_state(x).amplitudes());
  // X = |11>, Y = |000>.
  const auto in = PureState::basis(5, 0b11000);
  const auto out = unitarized_query(inst, in, 2);
  CHECK((out.amplitudes() - ref::kron(PureState::basis(2, 3).amplitudes(), phi1)).norm() <
        1e-12);

  Rng rng(17, 0);
  const auto full = controlled_swap_sum(inst, 2);
  CHECK(full.n_qubits() == 5);
  for (int i = 0; i < 10; ++i) {
    const auto psi = haar_state(5, rng);
    CHECK((unitarized_query(inst, psi, 2).amplitudes() - full.matrix() * psi.amplitudes())
              .norm() < 1e-12);
    const auto rho = random_density(5, 3, rng);
    const CMatrix want = full.matrix() * rho.matrix() * full.matrix().adjoint();
    CHECK((unitarized_query(inst, rho, 2, Access::Quantum).matrix() - want).norm() < 1e-10);
    // Classical access equals measuring X first, then querying.
    const CMatrix premeasured = dephase_leading(rho.matrix(), 5, 2);
    const CMatrix want_c = full.matrix() * premeasured * full.matrix().adjoint();
    CHECK((unitarized_query(inst, rho, 2, Access::Classical).matrix() - want_c).norm() <
          1e-10);
    CHECK((unitarized_query(inst, DensityMatrix::trusted(premeasured), 2, Access::Quantum)
               .matrix() -
           want_c)
              .norm() < 1e-10);
  }
  // Controlled sum is block diagonal in X.
  const auto& m = full.matrix();
  for (Eigen::Index i = 0; i < 32; ++i)
    for (Eigen::Index j = 0; j < 32; ++j)
      if ((i >> 3) != (j >> 3)) CHECK(std::abs(m(i, j)) == 0.0);
  CHECK_THROWS(controlled_swap_sum(inst, 7));
  CHECK_THROWS_AS(unitarized_query(inst, PureState::zero(3), 2), DimensionMismatch);
}

TEST_CASE("a query on an independent Haar state barely moves it") {
  ChfsInstance inst(19, LengthFunction::identity());
  Rng rng(23, 0);
  const int ell = 3;
  RunningStats st;
  for (int i = 0; i < 4000; ++i) {
    const auto x = BitString::from_uint(rng.uniform_int(8), 3);
    const auto rho = haar_state(ell + 1, rng);
    CVector v = rho.amplitudes();
    inst.apply_swap(x, v.data(), 1);
    const double td = trace_distance(rho, PureState::normalized(v));
    st.add(td * td);
  }
  CHECK(st.mean() <= 2.0 / std::pow(2.0, ell) + 3 * st.standard_error());
}

TEST_CASE("universal query") {
  ChfsInstance inst(29, LengthFunction::identity());
  // Lambda (2 qubits) = |2>, X (3 qubits) = |101>: oracle acts on "10".
  const auto in = PureState::basis(5, (2u << 3) | 0b101);
  const auto br = universal_query(inst, in.density(), 2, 3);
  REQUIRE(br.size() == 1);
  CHECK(br[0].lambda == 2);
  CHECK(br[0].probability == doctest::Approx(1.0));
  const CVector want =
      ref::kron(in.amplitudes(), inst.oracle_state(bs("10")).amplitudes());
  CHECK((br[0].state.matrix() - want * want.adjoint()).norm() < 1e-12);

  // Superposed Lambda gives a convex mixture with the measured weights.
  CVector sup = CVector::Zero(32);
  sup((1u << 3) | 0b100) = std::sqrt(0.3);
  sup((3u << 3) | 0b011) = std::sqrt(0.7);
  const auto branches = universal_query(inst, PureState(sup).density(), 2, 3);
  REQUIRE(branches.size() == 2);
  CHECK(branches[0].lambda == 1);
  CHECK(branches[0].probability == doctest::Approx(0.3));
  CHECK(branches[1].lambda == 3);
  CHECK(branches[1].probability == doctest::Approx(0.7));
  double total = 0.0;
  for (const auto& b : branches) total += b.probability * b.state.matrix().trace().real();
  CHECK(total == doctest::Approx(1.0));
  CHECK(branches[0].state.n_qubits() == 6);
  CHECK(branches[1].state.n_qubits() == 8);

  const auto bad = PureState::basis(5, 0b00101);
  CHECK_THROWS_AS(universal_query(inst, bad.density(), 2, 3), std::invalid_argument);
}
