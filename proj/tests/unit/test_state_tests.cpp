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

#include "chfs/core/errors.hpp"
#include "chfs/core/haar.hpp"
#include "chfs/core/linalg.hpp"
#include "chfs/core/stats.hpp"
#include "chfs/statetests/state_tests.hpp"
#include "support/oracles.hpp"

using namespace chfs;
namespace ref = chfs::testing;

TEST_CASE("swap test probability") {
  const auto z = PureState::zero(1).density();
  const auto o = PureState::basis(1, 1).density();
  const auto mixed = DensityMatrix::maximally_mixed(1);
  CHECK(swap_test_prob(z, z) == doctest::Approx(1.0));
  CHECK(swap_test_prob(z, o) == doctest::Approx(0.5));
  CHECK(swap_test_prob(mixed, mixed) == doctest::Approx(0.75));
  CHECK_THROWS_AS(swap_test_prob(z, PureState::zero(2).density()), DimensionMismatch);

  Rng rng(1, 0);
  for (int i = 0; i < 50; ++i) {
    const int n = 1 + i % 3;
    const auto a = random_density(n, 1 + i % (1 << n), rng);
    const auto b = random_density(n, 1 + (i + 1) % (1 << n), rng);
    CHECK(swap_test_prob(a, b) ==
          doctest::Approx(ref::swap_test_circuit(a.matrix(), b.matrix())).epsilon(1e-10));
  }
}

TEST_CASE("swap test sampling") {
  Rng rng(2, 0);
  const auto z = PureState::zero(2).density();
  for (int i = 0; i < 100; ++i) CHECK(swap_test_sample(z, z, rng).passed);

  const auto o = PureState::basis(2, 3).density();
  int pass = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) pass += swap_test_sample(z, o, rng).passed;
  CHECK(std::abs(pass / double(trials) - 0.5) <= 3 * bernoulli_se(0.5, trials));

  Rng r1(5, 5), r2(5, 5);
  for (int i = 0; i < 20; ++i) {
    CHECK(swap_test_sample(z, o, r1).passed == swap_test_sample(z, o, r2).passed);
  }
  for (int k = 0; k < 5; ++k) {
    const auto a = random_density(2, 2, rng);
    const auto b = random_density(2, 3, rng);
    const double p = swap_test_prob(a, b);
    int hits = 0;
    for (int i = 0; i < trials; ++i) hits += swap_test_sample(a, b, rng).passed;
    CHECK(std::abs(hits / double(trials) - p) <= 3 * bernoulli_se(p, trials));
  }
}

TEST_CASE("purity battery") {
  Rng rng(3, 0);
  const PurityBatteryConfig cfg{100, 10};
  const auto pure = PureState::zero(2).density();
  const auto r = purity_battery(pure, cfg, rng);
  CHECK(r.fail_count == 0);
  CHECK_FALSE(r.flagged_impure);

  // Maximally mixed qubit: each test fails with probability (1 - 1/2)/2.
  RunningStats st;
  for (int b = 0; b < 200; ++b) {
    st.add(purity_battery(DensityMatrix::maximally_mixed(1), cfg, rng).fail_count / 100.0);
  }
  CHECK(std::abs(st.mean() - 0.25) <= 3 * st.standard_error());

  CHECK_THROWS(PurityBatteryConfig({10, 11}).validate());
  CHECK_THROWS(PurityBatteryConfig({0, 0}).validate());
  const auto sec = PurityBatteryConfig::from_security(8, 4);
  CHECK(sec.repetitions == 512);
  CHECK(sec.fail_threshold == 32);
}

TEST_CASE("battery flag frequency matches the exact binomial tail") {
  Rng rng(4, 0);
  const PurityBatteryConfig cfg{64, 8};
  CMatrix m = CMatrix::Zero(2, 2);
  // Purity 0.75 gives fail probability 1/8 per test.
  const double a = 0.5 + std::sqrt(0.125);
  m(0, 0) = a;
  m(1, 1) = 1 - a;
  const DensityMatrix rho(m);
  CHECK(purity(rho) == doctest::Approx(0.75));
  const double exact = battery_flag_probability(0.75, cfg);
  int flagged = 0;
  const int trials = 4000;
  for (int i = 0; i < trials; ++i) flagged += purity_battery(rho, cfg, rng).flagged_impure;
  CHECK(std::abs(flagged / double(trials) - exact) <= 3 * bernoulli_se(exact, trials));
  CHECK(battery_flag_probability(1.0, cfg) == 0.0);
  CHECK(battery_flag_probability(0.5, PurityBatteryConfig{10, 0}) == 1.0);
}

TEST_CASE("lubkin expectation") {
  CHECK(lubkin_expectation(4, 4) == doctest::Approx(8.0 / 17.0));
  CHECK(lubkin_expectation(1, 16) == doctest::Approx(1.0));
  CHECK(lubkin_expectation(2, 2) == doctest::Approx(0.8));
  CHECK_THROWS(lubkin_expectation(0, 2));
  CHECK(lubkin_product_test_mean(SubsystemSpec::qubits(4)) ==
        doctest::Approx(162.0 / 272.0).epsilon(1e-12));
  CHECK(lubkin_product_test_mean(SubsystemSpec::qubits(2)) ==
        doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("product test probability") {
  Rng rng(6, 0);
  const auto prod = tensor_product(tensor_product(haar_state(1, rng), haar_state(1, rng)),
                                   haar_state(1, rng));
  CHECK(product_test_prob(prod.density(), SubsystemSpec::qubits(3)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(product_test_prob(prod, SubsystemSpec::qubits(3)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const auto rho = random_density(2, 3, rng);
  CHECK(product_test_prob(rho, SubsystemSpec({4})) ==
        doctest::Approx((1 + purity(rho)) / 2).epsilon(1e-12));

  // Entangled or mixed inputs fall strictly below 1; all values stay in
  // [2^-m, 1].
  for (int i = 0; i < 100; ++i) {
    const auto s = random_density(3, 1 + i % 8, rng);
    const double p = product_test_prob(s, SubsystemSpec::qubits(3));
    CHECK(p >= 1.0 / 8 - 1e-12);
    CHECK(p <= 1.0 + 1e-12);
    CHECK(p < 1.0 - 1e-6);
    const auto psi = haar_state(3, rng);
    CHECK(product_test_prob(psi, SubsystemSpec::qubits(3)) ==
          doctest::Approx(product_test_prob(psi.density(), SubsystemSpec::qubits(3)))
              .epsilon(1e-10));
  }
  CHECK(product_test_prob(DensityMatrix::maximally_mixed(3), SubsystemSpec::qubits(3)) ==
        doctest::Approx(std::pow(0.75, 3)));
  CHECK_THROWS(product_test_prob(rho, SubsystemSpec::qubits(3)));
  CHECK_THROWS(subset_purities(PureState::zero(1), SubsystemSpec::qubits(17)));
}

TEST_CASE("joint outcome distribution equals direct two-copy simulation") {
  Rng rng(7, 0);
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + i % 3;
    const auto rho = random_density(n, 1 + i % 3, rng);
    const auto got = product_test_distribution(rho, SubsystemSpec::qubits(n));
    const auto want = ref::two_copy_swap_distribution(rho.matrix(), n);
    REQUIRE(got.size() == want.size());
    double sum = 0.0;
    for (std::size_t b = 0; b < got.size(); ++b) {
      CHECK(std::abs(got[b] - want[b]) < 1e-8);
      sum += got[b];
    }
    CHECK(sum == doctest::Approx(1.0));
    CHECK(got[0] == doctest::Approx(product_test_prob(rho, SubsystemSpec::qubits(n))));
  }
  // Mixture: the quadratic formula, not a convex combination.
  const auto r1 = random_density(2, 1, rng).matrix();
  const auto r2 = random_density(2, 2, rng).matrix();
  const DensityMatrix mix(0.3 * r1 + 0.7 * r2);
  CHECK(product_test_distribution(mix, SubsystemSpec::qubits(2))[0] ==
        doctest::Approx(ref::two_copy_swap_distribution(mix.matrix(), 2)[0]).epsilon(1e-10));
}

TEST_CASE("product test sampling") {
  Rng rng(18, 0);
  const auto prod = tensor_product(haar_state(1, rng), haar_state(1, rng)).density();
  for (int i = 0; i < 200; ++i) {
    CHECK(product_test_sample(prod, SubsystemSpec::qubits(2), rng).outcome.passed);
  }
  const auto psi = haar_state(4, rng).density();
  const auto spec = SubsystemSpec::qubits(4);
  const double p = product_test_prob(psi, spec);
  int hits = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) hits += product_test_sample(psi, spec, rng).outcome.passed;
  CHECK(std::abs(hits / double(trials) - p) <= 3 * bernoulli_se(p, trials));
}

TEST_CASE("haar product test average and bound") {
  Rng rng(9, 0);
  const auto spec = SubsystemSpec::qubits(4);
  RunningStats st;
  for (int i = 0; i < 4000; ++i) st.add(product_test_prob(haar_state(4, rng), spec));
  CHECK(std::abs(st.mean() - 162.0 / 272.0) <= 3 * st.standard_error());
  CHECK(st.mean() <= 2 * std::pow(0.75, 4));
}

TEST_CASE("Lubkin formula across bipartitions") {
  Rng rng(10, 0);
  for (int n = 2; n <= 5; ++n) {
    const auto spec = SubsystemSpec::qubits(n);
    for (std::uint64_t mask = 1; mask + 1 < (1u << n); ++mask) {
      std::vector<int> keep;
      for (int q = 0; q < n; ++q)
        if ((mask >> (n - 1 - q)) & 1U) keep.push_back(q);
      RunningStats st;
      for (int i = 0; i < 1500; ++i) st.add(reduced_purity(haar_state(n, rng), spec, keep));
      const double ds = std::pow(2.0, keep.size());
      const double want = lubkin_expectation(ds, std::pow(2.0, n) / ds);
      CHECK(std::abs(st.mean() - want) <= 4 * st.standard_error());
    }
  }
}
