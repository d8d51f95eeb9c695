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
#include <memory>

#include "chfs/core/errors.hpp"
#include "chfs/core/haar.hpp"
#include "chfs/core/linalg.hpp"
#include "chfs/core/stats.hpp"
#include "chfs/primitives/game.hpp"
#include "chfs/primitives/prfsg.hpp"
#include "chfs/primitives/prsg.hpp"
#include "chfs/primitives/pru.hpp"
#include "chfs/statetests/state_tests.hpp"
#include "support/oracles.hpp"

using namespace chfs;
namespace ref = chfs::testing;

namespace {

BitString bs(const char* s) { return BitString::parse(s); }

DensityMatrix pure_dm(const PureState& p) {
  return DensityMatrix::trusted(p.amplitudes() * p.amplitudes().adjoint());
}

double fidelity_up_to_phase(const CVector& a, const CVector& b) {
  return std::norm(a.dot(b));
}

}  // namespace

TEST_CASE("prfsg_gen is the oracle state of k || x with l(|k| + |x|) qubits") {
  auto oracle = std::make_shared<const ChfsInstance>(11, LengthFunction::floor_log());
  PrfsgParams p{8, 8, oracle};
  const auto k = bs("10110010");
  const auto x = bs("00011110");
  const auto s1 = prfsg_gen(p, k, x);
  CHECK(s1.n_qubits() == 4);
  CHECK((s1.amplitudes() - prfsg_gen(p, k, x).amplitudes()).norm() == 0.0);
  CHECK((s1.amplitudes() - oracle->oracle_state(k.concat(x)).amplitudes()).norm() == 0.0);
  CHECK(trace_distance(s1, prfsg_gen(p, k, bs("00011111"))) > 0.1);
  CHECK_THROWS_AS(prfsg_gen(p, bs("101"), x), DimensionMismatch);
  PrfsgParams too_long{20, 8, oracle};
  CHECK_THROWS_AS(too_long.validate(), DimensionCapExceeded);
}

TEST_CASE("distinct prfsg inputs give uncorrelated Haar draws") {
  auto oracle = std::make_shared<const ChfsInstance>(5, LengthFunction::identity());
  PrfsgParams p{2, 1, oracle};
  RunningStats overlap;
  for (std::uint64_t k = 0; k < 4; ++k) {
    for (std::uint64_t j = k + 1; j < 4; ++j) {
      for (std::uint64_t x = 0; x < 2; ++x) {
        const auto a = prfsg_gen(p, BitString::from_uint(k, 2), BitString::from_uint(x, 1));
        const auto b = prfsg_gen(p, BitString::from_uint(j, 2), BitString::from_uint(x, 1));
        overlap.add(std::norm(a.amplitudes().dot(b.amplitudes())));
      }
    }
  }
  CHECK(overlap.max() < 0.5);
  CHECK(overlap.mean() < 0.125 + 4 * std::sqrt(0.125 / 12.0));
}

TEST_CASE("pru_apply with identity layers leaves the state unchanged") {
  const int n = 3;
  std::vector<std::vector<PruStep>> circuits(2);
  for (auto& c : circuits) c.push_back(PruStep::unitary(Gate::matrix({0, 1, 2}, CMatrix::Identity(8, 8))));
  PruCandidate c(1, n, circuits);
  ChfsInstance oracle(3, LengthFunction::identity());
  Rng rng(4, 0);
  const auto rho = random_density(n, 3, rng);
  const auto out = pru_apply(c, oracle, bs("1"), rho);
  CHECK((out.matrix() - rho.matrix()).norm() < 1e-14);
  CHECK_FALSE(c.uses_ancilla());
}

TEST_CASE("a single query on |0...0> rotates into |phi_x>|1>") {
  ChfsInstance oracle(8, LengthFunction::identity());
  const auto x = bs("101");
  std::vector<std::vector<PruStep>> circuits(2, {PruStep::fixed_query(x, 0)});
  PruCandidate c(1, 4, circuits);
  const auto out = pru_apply_pure(c, oracle, bs("0"), PureState::zero(4));
  const CVector phi = oracle.oracle_state(x).amplitudes();
  CVector expected = CVector::Zero(16);
  for (Eigen::Index i = 0; i < 8; ++i) expected(2 * i + 1) = phi(i);
  CHECK(fidelity_up_to_phase(out.amplitudes(), expected) == doctest::Approx(1.0).epsilon(1e-12));
  const auto mixed = pru_apply(c, oracle, bs("0"), pure_dm(PureState::zero(4)));
  CHECK((mixed.matrix() - expected * expected.adjoint()).norm() < 1e-12);
}

TEST_CASE("pru_apply is trace preserving and keeps pure inputs pure") {
  ChfsInstance oracle(21, LengthFunction::identity());
  LayeredPruSpec spec;
  const auto c = make_layered_pru(spec, oracle.length_fn());
  Rng rng(9, 1);
  for (std::uint64_t k = 0; k < 8; ++k) {
    const auto key = BitString::from_uint(k, 3);
    const auto psi = haar_state(5, rng);
    const auto out = pru_apply(c, oracle, key, pure_dm(psi));
    CHECK(out.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(purity(out) == doctest::Approx(1.0).epsilon(1e-12));
    const auto pure = pru_apply_pure(c, oracle, key, psi);
    CHECK((pure_dm(pure).matrix() - out.matrix()).norm() < 1e-10);
  }
  CHECK_FALSE(c.has_nonunitary_steps());
}

TEST_CASE("adaptive and depolarizing layers stay trace preserving") {
  ChfsInstance oracle(22, LengthFunction::identity());
  LayeredPruSpec spec;
  spec.n_qubits = 5;
  spec.query_lengths = {3, 2};
  spec.adaptive_last = true;
  spec.depolarize = 0.2;
  const auto c = make_layered_pru(spec, oracle.length_fn());
  CHECK(c.has_nonunitary_steps());
  Rng rng(10, 1);
  const auto rho = pure_dm(haar_state(5, rng));
  const auto out = pru_apply(c, oracle, bs("011"), rho);
  CHECK(out.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(purity(out) < 1.0 - 1e-3);
  CHECK(out.matrix().selfadjointView<Eigen::Lower>().eigenvalues().minCoeff() > -1e-12);
  CHECK_THROWS_AS(pru_apply_pure(c, oracle, bs("011"), haar_state(5, rng)), std::logic_error);
}

TEST_CASE("query shape errors are reported") {
  ChfsInstance oracle(1, LengthFunction::identity());
  std::vector<std::vector<PruStep>> circuits(2, {PruStep::fixed_query(bs("111"), 2)});
  PruCandidate c(1, 5, circuits);
  CHECK_THROWS_AS(c.validate(oracle.length_fn()), DimensionMismatch);
  CHECK_THROWS_AS(pru_apply(c, oracle, bs("0"), DensityMatrix::maximally_mixed(5)), DimensionMismatch);
  LayeredPruSpec spec;
  CHECK_THROWS_AS(pru_apply(make_layered_pru(spec, oracle.length_fn()), oracle, bs("000"),
                            DensityMatrix::maximally_mixed(4)),
                  DimensionMismatch);
}

TEST_CASE("pru candidates round trip through JSON") {
  LayeredPruSpec spec;
  spec.adaptive_last = true;
  spec.depolarize = 0.1;
  const auto c = make_layered_pru(spec, LengthFunction::identity());
  const auto back = PruCandidate::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  ChfsInstance oracle(2, LengthFunction::identity());
  const auto rho = DensityMatrix::maximally_mixed(5);
  Rng rng(1, 2);
  const auto psi = pure_dm(haar_state(5, rng));
  CHECK((pru_apply(c, oracle, bs("110"), psi).matrix() -
         pru_apply(back, oracle, bs("110"), psi).matrix()).norm() < 1e-12);
}

TEST_CASE("prsg with no queries and U_0 = I outputs |0...0>") {
  PrsgKeyCircuit kc;
  kc.unitaries = {Circuit()};
  PrsgCandidate c(1, 3, 2, {kc, kc});
  ChfsInstance oracle(1, LengthFunction::identity());
  const auto out = prsg_gen(c, oracle, bs("1"));
  CHECK(out.output.n_qubits() == 3);
  CHECK(out.pre_trace.n_qubits() == 5);
  CHECK(std::abs(out.output.matrix()(0, 0) - 1.0) < 1e-14);
  CHECK(purity(out.output) == doctest::Approx(1.0));
  CHECK(out.ancilla_fidelity == doctest::Approx(1.0));
  CHECK(out.log.empty());
}

TEST_CASE("product-form prsg: undoing the oracle-free circuit leaves phi_x1 phi_x2 |0*>") {
  ChfsInstance oracle(77, LengthFunction::two_floor_log());
  const auto c = make_product_form_prsg({});
  for (std::uint64_t k = 0; k < 8; ++k) {
    const auto key = BitString::from_uint(k, 3);
    const auto out = prsg_gen(c, oracle, key, true);
    CHECK(purity(out.output) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.pre_trace.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.quasi_pure_ok);
    REQUIRE(out.log.size() == 2);
    for (const auto& l : out.log) {
      CHECK(l.argmax.lambda == 2);
      CHECK(l.argmax.probability == doctest::Approx(1.0));
    }
    const CMatrix u = c.circuit(key).oracle_free().matrix(8);
    const CMatrix undone = u.adjoint() * out.pre_trace.matrix() * u;
    const CVector phi1 = oracle.oracle_state(out.log[0].argmax.x).amplitudes();
    const CVector phi2 = oracle.oracle_state(out.log[1].argmax.x).amplitudes();
    CVector zeros = CVector::Zero(16);
    zeros(0) = 1.0;
    const ref::Mat expected_vec = ref::kron(ref::kron(phi1, phi2), zeros);
    const ref::Mat expected = expected_vec * expected_vec.adjoint();
    CHECK(trace_distance(DensityMatrix::trusted(undone), DensityMatrix::trusted(expected)) < 1e-9);
  }
}

TEST_CASE("a genuinely random intermediate measurement makes the output impure") {
  ChfsInstance oracle(78, LengthFunction::two_floor_log());
  for (double p : {0.5, 0.2}) {
    ProductFormSpec spec;
    spec.flip_probability = p;
    const auto c = make_product_form_prsg(spec);
    const auto out = prsg_gen(c, oracle, bs("010"));
    CHECK(purity(out.output) == doctest::Approx(p * p + (1 - p) * (1 - p)).epsilon(1e-10));
    CHECK(out.quasi_pure_ok);
    CHECK(out.log[0].distribution.size() == 2);
    CHECK(out.log[0].argmax.probability == doctest::Approx(std::max(p, 1 - p)));
  }
  ProductFormSpec spec;
  spec.flip_probability = 0.5;
  const auto out = prsg_gen(make_product_form_prsg(spec), oracle, bs("010"));
  PurityBatteryConfig battery;
  CHECK(battery_flag_probability(purity(out.output), battery) > 0.99);
}

TEST_CASE("sampled trajectories follow the exact branch distribution") {
  ChfsInstance oracle(79, LengthFunction::two_floor_log());
  ProductFormSpec spec;
  spec.flip_probability = 0.3;
  const auto c = make_product_form_prsg(spec);
  const auto key = bs("001");
  const auto exact = prsg_gen(c, oracle, key);
  Rng rng(3, 3);
  const int shots = 4000;
  int hits = 0;
  for (int s = 0; s < shots; ++s) {
    const auto traj = sample_prsg_trajectory(c, oracle, key, rng);
    if (traj.outcomes[0].x == exact.log[0].argmax.x) ++hits;
  }
  const double f = static_cast<double>(hits) / shots;
  CHECK(std::abs(f - 0.7) < 3 * bernoulli_se(0.7, shots));
  Rng r2(5, 5);
  const auto direct = learn_queries(c, oracle, key, QueryLearning::DirectInspection, r2);
  const auto sampled = learn_queries(c, oracle, key, QueryLearning::ArgmaxFromBranches, r2, 200);
  REQUIRE(direct.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(direct[i].lambda == sampled[i].lambda);
    CHECK(direct[i].x == sampled[i].x);
  }
}

TEST_CASE("ancilla reset violations are reported and enforced in strict mode") {
  PrsgKeyCircuit kc;
  Circuit u0;
  u0.add(Gate::h(3));
  kc.unitaries = {u0};
  PrsgCandidate c(1, 3, 1, {kc, kc}, true, 0.99);
  ChfsInstance oracle(1, LengthFunction::identity());
  const auto out = prsg_gen(c, oracle, bs("0"));
  CHECK(out.ancilla_fidelity == doctest::Approx(0.5));
  CHECK_FALSE(out.quasi_pure_ok);
  CHECK_THROWS_AS(prsg_gen(c, oracle, bs("0"), true), InvariantViolation);
  PrsgCandidate undeclared(1, 3, 1, {kc, kc}, false, 0.99);
  CHECK_NOTHROW(prsg_gen(undeclared, oracle, bs("0"), true));
}

TEST_CASE("prsg candidates validate registers and round trip through JSON") {
  PrsgKeyCircuit bad;
  bad.unitaries = {Circuit(), Circuit()};
  bad.queries = {PrsgQuery{{0}, {0}, {1}}};
  CHECK_THROWS_AS(PrsgCandidate(1, 2, 0, {bad, bad}), std::invalid_argument);
  const auto c = make_product_form_prsg({});
  CHECK(PrsgCandidate::from_json(c.to_json()).to_json() == c.to_json());
}

TEST_CASE("distinguishing game: constant and perfect adversaries") {
  const Rng rng(1, 1);
  auto real = [](Rng&) { return 1; };
  auto ideal = [](Rng&) { return 0; };
  const auto constant = distinguishing_game([](int&, Rng&) { return true; }, real, ideal, 200, rng);
  CHECK(constant.advantage == 0.0);
  CHECK(constant.rate_real == 1.0);
  const auto perfect = distinguishing_game([](int& c, Rng&) { return c == 1; }, real, ideal, 200, rng);
  CHECK(perfect.advantage == 1.0);
  CHECK(perfect.trials == 200);
}

TEST_CASE("trivial adversary advantage concentrates at zero and ignores the worker count") {
  const Rng rng(2, 2);
  auto arm = [](Rng& r) { return r.uniform(); };
  auto coin = [](double&, Rng& r) { return r.bernoulli(0.5); };
  const auto a = distinguishing_game(coin, arm, arm, 4000, rng, 1);
  const auto b = distinguishing_game(coin, arm, arm, 4000, rng, 4);
  CHECK(a.advantage <= 3 * a.advantage_se);
  CHECK(a.rate_real == b.rate_real);
  CHECK(a.rate_ideal == b.rate_ideal);
}

TEST_CASE("challenge budget is enforced") {
  PrfsgParams p{3, 4, std::make_shared<const ChfsInstance>(1, LengthFunction::floor_log())};
  Rng rng(1, 0);
  auto ch = prfsg_real_challenge(p, 2, rng);
  ch.query(bs("0000"));
  ch.query(bs("0001"));
  CHECK_THROWS_AS(ch.query(bs("0000")), std::logic_error);
}

TEST_CASE("exact kappa = 3 prfsg game agrees with Monte Carlo") {
  PrfsgParams p{3, 4, std::make_shared<const ChfsInstance>(314, LengthFunction::floor_log())};
  REQUIRE(p.output_qubits() == 2);
  const Rng rng(27, 0);
  for (auto kind : {PrfsgAdversaryKind::ZeroQuery, PrfsgAdversaryKind::KeyGuessSingle,
                    PrfsgAdversaryKind::KeyGuessMulti, PrfsgAdversaryKind::CollisionProbe,
                    PrfsgAdversaryKind::Informed}) {
    CAPTURE(to_string(kind));
    const auto exact = prfsg_exact_game(p, kind, 16);
    const auto mc = prfsg_fixed_oracle_game(p, kind, 16, 4000, rng.child(static_cast<std::uint64_t>(kind)));
    CHECK(std::abs(mc.rate_real - exact.rate_real) <= 3 * bernoulli_se(exact.rate_real, 4000) + 1e-12);
    CHECK(std::abs(mc.rate_ideal - exact.rate_ideal) <= 3 * bernoulli_se(exact.rate_ideal, 4000) + 1e-12);
  }
}

TEST_CASE("exact ideal rates match independent Beta moments") {
  PrfsgParams p{3, 4, std::make_shared<const ChfsInstance>(9, LengthFunction::floor_log())};
  const double n = 4.0;
  double moment = 0.0;
  for (int j = 0; j <= 4; ++j) {
    const double binom[] = {1, 4, 6, 4, 1};
    moment += binom[j] * ref::haar_overlap_moment(n, j);
  }
  moment /= 16.0;
  const auto multi = prfsg_exact_game(p, PrfsgAdversaryKind::KeyGuessMulti, 16);
  CHECK(multi.rate_ideal == doctest::Approx(1.0 - std::pow(1.0 - moment, 4)).epsilon(1e-12));
  const auto single = prfsg_exact_game(p, PrfsgAdversaryKind::KeyGuessSingle, 16);
  CHECK(single.rate_ideal == doctest::Approx(0.625));
}

TEST_CASE("the informed adversary wins and the suite adversaries do not") {
  PrfsgSuiteConfig cfg;
  cfg.key_bits = 4;
  cfg.trials = 200;
  const Rng rng(8, 8);
  const auto informed = prfsg_informed_game(cfg, rng);
  CHECK(informed.rate_real == 1.0);
  CHECK(informed.advantage > 0.9);
  const auto suite = prfsg_hybrid_adversary_suite(cfg, rng);
  CHECK(suite.games.size() == 4);
  CHECK(suite.max_advantage < 0.25);
  CHECK(suite.games.at("zero_query").advantage <= 3 * suite.games.at("zero_query").advantage_se);
}
