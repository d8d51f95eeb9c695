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

#include "chfs/core/gates.hpp"
#include "chfs/core/haar.hpp"
#include "chfs/core/linalg.hpp"
#include "chfs/lemmas/lemmas.hpp"
#include "chfs/statetests/state_tests.hpp"
#include "support/lemma_oracles.hpp"
#include "support/oracles.hpp"

using namespace chfs;
namespace ref = chfs::testing;

namespace {

DensityMatrix pure_dm(const CVector& v) {
  return DensityMatrix::trusted(v * v.adjoint());
}

bool within(const VerificationReport& r, double target, double sigmas) {
  return std::abs(r.estimate - target) <= sigmas * r.standard_error + 1e-12;
}

/// cos(theta)|0> + sin(theta)|1> on A next to a mixed single-qubit B, with the
/// projector |0><0| on A.
struct RotatedQubit {
  DensityMatrix rho;
  CMatrix p0;
};

RotatedQubit rotated_qubit(double theta) {
  CVector a(2);
  a << std::cos(theta), std::sin(theta);
  CMatrix sigma(2, 2);
  sigma << 0.7, 0.1, 0.1, 0.3;
  const CMatrix rho = ref::kron(a * a.adjoint(), sigma);
  CMatrix z0 = CMatrix::Zero(2, 2);
  z0(0, 0) = 1.0;
  return {DensityMatrix::trusted(rho), ref::kron(z0, ref::eye(2))};
}

}  // namespace

TEST_CASE("verdict rule uses five standard errors") {
  CHECK(judge(ClaimKind::Equality, 1.04, 1.0, 0.01) == Verdict::Consistent);
  CHECK(judge(ClaimKind::Equality, 1.06, 1.0, 0.01) == Verdict::Violated);
  CHECK(judge(ClaimKind::Equality, 0.94, 1.0, 0.01) == Verdict::Violated);
  CHECK(judge(ClaimKind::UpperBound, 0.5, 1.0, 0.0) == Verdict::Consistent);
  CHECK(judge(ClaimKind::UpperBound, 1.04, 1.0, 0.01) == Verdict::Consistent);
  CHECK(judge(ClaimKind::UpperBound, 1.06, 1.0, 0.01) == Verdict::Violated);
  CHECK(judge(ClaimKind::LowerBound, 0.96, 1.0, 0.01) == Verdict::Consistent);
  CHECK(judge(ClaimKind::LowerBound, 0.9, 1.0, 0.01) == Verdict::Violated);
  CHECK(judge(ClaimKind::Equality, 1.0 + 1e-12, 1.0, 0.0) == Verdict::Consistent);
  CHECK(judge(ClaimKind::Equality, 1.0 + 1e-6, 1.0, 0.0) == Verdict::Violated);
}

TEST_CASE("verification reports round-trip through JSON and render as Markdown") {
  Rng rng(3, 0);
  auto r = verify_concentration_overlap(1, 0.5, 200, rng);
  r.notes.push_back("note");
  const auto back = VerificationReport::from_json(r.to_json());
  CHECK(back.to_json().dump() == r.to_json().dump());
  const std::string md = reports_markdown({r, r});
  CHECK(md.find("| concentration-overlap |") != std::string::npos);
  CHECK(std::count(md.begin(), md.end(), '\n') == 4);
  CHECK_THROWS_AS(VerificationReport::from_json(nlohmann::json::object()),
                  nlohmann::json::exception);
}

TEST_CASE("haar projection mean") {
  Rng rng(5, 0);
  const auto full = verify_haar_projection(2, 4, 300, rng);
  CHECK(full.details["min"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(full.details["max"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(full.verdict == Verdict::Consistent);

  const auto one = verify_haar_projection(3, 1, 10000, rng);
  CHECK(one.claim_kind == ClaimKind::Equality);
  CHECK(one.claimed_value == doctest::Approx(0.125));
  CHECK(within(one, 0.125, 3.0));

  const auto two = verify_haar_projection(2, 2, 10000, rng);
  CHECK(within(two, 0.5, 3.0));

  const auto padded = verify_haar_projection(2, 2, 4000, rng, 4);
  CHECK(padded.claim_kind == ClaimKind::UpperBound);
  CHECK(padded.verdict == Verdict::Consistent);
  CHECK(padded.estimate <= 0.5);

  CHECK_THROWS_AS(verify_haar_projection(2, 5, 10, rng), std::invalid_argument);
  CHECK_THROWS_AS(verify_haar_projection(3, 1, 10, rng, 2), std::invalid_argument);
}

TEST_CASE("overlap concentration tail") {
  Rng rng(6, 0);
  const auto all = verify_concentration_overlap(2, 1.0, 500, rng);
  CHECK(all.estimate == 1.0);
  CHECK(all.verdict == Verdict::Consistent);
  const auto half1 = verify_concentration_overlap(1, 0.5, 20000, rng);
  CHECK(half1.claimed_value == doctest::Approx(0.5));
  CHECK(within(half1, 0.5, 3.0));
  const auto half2 = verify_concentration_overlap(2, 0.5, 20000, rng);
  CHECK(half2.claimed_value == doctest::Approx(0.125));
  CHECK(within(half2, 0.125, 3.0));
  CHECK_THROWS_AS(verify_concentration_overlap(1, 1.5, 10, rng), std::invalid_argument);
}

TEST_CASE("lubkin subsystem purity") {
  Rng rng(7, 0);
  const auto small = verify_lubkin(2, 2, 20000, rng);
  CHECK(small.claimed_value == doctest::Approx(0.8));
  CHECK(within(small, 0.8, 4.0));
  const auto big = verify_lubkin(4, 4, 5000, rng);
  CHECK(big.claimed_value == doctest::Approx(8.0 / 17.0));
  CHECK(within(big, 8.0 / 17.0, 4.0));
}

TEST_CASE("swap test report matches the trace formula") {
  Rng rng(8, 0);
  for (int i = 0; i < 5; ++i) {
    const auto r = verify_swap_test(2, 1 + i % 3, 10000, rng);
    CHECK(r.verdict == Verdict::Consistent);
    CHECK(r.details["exact_prob"].get<double>() == doctest::Approx(r.claimed_value).epsilon(1e-12));
  }
}

TEST_CASE("product test on Haar states") {
  Rng rng(9, 0);
  CHECK(product_test_haar_bound(4) == doctest::Approx(0.6328125));
  CHECK(lubkin_product_test_mean(SubsystemSpec::qubits(4)) ==
        doctest::Approx(162.0 / 272.0).epsilon(1e-12));
  CHECK(lubkin_product_test_mean(SubsystemSpec::qubits(2)) ==
        doctest::Approx(0.25 * (1 + 1 + 2 * 0.8)).epsilon(1e-12));

  const auto m4 = verify_product_test_haar(4, 4000, rng);
  CHECK(m4.verdict == Verdict::Consistent);
  CHECK(within(m4, 162.0 / 272.0, 3.0));
  CHECK(m4.estimate < 0.6328);

  const auto m2 = verify_product_test_haar(2, 4000, rng);
  CHECK(within(m2, 0.9, 3.0));

  const auto m13 = verify_product_test_haar(13, 0, rng);
  CHECK(m13.claim_kind == ClaimKind::UpperBound);
  CHECK(m13.claimed_value <= 0.05);
  CHECK(m13.estimate <= m13.claimed_value);
  CHECK(m13.verdict == Verdict::Consistent);
}

TEST_CASE("measurement decomposition on a measurement-free circuit") {
  Rng rng(10, 0);
  MeasuredCircuit c;
  c.n_qubits = 3;
  c.steps.push_back(MeasuredStep::apply({0, 1, 2}, haar_unitary(3, rng).matrix()));
  const auto r = verify_measurement_decomposition(c, PureState::zero(3));
  CHECK(r.details["t"].get<int>() == 0);
  CHECK(r.details["eps"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.estimate < 1e-12);
  CHECK(r.verdict == Verdict::Consistent);
}

TEST_CASE("measurement decomposition on engineered near-deterministic circuits") {
  Rng rng(11, 0);
  for (int i = 0; i < 20; ++i) {
    const int t = 1 + i % 4;
    const auto c = engineered_decomposition_circuit(3, t, 0.02, rng);
    const PureState input =
        tensor_product(haar_state(3, rng), PureState::zero(t));
    const auto r = verify_measurement_decomposition(c, input);
    const double eps = r.details["eps"].get<double>();
    CHECK(eps <= 0.02);
    CHECK(eps > 0.0);
    CHECK(r.estimate <= t * eps + 1e-12);
    CHECK(r.details["min_dominant_probability"].get<double>() >= 1.0 - eps);
    CHECK(r.verdict == Verdict::Consistent);
    const auto oracle = ref::decomposition_oracle(c, input.amplitudes());
    const double oracle_eps = oracle.eps;
    const double oracle_diff = oracle.difference_1norm;
    CHECK(eps == doctest::Approx(oracle_eps).epsilon(1e-9));
    CHECK(r.estimate == doctest::Approx(oracle_diff).epsilon(1e-9));
  }
}

TEST_CASE("measurement decomposition with a fair-coin measurement") {
  Rng rng(12, 0);
  const auto c = fair_coin_circuit(3, rng);
  const auto r = verify_measurement_decomposition(c, PureState::zero(3));
  CHECK(r.details["eps"].get<double>() == doctest::Approx(0.5));
  CHECK(r.estimate == doctest::Approx(0.5));
  CHECK(r.verdict == Verdict::Consistent);

  MeasuredCircuit traced = c;
  traced.steps.push_back(MeasuredStep::trace_out(1));
  CHECK_THROWS_AS(verify_measurement_decomposition(traced, PureState::zero(3)),
                  std::invalid_argument);
}

TEST_CASE("gentle measurement bounds") {
  Rng rng(13, 0);
  const auto inside = DensityMatrix::trusted(
      (CMatrix(2, 2) << 1, 0, 0, 0).finished());
  CMatrix z0 = CMatrix::Zero(2, 2);
  z0(0, 0) = 1.0;
  const auto r0 = verify_gentle_measurement(inside, z0);
  CHECK(r0.estimate < 1e-12);
  CHECK(r0.details["distance_project"].get<double>() < 1e-12);

  const auto mixed = random_density(2, 3, rng);
  const auto ri = verify_gentle_measurement(mixed, ref::eye(4));
  CHECK(ri.details["eps"].get<double>() < 1e-12);
  CHECK(ri.estimate < 1e-12);

  for (int i = 0; i < 50; ++i) {
    const auto inst = random_gentle_instance(2, 1 + i % 3, 0.04, rng);
    const auto r = verify_gentle_measurement(inst.rho, inst.p0);
    CHECK(r.details["eps"].get<double>() == doctest::Approx(0.04).epsilon(1e-9));
    CHECK(r.estimate <= 0.2 + 1e-12);
    CHECK(r.details["distance_project"].get<double>() <= 0.24 + 1e-12);
    CHECK(r.verdict == Verdict::Consistent);
  }

  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = 0.5;
  CHECK_THROWS_AS(verify_gentle_measurement(inside, bad), std::invalid_argument);
}

TEST_CASE("purity structure of approximately pure subsystems") {
  Rng rng(14, 0);
  const auto psi = haar_state(1, rng).density();
  const auto sigma = random_density(2, 2, rng);
  const auto prod = tensor_product(psi, sigma);
  const SubsystemSpec split({2, 4});
  const auto exact = verify_purity_structure(prod, split);
  CHECK(exact.estimate < 1e-9);
  CHECK(exact.verdict == Verdict::Consistent);

  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const auto b = verify_purity_structure(pure_dm(bell), SubsystemSpec({2, 2}));
  CHECK(b.verdict == Verdict::Inconclusive);

  for (int i = 0; i < 20; ++i) {
    const auto noise = random_density(3, 1 + i % 8, rng);
    const CMatrix m = 0.99 * prod.matrix() + 0.01 * noise.matrix();
    const auto r = verify_purity_structure(DensityMatrix::trusted(m), split);
    CHECK(r.verdict == Verdict::Consistent);
    CHECK(r.estimate <= 8.0 * r.details["eps"].get<double>());
  }

  // Weakly entangled pure states sit at distance 2 sqrt(s) with eps = 2 s (1 - s),
  // outside any linear bound for small s.
  const double s = 0.01;
  CVector weak = CVector::Zero(4);
  weak(0) = std::sqrt(1.0 - s);
  weak(3) = std::sqrt(s);
  const auto w = verify_purity_structure(pure_dm(weak), SubsystemSpec({2, 2}));
  CHECK(w.details["eps"].get<double>() == doctest::Approx(2 * s * (1 - s)));
  CHECK(w.estimate == doctest::Approx(2 * std::sqrt(s)));
  CHECK(w.verdict == Verdict::Violated);
}

TEST_CASE("gentle measurement on approximately pure subsystems") {
  const auto trivial = rotated_qubit(0.4);
  const auto r0 = verify_gentle_subsystem(trivial.rho, SubsystemSpec({2, 2}), ref::eye(4));
  CHECK(r0.estimate < 1e-12);

  // eps = 2 c^2 s^2 and the distance is 2 c s = sqrt(2 eps).
  const double theta_small = 0.5 * std::asin(std::sqrt(2.0 * 1e-4));
  const auto small = rotated_qubit(theta_small);
  const auto r1 = verify_gentle_subsystem(small.rho, SubsystemSpec({2, 2}), small.p0);
  CHECK(r1.details["eps"].get<double>() == doctest::Approx(1e-4).epsilon(1e-9));
  CHECK(r1.estimate == doctest::Approx(std::sqrt(2e-4)).epsilon(1e-9));
  CHECK(r1.estimate <= 0.1);
  CHECK(r1.verdict == Verdict::Consistent);
  CHECK(r1.notes.empty());

  const double theta_edge = 0.5 * std::asin(std::sqrt(2.0 * 0.24));
  const auto edge = rotated_qubit(theta_edge);
  const auto r2 = verify_gentle_subsystem(edge.rho, SubsystemSpec({2, 2}), edge.p0);
  CHECK(r2.verdict == Verdict::Consistent);
  REQUIRE(r2.notes.size() == 1);
  CHECK(r2.notes[0] == "bound regime edge");

  const auto far = rotated_qubit(std::acos(-1.0) / 4.0);
  const auto r3 = verify_gentle_subsystem(far.rho, SubsystemSpec({2, 2}), far.p0);
  CHECK(r3.verdict == Verdict::Inconclusive);

  const auto r4 = verify_gentle_subsystem(small.rho, SubsystemSpec({2, 2}), small.p0, 1e-6);
  CHECK(r4.verdict == Verdict::Inconclusive);

  Rng rng(15, 0);
  for (int i = 0; i < 50; ++i) {
    const auto inst = random_gentle_subsystem_instance(1 + i % 2, 1 + (i / 2) % 2, rng);
    const auto r = verify_gentle_subsystem(inst.rho, inst.spec, inst.p0);
    CHECK(r.verdict != Verdict::Violated);
  }
}

TEST_CASE("cap geometry closed forms and Monte Carlo cap measures") {
  Rng rng(16, 0);
  const auto g = cap_geometry(1, 0.3, 0.05, CapCase::CapCase1);
  CHECK(g.difference == doctest::Approx(0.35 * 0.35 - 0.09));
  CHECK(g.lower_bound == doctest::Approx(0.0045));

  const auto zero = cap_geometry(2, 0.3, 0.0, CapCase::CapCase1);
  CHECK(zero.difference == 0.0);

  const auto cap = conjecture_cap_geometry(1, 0.4, 0.0, CapCase::CapCase1, 20000, rng);
  CHECK(cap.details["sigma_s"].get<double>() == doctest::Approx(0.16));
  CHECK(std::abs(cap.details["mc_sigma_s"].get<double>() - 0.16) <=
        3.0 * cap.details["mc_sigma_s_se"].get<double>());

  const auto c1 = conjecture_cap_geometry(1, 0.3, 0.05, CapCase::CapCase1, 20000, rng);
  CHECK(c1.verdict == Verdict::Consistent);

  const auto c2 = conjecture_cap_geometry(1, 0.1, 0.05, CapCase::FarCase2, 20000, rng);
  CHECK(c2.details["sigma_s"].get<double>() == doctest::Approx(1 - 0.81));
  CHECK(c2.details["difference"].get<double>() == doctest::Approx(0.81 - 0.85 * 0.85));
  CHECK(c2.verdict == Verdict::Consistent);
  CHECK_THROWS_AS(cap_geometry(1, 0.5, 0.01, CapCase::FarCase2), std::invalid_argument);

  const auto p2 = cap_geometry(1, 0.3, 0.05, CapCase::Product2, 2);
  CHECK(p2.sigma_s == doctest::Approx(std::pow(0.3, 2 * (2 + 4 - 2))));
  const auto p2r = conjecture_cap_geometry(1, 0.5, 0.1, CapCase::Product2, 20000, rng);
  CHECK(p2r.verdict == Verdict::Consistent);

  CHECK_THROWS_AS(cap_geometry(1, 0.8, 0.3, CapCase::CapCase1), std::invalid_argument);
  CHECK(cap_case_from_string("Product2") == CapCase::Product2);
  CHECK_THROWS(cap_case_from_string("nope"));

  const auto fit = fit_cap_exponents(1, CapCase::CapCase1, {0.1, 0.2, 0.3}, {0.01, 0.02, 0.05});
  CHECK(fit.points == 9);
  CHECK(std::isfinite(fit.a));
  CHECK(std::isfinite(fit.b));
}

TEST_CASE("Lipschitz concentration tail") {
  Rng rng(17, 0);
  CHECK(lipschitz_tail_bound(4, 1, 0.3) == doctest::Approx(std::exp(-0.09 * 14 / 24)));
  CHECK(lipschitz_tail_bound(6, 1, 0.3) == doctest::Approx(std::exp(-0.2325)));
  const auto none = verify_lipschitz_tail(3, 1, 1.0, 2000, rng);
  CHECK(none.estimate == 0.0);
  const auto n4 = verify_lipschitz_tail(4, 1, 0.3, 5000, rng);
  CHECK(n4.verdict == Verdict::Consistent);
  CHECK(n4.estimate <= 0.949);
  const auto n6 = verify_lipschitz_tail(6, 1, 0.3, 5000, rng);
  CHECK(n6.verdict == Verdict::Consistent);
  CHECK(n6.estimate < 0.05);
  const auto two = verify_lipschitz_tail(3, 2, 0.3, 1000, rng);
  CHECK(two.verdict == Verdict::Consistent);
}

TEST_CASE("lemma grids are deterministic and worker independent") {
  std::vector<LemmaCell> cells;
  for (int n = 1; n <= 3; ++n) {
    cells.push_back([n](Rng& r) { return verify_concentration_overlap(n, 0.5, 500, r); });
    cells.push_back([n](Rng& r) { return verify_haar_projection(n, 1, 200, r); });
  }
  const auto a = run_lemma_grid(cells, 42, 9, 1);
  const auto b = run_lemma_grid(cells, 42, 9, 3);
  REQUIRE(a.size() == cells.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].to_json().dump() == b[i].to_json().dump());
  }
  const auto c = run_lemma_grid(cells, 43, 9, 1);
  CHECK(a[0].to_json().dump() != c[0].to_json().dump());
}
