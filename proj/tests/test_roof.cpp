#include <doctest.h>

#include <cmath>
#include <random>

#include "stabent/clifford.hpp"
#include "stabent/entropy.hpp"
#include "stabent/errors.hpp"
#include "stabent/numeric.hpp"
#include "stabent/roof.hpp"
#include "stabent/state.hpp"

using namespace stabent;

namespace {

StateCollection single(const DensityState& rho) {
  StateCollection c;
  c.entries.push_back({1.0, rho});
  return c;
}

StateCollection single(const PureState& psi) {
  StateCollection c;
  c.entries.push_back({1.0, psi});
  return c;
}

DensityState maximally_mixed_qubit() {
  return DensityState(1, Eigen::MatrixXcd::Identity(2, 2) * 0.5);
}

RoofOptions fast_options() {
  RoofOptions options;
  options.restarts = 8;
  return options;
}

}  // namespace

TEST_CASE("pure entries bypass the optimizer") {
  const RoofResult r = extended_purity(single(t_state()), 2);
  CHECK(r.value == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(r.trace.restarts == 0);
  REQUIRE(r.decompositions.size() == 1);
  CHECK(r.decompositions[0].weights[0] == doctest::Approx(1.0));

  const RoofResult m = extended_entropy_bits(single(haar_state(3, 5)), 2);
  CHECK(m.value == doctest::Approx(stabilizer_entropy_bits(haar_state(3, 5), 2.0)).epsilon(1e-10));
}

TEST_CASE("maximally mixed qubit reaches extended purity 1") {
  const RoofResult r = extended_purity(single(maximally_mixed_qubit()), 2, fast_options());
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-7));
  const RoofResult m = extended_entropy_bits(single(maximally_mixed_qubit()), 2, fast_options());
  CHECK(std::abs(m.value) < 1e-6);
}

TEST_CASE("the T/ZTZ mixture is the maximally mixed state in disguise") {
  const PureState t = t_state();
  const PureState zt = apply_clifford(t, {{CliffordGate::pauli_z(0)}});
  const DensityState rho = DensityState::mixture({{0.5, t}, {0.5, zt}});
  // The defining decomposition averages purity 0.75; the sup is still 1.
  CHECK((rho.matrix() - Eigen::MatrixXcd::Identity(2, 2) * 0.5).cwiseAbs().maxCoeff() < 1e-12);
  const RoofResult r = extended_purity(single(rho), 2, fast_options());
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("noisy T mixture agrees with the grid oracle") {
  const DensityState rho = DensityState::mixture({{0.9, t_state()}, {0.1, zeros_state(1)}});
  StateCollection c;
  c.entries.push_back({1.0, rho});
  const double optimized = extended_entropy_bits(c, 2, fast_options()).purity;
  const double oracle = roof_oracle_rank2(rho, 2, 360);
  CHECK(std::abs(optimized - oracle) < 1e-4);
}

TEST_CASE("optimizer result dominates every explicit candidate") {
  std::mt19937_64 rng(2024);
  const DensityState rho =
      DensityState::mixture({{0.9, t_state()}, {0.1, zeros_state(1)}});
  const RoofResult best = extended_purity(single(rho), 2, fast_options());
  for (int i = 0; i < 100; ++i) {
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd g(2, 2);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) g(a, b) = cdouble{gauss(rng), gauss(rng)};
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    const Eigen::MatrixXcd v = qr.householderQ() * Eigen::MatrixXcd::Identity(2, 2);
    const DecompositionCandidate candidate = decomposition_from_isometry(rho, v);
    CHECK(candidate_reconstructs(candidate, rho, 1.0, 1e-8));
    CHECK(candidate_average_purity(candidate, 2) <= best.value + 1e-9);
  }
}

TEST_CASE("rank-2 grid oracle agrees with the optimizer") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const int n = seed % 2 == 0 ? 2 : 1;
    const PureState a = haar_state(n, derive_seed(41, seed));
    const PureState b = haar_state(n, derive_seed(42, seed));
    const double w = 0.2 + 0.6 * static_cast<double>(seed) / 5.0;
    const DensityState rho = DensityState::mixture({{w, a}, {1.0 - w, b}});
    if (rho.rank() != 2) continue;
    const double oracle = roof_oracle_rank2(rho, 2, 360);
    const double optimized = extended_purity(single(rho), 2, fast_options()).value;
    CHECK(std::abs(oracle - optimized) < 1e-4);
  }
}

TEST_CASE("oracle rejects wrong ranks") {
  CHECK_THROWS_AS(roof_oracle_rank2(DensityState::from_pure(t_state()), 2, 64), ValidationError);
}

TEST_CASE("oracle reaches 1 on the maximally mixed qubit") {
  CHECK(roof_oracle_rank2(maximally_mixed_qubit(), 2, 180) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("extended purity does not decrease under traced protocols") {
  // Trace out one qubit with genuine density semantics, then certify
  // P-hat(output) >= P(input) - 1e-6. The optimizer only ever under-reports
  // the sup, so a shortfall is retried with a bigger restart budget before
  // counting as a violation.
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int n = 2 + static_cast<int>(seed % 2);
    const PureState psi = haar_state(n, derive_seed(1300, seed));
    ProtocolProgram program;
    program.steps.push_back(
        ProtocolStep{CliffordStep{random_clifford(n, derive_seed(1301, seed))}});
    program.steps.push_back(ProtocolStep{TraceOutStep{static_cast<int>(seed % n)}});
    RunOptions run_options;
    run_options.force_density_trace = true;
    const StateCollection out = run_protocol(psi, program, run_options).collection;
    REQUIRE(!out.all_pure());

    const double before = stabilizer_purity(psi, 2.0);
    RoofOptions options;
    options.restarts = 16;
    double after = extended_purity(out, 2, options).value;
    if (after < before - 1e-6) {
      options.restarts = 64;
      after = extended_purity(out, 2, options).value;
    }
    CHECK(after >= before - 1e-6);
  }
}

TEST_CASE("collection min entropy") {
  StateCollection mixed_pair;
  mixed_pair.entries.push_back({0.5, zeros_state(1)});
  mixed_pair.entries.push_back({0.5, t_state()});
  CHECK(collection_min_entropy(mixed_pair, 2).value == doctest::Approx(0.0).epsilon(1e-12));

  const PureState psi = haar_state(2, 9);
  CHECK(collection_min_entropy(single(psi), 2).value ==
        doctest::Approx(stabilizer_entropy_bits(psi, 2.0)).epsilon(1e-12));

  const RoofResult r = collection_min_entropy(single(maximally_mixed_qubit()), 2, fast_options());
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("weighted collections combine linearly") {
  StateCollection c;
  c.entries.push_back({0.25, t_state()});
  c.entries.push_back({0.75, zeros_state(2)});
  const RoofResult r = extended_purity(c, 2);
  CHECK(r.value == doctest::Approx(0.25 * 0.75 + 0.75 * 1.0).epsilon(1e-12));
}

TEST_CASE("validation errors") {
  CHECK_THROWS_AS(extended_purity(StateCollection{}, 2), ValidationError);
  CHECK_THROWS_AS(extended_purity(single(t_state()), 1), ValidationError);
  Eigen::MatrixXcd bad(2, 2);
  bad << 1.2, 0.5, 0.5, -0.2;  // Hermitian, unit trace, negative determinant
  CHECK_THROWS_AS(DensityState(1, bad), ValidationError);
}

TEST_CASE("density eigen pairs reconstruct the matrix") {
  const DensityState rho =
      DensityState::mixture({{0.6, haar_state(2, 1)}, {0.3, haar_state(2, 2)}, {0.1, haar_state(2, 3)}});
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(4, 4);
  for (const auto& pair : rho.eigen_pairs()) {
    acc += pair.value * (pair.vector * pair.vector.adjoint());
  }
  CHECK((acc - rho.matrix()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("roof result serializes the winning decomposition") {
  const RoofResult r = extended_purity(single(maximally_mixed_qubit()), 2, fast_options());
  const std::string json = r.to_json();
  CHECK(json.find("\"decompositions\"") != std::string::npos);
  CHECK(json.find("\"value\"") != std::string::npos);
}
