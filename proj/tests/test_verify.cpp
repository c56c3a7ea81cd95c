#include <doctest.h>

#include <cmath>

#include "stabent/entropy.hpp"
#include "stabent/errors.hpp"
#include "stabent/numeric.hpp"
#include "stabent/state.hpp"
#include "stabent/verify.hpp"

using namespace stabent;

namespace {

VerifyOptions quick_options(int trials) {
  VerifyOptions options;
  options.trials = trials;
  options.seed = 1;
  return options;
}

}  // namespace

TEST_CASE("split state construction") {
  const PureState psi = split_state(0.25, zeros_state(2), haar_state(2, 3));
  CHECK(psi.num_qubits == 3);
  CHECK(psi.norm() == doctest::Approx(1.0));
  CHECK(std::norm(psi.amplitudes[0]) == doctest::Approx(0.25));
}

TEST_CASE("split bound degenerates to equality at p = 1") {
  const PureState phi1 = haar_state(2, 5);
  const PureState phi2 = haar_state(2, 6);
  const SplitBoundMargins m = split_purity_bound_case(1.0, phi1, phi2, 2);
  CHECK(m.lhs == doctest::Approx(stabilizer_purity(phi1, 2.0)).epsilon(1e-10));
  CHECK(m.rhs_expanded == doctest::Approx(m.lhs).epsilon(1e-10));
  CHECK(m.rhs_summed == doctest::Approx(m.lhs).epsilon(1e-10));
}

TEST_CASE("split bound is tight for p = 1/2 with equal T factors") {
  // psi = |+> tensor |T|: the bound meets the product value 3/4 exactly.
  const SplitBoundMargins m = split_purity_bound_case(0.5, t_state(), t_state(), 2);
  CHECK(m.lhs == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(m.rhs_expanded == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(m.rhs_summed == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("branch bounds at the degenerate ends") {
  const PureState phi1 = haar_state(2, 7);
  const PureState phi2 = haar_state(2, 8);
  // p = 0 projects onto the phi2 branch.
  CHECK(min_branch_margin(0.0, phi1, phi2, 2) >=
        stabilizer_entropy_bits(phi2, 2.0) -
            std::min(stabilizer_entropy_bits(phi1, 2.0), stabilizer_entropy_bits(phi2, 2.0)) - 1e-9);
  CHECK(average_purity_margin(0.0, phi1, phi2, 2) == doctest::Approx(0.0).epsilon(1e-9));
  // Stabilizer + Haar mix keeps both inequalities strictly satisfied.
  CHECK(min_branch_margin(0.5, zeros_state(2), phi2, 2) >= -1e-9);
  CHECK(average_purity_margin(0.5, zeros_state(2), phi2, 2) >= -1e-9);
}

TEST_CASE("randomized split suites run clean") {
  for (const auto& report :
       {check_split_purity_bound(quick_options(60)), check_min_branch_bound(quick_options(60)),
        check_average_purity_bound(quick_options(60))}) {
    CHECK(report.passed());
    CHECK(report.trials == 60);
    CHECK(report.worst_margin >= -report.tolerance);
  }
}

TEST_CASE("monotonicity suites run clean on reduced trial counts") {
  VerifyOptions options = quick_options(40);
  const TrialReport t1 = check_deterministic_monotonicity(options);
  CHECK(t1.passed());
  CHECK(t1.trials == 40);
  const TrialReport t2 = check_strong_monotonicity(options);
  CHECK(t2.passed());
  CHECK(t2.worst_margin >= -1e-8);
}

TEST_CASE("counterexample bookkeeping on a tiny scan") {
  // No violation can exist at n <= 4: M_2(psi) stays well above half of
  // M_2(phi) for 3-qubit Haar states.
  const CounterexampleScan scan = counterexample_scan(4, 1);
  CHECK(!scan.found);

  // The half overlap with |0^n> caps M_2(psi) at 4 bits through the
  // min-relative-entropy chain, which is what makes the violation possible.
  for (int n = 4; n <= 7; ++n) {
    const PureState phi = haar_state(n - 1, derive_seed(1400, n));
    const PureState psi = split_state(0.5, zeros_state(n - 1), phi);
    CHECK(stabilizer_entropy_bits(psi, 2.0) <= 4.0 + 1e-9);
  }
  const VerifyOptions options = [] {
    VerifyOptions o;
    o.counterexample_n_max = 4;
    o.seed = 1;
    return o;
  }();
  CHECK(!check_counterexample(options).passed());
}

TEST_CASE("stabilizer state enumeration counts") {
  CHECK(enumerate_stabilizer_states(1).size() == 6);
  CHECK(enumerate_stabilizer_states(2).size() == 60);
  CHECK(enumerate_stabilizer_states(3).size() == 1080);
  CHECK_THROWS_AS(enumerate_stabilizer_states(4), ResourceError);
  for (const PureState& sigma : enumerate_stabilizer_states(2)) {
    CHECK(std::abs(stabilizer_entropy_bits(sigma, 2.0)) < 1e-10);
  }
}

TEST_CASE("D_min of the single-qubit magic state") {
  const double expected = -std::log2(std::cos(M_PI / 8) * std::cos(M_PI / 8));
  CHECK(d_min_bits(t_state()) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(stabilizer_entropy_bits(t_state(), 2.0) <= 4.0 * d_min_bits(t_state()) + 1e-9);
}

TEST_CASE("property chain runs clean on a reduced trial count") {
  const TrialReport report = check_property_chain(quick_options(25));
  CHECK(report.passed());
  bool found_counts = false;
  for (const std::string& note : report.notes) {
    if (note.find("1080") != std::string::npos) found_counts = true;
  }
  CHECK(found_counts);
}

TEST_CASE("suite dispatcher") {
  const auto reports = run_suites("split_bound", quick_options(5));
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].suite == "split_bound");
  CHECK(reports_to_json(reports).find("\"suite\"") != std::string::npos);
  CHECK_THROWS_AS(run_suites("bogus", quick_options(1)), ValidationError);
}

TEST_CASE("trial reports serialize failures") {
  TrialReport r;
  r.suite = "demo";
  r.tolerance = 1e-9;
  r.record(3, "demo margin", -1.0);
  CHECK(!r.passed());
  CHECK(r.to_json().find("demo margin") != std::string::npos);
}
