#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "stabent/clifford.hpp"
#include "stabent/entropy.hpp"
#include "stabent/errors.hpp"
#include "stabent/numeric.hpp"
#include "stabent/spectrum.hpp"
#include "stabent/state.hpp"

using namespace stabent;

TEST_CASE("pauli expectations on small states") {
  CHECK(pauli_expectation(zeros_state(1), PauliLabel::from_string("Z")) == doctest::Approx(1.0));
  CHECK(pauli_expectation(t_state(), PauliLabel::from_string("X")) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(pauli_expectation(t_state(), PauliLabel::from_string("Y")) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(pauli_expectation(ckz_state(3), PauliLabel::from_string("XII")) == doctest::Approx(0.5));
  CHECK_THROWS_AS(pauli_expectation(zeros_state(2), PauliLabel::from_string("Z")), ValidationError);
}

TEST_CASE("pauli expectation agrees with the matrix oracle and stays real") {
  for (int n = 1; n <= 3; ++n) {
    const PureState psi = haar_state(n, 101 + static_cast<std::uint64_t>(n));
    const std::size_t dim = psi.dim();
    for (std::size_t idx = 0; idx < dim * dim; ++idx) {
      const PauliLabel p = PauliLabel::from_index(n, idx);
      CHECK(pauli_expectation(psi, p) ==
            doctest::Approx(testing::naive_expectation(psi, p)).epsilon(1e-10));
    }
  }
}

TEST_CASE("char_spectrum on named states") {
  const CharSpectrum zero = char_spectrum(zeros_state(1));
  CHECK(zero.at(PauliLabel::from_string("I")) == doctest::Approx(0.5));
  CHECK(zero.at(PauliLabel::from_string("Z")) == doctest::Approx(0.5));
  CHECK(zero.at(PauliLabel::from_string("X")) == doctest::Approx(0.0));
  CHECK(zero.at(PauliLabel::from_string("Y")) == doctest::Approx(0.0));

  const CharSpectrum t = char_spectrum(t_state());
  CHECK(t.at(PauliLabel::from_string("I")) == doctest::Approx(0.5));
  CHECK(t.at(PauliLabel::from_string("X")) == doctest::Approx(0.25));
  CHECK(t.at(PauliLabel::from_string("Y")) == doctest::Approx(0.25));
  CHECK(t.at(PauliLabel::from_string("Z")) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("CCZ spectrum has 29 nonzero entries of the known sizes") {
  const CharSpectrum s = char_spectrum(ckz_state(3));
  int identity_like = 0, small = 0, other = 0;
  for (double v : s.xi) {
    if (v > 1e-12) {
      if (std::abs(v - 0.125) < 1e-12) ++identity_like;
      else if (std::abs(v - 1.0 / 32.0) < 1e-12) ++small;
      else ++other;
    }
  }
  CHECK(identity_like == 1);
  CHECK(small == 28);
  CHECK(other == 0);
  CHECK(s.sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fast spectrum matches the naive oracle up to n = 4") {
  for (int n = 1; n <= 4; ++n) {
    const PureState psi = haar_state(n, 7 + static_cast<std::uint64_t>(n));
    const CharSpectrum fast = char_spectrum(psi);
    const std::vector<double> slow = testing::naive_char_spectrum(psi);
    double worst = 0.0;
    for (std::size_t i = 0; i < slow.size(); ++i) {
      worst = std::max(worst, std::abs(fast.xi[i] - slow[i]));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("spectrum normalization holds for random states") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 1 + static_cast<int>(seed % 5);
    CHECK(char_spectrum(haar_state(n, seed)).sum() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("spectrum size guard") {
  CHECK_THROWS_AS(char_spectrum(haar_state(4, 1), /*max_qubits=*/3), ResourceError);
}

TEST_CASE("clifford application basics") {
  const PureState plus = apply_clifford(zeros_state(1), {{CliffordGate::hadamard(0)}});
  CHECK(plus.fidelity(plus_state()) == doctest::Approx(1.0));

  // Bell pair from |+>|0>.
  const PureState bell =
      apply_clifford(tensor(plus_state(), zeros_state(1)), {{CliffordGate::cnot(0, 1)}});
  CHECK(std::abs(bell.amplitudes[0]) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(bell.amplitudes[3]) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(bell.amplitudes[1]) == doctest::Approx(0.0));
  CHECK(std::abs(bell.amplitudes[2]) == doctest::Approx(0.0));

  CHECK_THROWS_AS(apply_clifford(zeros_state(1), {{CliffordGate::hadamard(1)}}), ValidationError);
}

TEST_CASE("phase gate preserves the spectrum multiset of |T>") {
  CharSpectrum before = char_spectrum(t_state());
  CharSpectrum after = char_spectrum(apply_clifford(t_state(), {{CliffordGate::phase(0)}}));
  std::sort(before.xi.begin(), before.xi.end());
  std::sort(after.xi.begin(), after.xi.end());
  for (std::size_t i = 0; i < before.xi.size(); ++i) {
    CHECK(before.xi[i] == doctest::Approx(after.xi[i]).epsilon(1e-12));
  }
}

TEST_CASE("clifford invariance of the spectrum as a multiset") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 1 + static_cast<int>(seed % 4);
    const PureState psi = haar_state(n, derive_seed(33, seed));
    CharSpectrum base = char_spectrum(psi);
    CharSpectrum rotated = char_spectrum(apply_clifford(psi, random_clifford(n, seed)));
    std::sort(base.xi.begin(), base.xi.end());
    std::sort(rotated.xi.begin(), rotated.xi.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < base.xi.size(); ++i) {
      worst = std::max(worst, std::abs(base.xi[i] - rotated.xi[i]));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("named states") {
  const PureState minus = ckz_state(1);
  CHECK(minus.amplitudes[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(minus.amplitudes[1].real() == doctest::Approx(-1.0 / std::sqrt(2.0)));

  const PureState t = t_state();
  CHECK(t.amplitudes[1] == std::polar(1.0 / std::sqrt(2.0), M_PI / 4));

  const PureState ccz = ckz_state(3);
  for (std::size_t b = 0; b < 8; ++b) {
    CHECK(ccz.amplitudes[b].real() ==
          doctest::Approx((b == 7 ? -1.0 : 1.0) / std::sqrt(8.0)));
  }

  const PureState cks = cks_state(2);
  CHECK(cks.amplitudes[3] == cdouble{0.0, 0.5});

  CHECK(make_named_state("ckz:3")->fidelity(ccz) == doctest::Approx(1.0));
  CHECK(make_named_state("cs")->fidelity(cks_state(2)) == doctest::Approx(1.0));
  CHECK(!make_named_state("nope").has_value());
}

TEST_CASE("random_clifford is deterministic and stays stabilizer") {
  const CliffordCircuit a = random_clifford(3, 42);
  const CliffordCircuit b = random_clifford(3, 42);
  REQUIRE(a.gates.size() == b.gates.size());
  CHECK(a.gates.size() == 60);
  for (std::size_t i = 0; i < a.gates.size(); ++i) {
    CHECK(a.gates[i].kind == b.gates[i].kind);
    CHECK(a.gates[i].q0 == b.gates[i].q0);
    CHECK(a.gates[i].q1 == b.gates[i].q1);
  }

  for (const CliffordGate& g : random_clifford(1, 5).gates) {
    CHECK(g.kind != CliffordGate::Kind::CNOT);
  }

  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const PureState sigma = random_stabilizer_state(2, seed);
    CHECK(std::abs(stabilizer_entropy_bits(sigma, 2.0)) < 1e-10);
  }
}

TEST_CASE("state JSON round trip") {
  const PureState psi = haar_state(2, 99);
  const PureState back = state_from_json_text(state_to_json_text(psi));
  CHECK(back.num_qubits == 2);
  CHECK(back.fidelity(psi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("state validation") {
  CHECK_THROWS_AS(PureState(1, {cdouble{1.0, 0.0}}), ValidationError);
  CHECK_THROWS_AS(PureState(1, {cdouble{1.0, 0.0}, cdouble{0.5, 0.0}}), ValidationError);
}

TEST_CASE("reductions are bit-stable across worker counts") {
  const PureState psi = haar_state(8, 2718);
  const int saved = thread_count();
  set_thread_count(1);
  const double serial_purity = stabilizer_purity(psi, 2.0);
  const double serial_shannon = xi_shannon_bits(psi);
  set_thread_count(4);
  const double parallel_purity = stabilizer_purity(psi, 2.0);
  const double parallel_shannon = xi_shannon_bits(psi);
  set_thread_count(saved);
  CHECK(serial_purity == parallel_purity);  // exact, not approximate
  CHECK(serial_shannon == parallel_shannon);
}
