#include "stabent/clifford.hpp"

#include <cmath>
#include <random>

#include "stabent/errors.hpp"

namespace stabent {

namespace {

void check_qubit(int q, int n, const char* what) {
  if (q < 0 || q >= n) {
    throw ValidationError(std::string(what) + " index " + std::to_string(q) +
                          " out of range for " + std::to_string(n) + " qubits");
  }
}

}  // namespace

std::string CliffordGate::name() const {
  switch (kind) {
    case Kind::H: return "H";
    case Kind::S: return "S";
    case Kind::CNOT: return "CNOT";
    case Kind::X: return "X";
    case Kind::Y: return "Y";
    case Kind::Z: return "Z";
  }
  return "?";
}

void apply_gate_in_place(std::vector<cdouble>& amps, int num_qubits, const CliffordGate& gate) {
  check_qubit(gate.q0, num_qubits, "gate qubit");
  const std::size_t dim = amps.size();
  const std::size_t bit = qubit_bit(num_qubits, gate.q0);
  switch (gate.kind) {
    case CliffordGate::Kind::H: {
      const double s = 1.0 / std::sqrt(2.0);
      for (std::size_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const cdouble a = amps[i], b = amps[i | bit];
        amps[i] = s * (a + b);
        amps[i | bit] = s * (a - b);
      }
      break;
    }
    case CliffordGate::Kind::S:
      for (std::size_t i = 0; i < dim; ++i) {
        if (i & bit) amps[i] *= cdouble{0.0, 1.0};
      }
      break;
    case CliffordGate::Kind::X:
      for (std::size_t i = 0; i < dim; ++i) {
        if (!(i & bit)) std::swap(amps[i], amps[i | bit]);
      }
      break;
    case CliffordGate::Kind::Y:
      for (std::size_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const cdouble a = amps[i], b = amps[i | bit];
        amps[i] = cdouble{0.0, -1.0} * b;
        amps[i | bit] = cdouble{0.0, 1.0} * a;
      }
      break;
    case CliffordGate::Kind::Z:
      for (std::size_t i = 0; i < dim; ++i) {
        if (i & bit) amps[i] = -amps[i];
      }
      break;
    case CliffordGate::Kind::CNOT: {
      check_qubit(gate.q1, num_qubits, "CNOT target");
      if (gate.q1 == gate.q0) throw ValidationError("CNOT control equals target");
      const std::size_t tbit = qubit_bit(num_qubits, gate.q1);
      for (std::size_t i = 0; i < dim; ++i) {
        if ((i & bit) && !(i & tbit)) std::swap(amps[i], amps[i | tbit]);
      }
      break;
    }
  }
}

PureState apply_clifford(const PureState& psi, const CliffordCircuit& circuit) {
  PureState out = psi;
  for (const CliffordGate& g : circuit.gates) apply_gate_in_place(out.amplitudes, out.num_qubits, g);
  return out;
}

Eigen::MatrixXcd apply_clifford_density(const Eigen::MatrixXcd& rho, int num_qubits,
                                        const CliffordCircuit& circuit) {
  // U rho U^dagger = (U (U rho)^dagger)^dagger, applying U column-wise twice.
  auto apply_cols = [&](Eigen::MatrixXcd m) {
    std::vector<cdouble> col(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) col[static_cast<std::size_t>(r)] = m(r, c);
      for (const CliffordGate& g : circuit.gates) apply_gate_in_place(col, num_qubits, g);
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = col[static_cast<std::size_t>(r)];
    }
    return m;
  };
  const Eigen::MatrixXcd half = apply_cols(rho);
  return apply_cols(half.adjoint()).adjoint();
}

CliffordCircuit random_clifford(int n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("random_clifford needs n >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> kind_dist(0, n > 1 ? 2 : 1);
  std::uniform_int_distribution<int> qubit_dist(0, n - 1);
  CliffordCircuit out;
  out.gates.reserve(static_cast<std::size_t>(20 * n));
  for (int i = 0; i < 20 * n; ++i) {
    switch (kind_dist(rng)) {
      case 0: out.gates.push_back(CliffordGate::hadamard(qubit_dist(rng))); break;
      case 1: out.gates.push_back(CliffordGate::phase(qubit_dist(rng))); break;
      default: {
        const int control = qubit_dist(rng);
        int target = qubit_dist(rng);
        while (target == control) target = qubit_dist(rng);
        out.gates.push_back(CliffordGate::cnot(control, target));
      }
    }
  }
  return out;
}

PureState random_stabilizer_state(int n, std::uint64_t seed) {
  return apply_clifford(zeros_state(n), random_clifford(n, seed));
}

}  // namespace stabent
