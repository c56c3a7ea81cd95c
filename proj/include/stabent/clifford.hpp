#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stabent/state.hpp"

namespace stabent {

struct CliffordGate {
  enum class Kind { H, S, CNOT, X, Y, Z };
  Kind kind;
  int q0 = 0;
  int q1 = -1;  // CNOT target

  static CliffordGate hadamard(int q) { return {Kind::H, q, -1}; }
  static CliffordGate phase(int q) { return {Kind::S, q, -1}; }
  static CliffordGate cnot(int control, int target) { return {Kind::CNOT, control, target}; }
  static CliffordGate pauli_x(int q) { return {Kind::X, q, -1}; }
  static CliffordGate pauli_y(int q) { return {Kind::Y, q, -1}; }
  static CliffordGate pauli_z(int q) { return {Kind::Z, q, -1}; }

  std::string name() const;
};

struct CliffordCircuit {
  std::vector<CliffordGate> gates;
};

// U|psi>. Each gate costs O(2^n); the output stays normalized to float noise.
PureState apply_clifford(const PureState& psi, const CliffordCircuit& circuit);
void apply_gate_in_place(std::vector<cdouble>& amps, int num_qubits, const CliffordGate& gate);

// U rho U^dagger on a dense matrix.
Eigen::MatrixXcd apply_clifford_density(const Eigen::MatrixXcd& rho, int num_qubits,
                                        const CliffordCircuit& circuit);

// Seeded gate sequence of length 20*n, uniform over {H, S, CNOT} with uniform
// qubit choices (no CNOT when n = 1). Coverage generator for invariance
// trials, not a uniform sample of the Clifford group.
CliffordCircuit random_clifford(int n, std::uint64_t seed);

// random_clifford applied to |0...0>.
PureState random_stabilizer_state(int n, std::uint64_t seed);

}  // namespace stabent
