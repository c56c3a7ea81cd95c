#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "stabent/state.hpp"

namespace stabent {

// Hermitian n-qubit Pauli operator i^{x.z} X^x Z^z, stored as the two bit
// masks in basis-index bit space (bit n-1-q of each mask acts on qubit q).
// With the i^{x.z} phase every operator squares to the identity and has a
// real expectation value on any state.
struct PauliLabel {
  int num_qubits = 0;
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;

  static PauliLabel from_masks(int n, std::uint64_t x, std::uint64_t z);
  // "XIZ": one letter per qubit, qubit 0 first.
  static PauliLabel from_string(std::string_view letters);
  // Flat spectrum index (x_mask << n) | z_mask.
  static PauliLabel from_index(int n, std::uint64_t index);

  std::uint64_t flat_index() const { return (x_mask << num_qubits) | z_mask; }
  char letter_at(int qubit) const;
  std::string to_string() const;
  bool is_identity() const { return x_mask == 0 && z_mask == 0; }
};

// <psi|P|psi> for the Hermitian convention operator; the imaginary residue
// (pure floating noise) must stay below 1e-10 and is truncated.
double pauli_expectation(const PureState& psi, const PauliLabel& p);

}  // namespace stabent
