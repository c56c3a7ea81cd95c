#pragma once

#include <cstdint>
#include <vector>

#include "stabent/pauli.hpp"
#include "stabent/state.hpp"

namespace stabent {

// Characteristic distribution Xi_P = <psi|P|psi>^2 / 2^n over all 4^n
// Hermitian Paulis, indexed by PauliLabel::flat_index().
struct CharSpectrum {
  int num_qubits = 0;
  std::vector<double> xi;

  double at(const PauliLabel& p) const { return xi.at(p.flat_index()); }
  double sum() const;
};

// Materializes the full spectrum with the sectored transform: for each X-mask
// sector, v_b = conj(psi[b^x]) psi[b] is Walsh-transformed over z, giving all
// 2^n expectations of that sector in O(2^n log 2^n). Total O(4^n n) time,
// O(2^n) scratch per worker. Throws ResourceError when n exceeds max_qubits.
CharSpectrum char_spectrum(const PureState& psi, int max_qubits = kDefaultMaxQubits);

// Streaming reductions over the same kernel; none of them materializes the
// 4^n vector. Per sector the summands are reduced pairwise and the per-sector
// partials are combined in x order, so results do not depend on the worker
// count.

// sum_P (<P>^2)^alpha. stabilizer_purity is this divided by 2^n.
double pauli_moment_sum(const PureState& psi, double alpha, int max_qubits = kDefaultMaxQubits);

// Shannon entropy of Xi in bits; entries below 1e-300 contribute zero.
double xi_shannon_bits(const PureState& psi, int max_qubits = kDefaultMaxQubits);

// |{P : |<P>| >= 1 - tol}|, the size of the stabilizing set.
std::uint64_t count_unit_expectations(const PureState& psi, double tol,
                                      int max_qubits = kDefaultMaxQubits);

}  // namespace stabent
