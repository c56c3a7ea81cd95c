#include "stabent/pauli.hpp"

#include <bit>
#include <cmath>

#include "stabent/errors.hpp"

namespace stabent {

PauliLabel PauliLabel::from_masks(int n, std::uint64_t x, std::uint64_t z) {
  if (n < 1 || n > 62) throw ValidationError("bad qubit count for PauliLabel");
  const std::uint64_t valid = (n == 62) ? ~std::uint64_t{0} >> 2 : (std::uint64_t{1} << n) - 1;
  if ((x & ~valid) || (z & ~valid)) throw ValidationError("Pauli mask exceeds qubit count");
  return PauliLabel{n, x, z};
}

PauliLabel PauliLabel::from_string(std::string_view letters) {
  const int n = static_cast<int>(letters.size());
  std::uint64_t x = 0, z = 0;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    switch (letters[q]) {
      case 'I': break;
      case 'X': x |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      case 'Z': z |= bit; break;
      default: throw ValidationError("Pauli letters must be one of I, X, Y, Z");
    }
  }
  return from_masks(n, x, z);
}

PauliLabel PauliLabel::from_index(int n, std::uint64_t index) {
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  return from_masks(n, index >> n, index & mask);
}

char PauliLabel::letter_at(int qubit) const {
  const std::uint64_t bit = qubit_bit(num_qubits, qubit);
  const bool x = x_mask & bit, z = z_mask & bit;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::string PauliLabel::to_string() const {
  std::string s(static_cast<std::size_t>(num_qubits), 'I');
  for (int q = 0; q < num_qubits; ++q) s[static_cast<std::size_t>(q)] = letter_at(q);
  return s;
}

double pauli_expectation(const PureState& psi, const PauliLabel& p) {
  if (psi.num_qubits != p.num_qubits) {
    throw ValidationError("pauli_expectation: state has " + std::to_string(psi.num_qubits) +
                          " qubits, Pauli acts on " + std::to_string(p.num_qubits));
  }
  // P|b> = i^{x.z} (-1)^{z.b} |b ^ x>, so <psi|P|psi> = i^{x.z} sum_b
  // conj(psi[b^x]) psi[b] (-1)^{popcount(z & b)}.
  cdouble acc{0.0, 0.0};
  const std::size_t dim = psi.dim();
  for (std::size_t b = 0; b < dim; ++b) {
    const cdouble term = std::conj(psi.amplitudes[b ^ p.x_mask]) * psi.amplitudes[b];
    acc += (std::popcount(b & p.z_mask) & 1) ? -term : term;
  }
  static constexpr cdouble kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  acc *= kPhases[std::popcount(p.x_mask & p.z_mask) & 3];
  if (std::abs(acc.imag()) > 1e-10 * static_cast<double>(dim)) {
    throw NumericalError("pauli_expectation produced a non-real value; state is likely invalid");
  }
  return acc.real();
}

}  // namespace stabent
