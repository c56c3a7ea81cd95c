#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace stabent {

using cdouble = std::complex<double>;

// Largest n accepted by the full-spectrum kernels (4^n cost).
inline constexpr int kDefaultMaxQubits = 13;

// Basis convention used throughout: basis index b enumerates bit strings
// b_1...b_n with qubit 0 as the most significant bit, so qubit q lives at
// bit position (n-1-q) of the index.
inline std::uint64_t qubit_bit(int num_qubits, int qubit) {
  return std::uint64_t{1} << (num_qubits - 1 - qubit);
}

// Dense n-qubit pure state. Amplitudes are kept normalized; the constructor
// rejects vectors whose norm deviates from 1 by more than 1e-10 (relative).
struct PureState {
  int num_qubits = 0;
  std::vector<cdouble> amplitudes;

  PureState() = default;
  PureState(int n, std::vector<cdouble> amps);

  static PureState basis(int n, std::uint64_t index);

  std::size_t dim() const { return amplitudes.size(); }
  double norm() const;
  void renormalize();

  cdouble inner(const PureState& other) const;  // <this|other>
  double fidelity(const PureState& other) const;
};

PureState tensor(const PureState& a, const PureState& b);

// Named resource/test states.
PureState zeros_state(int n);
PureState plus_state();
PureState t_state();
// |C^{m-1}Z>: amplitudes 2^{-m/2} (-1)^{b_1...b_m}. m = 1 gives |->.
PureState ckz_state(int m);
// |C^{m-1}S>: amplitudes 2^{-m/2} i^{b_1...b_m}.
PureState cks_state(int m);
// Haar sample: i.i.d. standard complex Gaussians, normalized; deterministic
// in the seed.
PureState haar_state(int n, std::uint64_t seed);

// Parses the CLI shorthand: T | plus | cs | ccz | ckz:m | cks:m | zeros:n |
// haar:n:seed. Returns nullopt for unknown shorthands.
std::optional<PureState> make_named_state(std::string_view name);

// Dense density matrix with a cached eigendecomposition of the significant
// part of the spectrum. Construction validates hermiticity (1e-10), unit
// trace (1e-10) and positivity (eigenvalues >= -1e-10).
class DensityState {
 public:
  struct EigenPair {
    double value;
    Eigen::VectorXcd vector;
  };

  DensityState(int n, Eigen::MatrixXcd matrix, double rank_cutoff = 1e-10);

  static DensityState from_pure(const PureState& psi);
  static DensityState mixture(const std::vector<std::pair<double, PureState>>& terms);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  // Eigenpairs with eigenvalue above the rank cutoff, descending.
  const std::vector<EigenPair>& eigen_pairs() const { return eigen_pairs_; }
  int rank() const { return static_cast<int>(eigen_pairs_.size()); }
  double largest_eigenvalue() const;

 private:
  int num_qubits_ = 0;
  Eigen::MatrixXcd matrix_;
  std::vector<EigenPair> eigen_pairs_;
};

// State file format: {"n": int, "amplitudes": [[re, im], ...]}, basis order
// as above.
PureState read_state_json(const std::string& path);
void write_state_json(const PureState& psi, const std::string& path);
PureState state_from_json_text(const std::string& text);
std::string state_to_json_text(const PureState& psi);

}  // namespace stabent
