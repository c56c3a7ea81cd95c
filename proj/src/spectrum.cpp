#include "stabent/spectrum.hpp"

#include <cmath>
#include <cstring>

#include "stabent/errors.hpp"
#include "stabent/numeric.hpp"

namespace stabent {

namespace {

void check_spectrum_size(const PureState& psi, int max_qubits) {
  if (psi.num_qubits > max_qubits) {
    const double cost = std::pow(4.0, psi.num_qubits);
    throw ResourceError("full Pauli spectrum at n = " + std::to_string(psi.num_qubits) +
                        " needs 4^n = " + std::to_string(static_cast<std::uint64_t>(cost)) +
                        " entries; limit is n = " + std::to_string(max_qubits));
  }
}

// In-place Walsh transform (sign kernel): w[z] = sum_b (-1)^{z.b} v[b].
void walsh_in_place(cdouble* v, std::size_t dim) {
  for (std::size_t len = 1; len < dim; len <<= 1) {
    for (std::size_t block = 0; block < dim; block += len << 1) {
      for (std::size_t j = block; j < block + len; ++j) {
        const cdouble a = v[j];
        const cdouble b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
    }
  }
}

// Runs the sectored transform and hands each finished sector (all squared
// expectations for one X-mask) to the visitor. Sectors are distributed over
// workers; each worker owns a contiguous x range and private scratch.
template <typename SectorVisitor>
void for_each_sector(const PureState& psi, SectorVisitor&& visit) {
  const std::size_t dim = psi.dim();
  const cdouble* amps = psi.amplitudes.data();
  parallel_ranges(dim, /*serial_cutoff=*/128, [&](std::size_t x_begin, std::size_t x_end) {
    std::vector<cdouble> scratch(dim);
    std::vector<double> squares(dim);
    for (std::size_t x = x_begin; x < x_end; ++x) {
      for (std::size_t b = 0; b < dim; ++b) scratch[b] = std::conj(amps[b ^ x]) * amps[b];
      walsh_in_place(scratch.data(), dim);
      // The Hermitian phase i^{x.z} has unit modulus, so <P>^2 = |w[z]|^2.
      for (std::size_t z = 0; z < dim; ++z) squares[z] = std::norm(scratch[z]);
      visit(x, squares);
    }
  });
}

// Deterministic full reduction: per-sector pairwise sums stored by sector
// index, then combined pairwise in fixed order.
template <typename Term>
double sector_reduce(const PureState& psi, Term&& term) {
  const std::size_t dim = psi.dim();
  std::vector<double> partials(dim, 0.0);
  for_each_sector(psi, [&](std::size_t x, const std::vector<double>& squares) {
    thread_local std::vector<double> local;
    local.resize(squares.size());
    for (std::size_t z = 0; z < squares.size(); ++z) local[z] = term(squares[z]);
    partials[x] = pairwise_sum(local);
  });
  return pairwise_sum(partials);
}

}  // namespace

double CharSpectrum::sum() const { return pairwise_sum(xi); }

CharSpectrum char_spectrum(const PureState& psi, int max_qubits) {
  check_spectrum_size(psi, max_qubits);
  const std::size_t dim = psi.dim();
  CharSpectrum out;
  out.num_qubits = psi.num_qubits;
  out.xi.resize(dim * dim);
  const double inv_d = 1.0 / static_cast<double>(dim);
  for_each_sector(psi, [&](std::size_t x, const std::vector<double>& squares) {
    double* row = out.xi.data() + x * dim;
    for (std::size_t z = 0; z < dim; ++z) row[z] = squares[z] * inv_d;
  });
  return out;
}

double pauli_moment_sum(const PureState& psi, double alpha, int max_qubits) {
  check_spectrum_size(psi, max_qubits);
  if (alpha == 2.0) {
    return sector_reduce(psi, [](double s) { return s * s; });
  }
  if (alpha == 3.0) {
    return sector_reduce(psi, [](double s) { return s * s * s; });
  }
  if (alpha == 4.0) {
    return sector_reduce(psi, [](double s) {
      const double s2 = s * s;
      return s2 * s2;
    });
  }
  if (alpha == 1.0) {
    return sector_reduce(psi, [](double s) { return s; });
  }
  return sector_reduce(psi, [alpha](double s) { return s > 0.0 ? std::pow(s, alpha) : 0.0; });
}

double xi_shannon_bits(const PureState& psi, int max_qubits) {
  check_spectrum_size(psi, max_qubits);
  const double inv_d = 1.0 / static_cast<double>(psi.dim());
  return sector_reduce(psi, [inv_d](double s) {
    const double xi = s * inv_d;
    return xi > 1e-300 ? -xi * std::log2(xi) : 0.0;
  });
}

std::uint64_t count_unit_expectations(const PureState& psi, double tol, int max_qubits) {
  check_spectrum_size(psi, max_qubits);
  const double threshold = (1.0 - tol) * (1.0 - tol);
  // Integer counts commute, so a plain sum of sector counts is exact.
  const double total = sector_reduce(psi, [threshold](double s) { return s >= threshold ? 1.0 : 0.0; });
  return static_cast<std::uint64_t>(std::llround(total));
}

}  // namespace stabent
