#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "stabent/spectrum.hpp"
#include "stabent/state.hpp"

namespace stabent {

using Rational = boost::multiprecision::cpp_rational;

// Renyi index. alpha = 1 is routed to the Shannon limit of the entropy.
struct RenyiIndex {
  double alpha;
  RenyiIndex(double a);  // NOLINT(runtime/explicit): call sites pass plain numbers
  bool is_unit() const { return alpha == 1.0; }
};

// P_alpha(psi) = 2^{-n} sum_P |<psi|P|psi>|^{2 alpha}.
double stabilizer_purity(const PureState& psi, RenyiIndex alpha, int max_qubits = kDefaultMaxQubits);

// M_alpha in bits: log2(P_alpha)/(1-alpha), with the alpha -> 1 limit
// H(Xi) - n.
double stabilizer_entropy_bits(const PureState& psi, RenyiIndex alpha,
                               int max_qubits = kDefaultMaxQubits);

// M_alpha^lin = 1 - P_alpha.
double linear_stabilizer_entropy(const PureState& psi, RenyiIndex alpha,
                                 int max_qubits = kDefaultMaxQubits);

// nu = n - log2 |{P : |<P>| >= 1 - tol}|. The counted set is a group, so a
// non-power-of-two count signals numerical degeneracy and throws.
int stabilizer_nullity(const PureState& psi, double tol = 1e-8, int max_qubits = kDefaultMaxQubits);

struct EntropyReport {
  double alpha;
  double purity;
  double entropy_bits;
  double linear;
  int nullity;

  std::string to_json() const;
};

EntropyReport entropy_report(const PureState& psi, RenyiIndex alpha, double nullity_tol = 1e-8,
                             int max_qubits = kDefaultMaxQubits);

enum class MagicFamily { T, CkZ, CkS };

// Exact stabilizer purity of the named families at integer alpha >= 1.
//   T:   (2^a + 2) / 2^{a+1}
//   CkZ: [d^{2a} + (d-1)(d-4)^{2a} + (d-1)(d-2)/2 * 4^{2a}] / d^{2a+1}, d = 2^m
//   CkS: [d^{2a} + (d-1)(d-2)^{2a} + 4^a (d-1)^2] / d^{2a+1}
// The CkZ third-term coefficient is the one consistent with the explicit
// alpha = 2 rate polynomials and with brute-force spectra ((d-1)(d-2)/2 *
// (4/d)^{2a}, i.e. 2^{4a-1}(d^2-3d+2)/d^{2a}); the compact closed form as
// printed elsewhere carries 2^{a-1} in that slot instead, which disagrees
// with both for every m >= 3.
Rational closed_form_purity(MagicFamily family, int m, int alpha);

// M_alpha in bits from the exact purity: log2(P_alpha)/(1 - alpha), alpha >= 2.
double closed_form_entropy_bits(MagicFamily family, int m, int alpha);

double rational_to_double(const Rational& r);
std::string rational_to_string(const Rational& r);

}  // namespace stabent
