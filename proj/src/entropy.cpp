#include "stabent/entropy.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stabent/errors.hpp"

namespace stabent {

RenyiIndex::RenyiIndex(double a) : alpha(a) {
  if (!std::isfinite(a) || a < 0.0) {
    throw ValidationError("Renyi index must be finite and >= 0");
  }
}

double stabilizer_purity(const PureState& psi, RenyiIndex alpha, int max_qubits) {
  const double d = static_cast<double>(psi.dim());
  return pauli_moment_sum(psi, alpha.alpha, max_qubits) / d;
}

double stabilizer_entropy_bits(const PureState& psi, RenyiIndex alpha, int max_qubits) {
  if (alpha.is_unit()) {
    return xi_shannon_bits(psi, max_qubits) - static_cast<double>(psi.num_qubits);
  }
  return std::log2(stabilizer_purity(psi, alpha, max_qubits)) / (1.0 - alpha.alpha);
}

double linear_stabilizer_entropy(const PureState& psi, RenyiIndex alpha, int max_qubits) {
  return 1.0 - stabilizer_purity(psi, alpha, max_qubits);
}

int stabilizer_nullity(const PureState& psi, double tol, int max_qubits) {
  const std::uint64_t count = count_unit_expectations(psi, tol, max_qubits);
  if (count == 0 || !std::has_single_bit(count)) {
    throw NumericalError("stabilizing set has size " + std::to_string(count) +
                         ", not a power of two; tighten the tolerance (tol = " +
                         std::to_string(tol) + ")");
  }
  return psi.num_qubits - std::countr_zero(count);
}

std::string EntropyReport::to_json() const {
  nlohmann::json j{{"alpha", alpha},
                   {"purity", purity},
                   {"entropy_bits", entropy_bits},
                   {"linear", linear},
                   {"nullity", nullity}};
  return j.dump();
}

EntropyReport entropy_report(const PureState& psi, RenyiIndex alpha, double nullity_tol,
                             int max_qubits) {
  EntropyReport r;
  r.alpha = alpha.alpha;
  r.purity = stabilizer_purity(psi, alpha, max_qubits);
  r.entropy_bits = stabilizer_entropy_bits(psi, alpha, max_qubits);
  r.linear = 1.0 - r.purity;
  r.nullity = stabilizer_nullity(psi, nullity_tol, max_qubits);
  return r;
}

namespace {

using BigInt = boost::multiprecision::cpp_int;

BigInt ipow(BigInt base, int exp) {
  BigInt out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

Rational closed_form_purity(MagicFamily family, int m, int alpha) {
  if (alpha < 1) throw ValidationError("closed forms require integer alpha >= 1");
  switch (family) {
    case MagicFamily::T:
      return Rational(ipow(2, alpha) + 2, ipow(2, alpha + 1));
    case MagicFamily::CkZ: {
      if (m < 1) throw ValidationError("CkZ needs m >= 1");
      const BigInt d = ipow(2, m);
      const BigInt num = ipow(d, 2 * alpha) + (d - 1) * ipow(d - 4, 2 * alpha) +
                         (d - 1) * (d - 2) / 2 * ipow(4, 2 * alpha);
      return Rational(num, ipow(d, 2 * alpha + 1));
    }
    case MagicFamily::CkS: {
      if (m < 1) throw ValidationError("CkS needs m >= 1");
      const BigInt d = ipow(2, m);
      const BigInt num = ipow(d, 2 * alpha) + (d - 1) * ipow(d - 2, 2 * alpha) +
                         ipow(4, alpha) * (d - 1) * (d - 1);
      return Rational(num, ipow(d, 2 * alpha + 1));
    }
  }
  throw ValidationError("unknown magic family");
}

double closed_form_entropy_bits(MagicFamily family, int m, int alpha) {
  if (alpha < 2) throw ValidationError("closed-form entropy requires integer alpha >= 2");
  const Rational p = closed_form_purity(family, m, alpha);
  return std::log2(rational_to_double(p)) / (1.0 - alpha);
}

double rational_to_double(const Rational& r) { return r.convert_to<double>(); }

std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(r) << "/" << boost::multiprecision::denominator(r);
  return os.str();
}

}  // namespace stabent
