#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stabent/entropy.hpp"
#include "stabent/state.hpp"

namespace stabent {

// A conversion endpoint: a named magic family (exact rational purity) or an
// explicit state (numerical purity).
struct StateSpec {
  std::string label;
  std::optional<std::pair<MagicFamily, int>> family;  // family + m when named
  std::optional<PureState> state;

  static StateSpec named(MagicFamily f, int m);
  static StateSpec explicit_state(PureState psi, std::string label);
  // Accepts the CLI shorthand for the named families: t, cs, ccz, ckz:m, cks:m.
  static std::optional<StateSpec> parse(std::string_view text);

  double purity(int alpha) const;
  double entropy_bits(int alpha) const;
  std::optional<Rational> exact_purity(int alpha) const;
};

struct BoundReport {
  std::string source;
  std::string target;
  int alpha = 2;
  double rate_bound = 0.0;       // M_alpha(source) / M_alpha(target)
  double prob_bound = 0.0;       // min(1, M_lin(source) / M_lin(target))
  double rate_rounded_up = 0.0;  // rate bound rounded up at one decimal
  std::string source_purity_exact;  // "num/den" when the endpoint is named
  std::string target_purity_exact;
  bool headline = false;  // one of the four single-number bounds
};

// r[source -> target] <= M_alpha(source) / M_alpha(target). Throws when the
// target has no magic (conversion to free states is unconstrained).
double rate_bound(const StateSpec& source, const StateSpec& target, int alpha);

// pi_max <= min(1, M^lin_alpha(source) / M^lin_alpha(target)).
double prob_bound(const StateSpec& source, const StateSpec& target, int alpha);

BoundReport make_bound_report(const StateSpec& source, const StateSpec& target, int alpha);

// The six general-n conversion bounds (C^{n-1}Z and C^{n-1}S into T, CS, CCZ)
// evaluated for n in [n_lo, n_hi], followed by the four headline rows whose
// one-decimal round-ups are 0.9, 0.5, 0.8, 0.5.
std::vector<BoundReport> conversion_bound_table(int alpha = 2, int n_lo = 3, int n_hi = 8);

double round_up_one_decimal(double x);

std::string bounds_to_json(const std::vector<BoundReport>& table);
std::string bounds_to_text(const std::vector<BoundReport>& table);

}  // namespace stabent
