#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "stabent/protocol.hpp"
#include "stabent/state.hpp"

namespace stabent {

struct TrialFailure {
  std::uint64_t seed = 0;
  std::string description;
  double margin = 0.0;
};

// Result of one randomized certification suite. Margins are signed slack of
// the tested inequality (RHS - LHS for <=-type checks); a suite passes iff no
// margin fell below -tolerance.
struct TrialReport {
  std::string suite;
  int trials = 0;
  double tolerance = 0.0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<TrialFailure> failures;
  std::vector<std::string> notes;

  bool passed() const { return failures.empty(); }
  void record(std::uint64_t seed, const std::string& what, double margin);
  std::string to_json() const;
};

struct VerifyOptions {
  int trials = 200;
  std::uint64_t seed = 1;
  std::vector<int> alphas{2, 3};
  int n = 3;                       // register size for the protocol suites
  int max_depth = 8;               // protocol depth drawn from [1, max_depth]
  int counterexample_n_max = 12;   // scan limit for the strong-monotonicity violation
};

// |psi> = sqrt(p)|0>|phi1> + sqrt(1-p)|1>|phi2>.
PureState split_state(double p, const PureState& phi1, const PureState& phi2);

// Single-case margins used by the suites and unit tests. Both right-hand
// sides of the split-state purity bound are evaluated: the binomial expansion
// and the summed (a+b)/(a-b) form.
struct SplitBoundMargins {
  double lhs;           // P_alpha(psi)
  double rhs_expanded;  // binomial form
  double rhs_summed;    // summed form
};
SplitBoundMargins split_purity_bound_case(double p, const PureState& phi1, const PureState& phi2,
                                          int alpha);
// M_alpha(psi) - min(M_alpha(phi1), M_alpha(phi2)); nonnegative when the
// branch-minimum bound holds.
double min_branch_margin(double p, const PureState& phi1, const PureState& phi2, int alpha);
// p P_alpha(phi1) + (1-p) P_alpha(phi2) - P_alpha(psi).
double average_purity_margin(double p, const PureState& phi1, const PureState& phi2, int alpha);

// Trial-state sampler: Haar states plus adversarial near-stabilizer states
// (stabilizer + eps Haar for eps in {1e-3, 1e-1}).
PureState random_trial_state(int n, std::uint64_t seed);

TrialReport check_split_purity_bound(const VerifyOptions& options);
TrialReport check_min_branch_bound(const VerifyOptions& options);
TrialReport check_average_purity_bound(const VerifyOptions& options);
TrialReport check_deterministic_monotonicity(const VerifyOptions& options);
TrialReport check_strong_monotonicity(const VerifyOptions& options);

struct CounterexampleScan {
  bool found = false;
  int n_found = 0;
  double m2_psi = 0.0;        // M_2 of the pre-measurement state at n_found
  double avg_after = 0.0;     // post-measurement average, (1/2) M_2(phi)
};
// Builds |psi> ~ |0^n> + |1>|phi_Haar>, measures qubit 0 and scans n = 2..n_max
// for the first strong-monotonicity violation of M_2.
CounterexampleScan counterexample_scan(int n_max, std::uint64_t seed,
                                       int max_qubits = kDefaultMaxQubits);
TrialReport check_counterexample(const VerifyOptions& options);

TrialReport check_property_chain(const VerifyOptions& options);

// All pure stabilizer states up to global phase; counts are validated against
// 2^n prod_{k<=n} (2^k + 1), i.e. 6, 60, 1080. n <= 3 only.
const std::vector<PureState>& enumerate_stabilizer_states(int n);

// Min-relative entropy of magic, -log2 max_sigma |<psi|sigma>|^2, by
// exhaustive search over the enumerated stabilizer states.
double d_min_bits(const PureState& psi);

// Suite dispatcher; name "all" runs everything.
std::vector<TrialReport> run_suites(const std::string& name, const VerifyOptions& options);
std::string reports_to_json(const std::vector<TrialReport>& reports);

}  // namespace stabent
