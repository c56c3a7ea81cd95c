#include "stabent/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include <nlohmann/json.hpp>

#include "stabent/clifford.hpp"
#include "stabent/entropy.hpp"
#include "stabent/errors.hpp"
#include "stabent/numeric.hpp"

namespace stabent {

void TrialReport::record(std::uint64_t seed, const std::string& what, double margin) {
  worst_margin = std::min(worst_margin, margin);
  if (margin < -tolerance) failures.push_back({seed, what, margin});
}

std::string TrialReport::to_json() const {
  std::vector<TrialFailure> ordered = failures;
  std::sort(ordered.begin(), ordered.end(),
            [](const TrialFailure& a, const TrialFailure& b) { return a.seed < b.seed; });
  nlohmann::json fails = nlohmann::json::array();
  for (const TrialFailure& f : ordered) {
    fails.push_back({{"seed", f.seed}, {"what", f.description}, {"margin", f.margin}});
  }
  nlohmann::json j{{"suite", suite},       {"trials", trials},
                   {"tolerance", tolerance}, {"worst_margin", worst_margin},
                   {"passed", passed()},     {"failures", std::move(fails)},
                   {"notes", notes}};
  return j.dump();
}

PureState split_state(double p, const PureState& phi1, const PureState& phi2) {
  if (phi1.num_qubits != phi2.num_qubits) {
    throw ValidationError("split_state components must share the qubit count");
  }
  if (p < 0.0 || p > 1.0) throw ValidationError("split probability must lie in [0, 1]");
  const std::size_t half = phi1.dim();
  PureState psi;
  psi.num_qubits = phi1.num_qubits + 1;
  psi.amplitudes.resize(2 * half);
  const double a = std::sqrt(p), b = std::sqrt(1.0 - p);
  for (std::size_t i = 0; i < half; ++i) {
    psi.amplitudes[i] = a * phi1.amplitudes[i];
    psi.amplitudes[half + i] = b * phi2.amplitudes[i];
  }
  return psi;
}

namespace {

double binomial(int n, int k) {
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
  return acc;
}

}  // namespace

SplitBoundMargins split_purity_bound_case(double p, const PureState& phi1, const PureState& phi2,
                                          int alpha) {
  if (alpha < 2) throw ValidationError("the split-state bound holds for integer alpha >= 2");
  const PureState psi = split_state(p, phi1, phi2);
  const double p1 = stabilizer_purity(phi1, static_cast<double>(alpha));
  const double p2 = stabilizer_purity(phi2, static_cast<double>(alpha));
  const double q = 1.0 - p;
  const double tail =
      std::pow(2.0, 2 * alpha - 1) * std::pow(p, alpha) * std::pow(q, alpha) * std::sqrt(p1 * p2);

  double expanded = 0.0;
  for (int i = 0; i <= alpha; ++i) {
    expanded += binomial(2 * alpha, 2 * i) * std::pow(p, 2 * i) * std::pow(q, 2 * (alpha - i)) *
                std::pow(p1, static_cast<double>(i) / alpha) *
                std::pow(p2, static_cast<double>(alpha - i) / alpha);
  }
  const double r1 = p * std::pow(p1, 1.0 / (2 * alpha));
  const double r2 = q * std::pow(p2, 1.0 / (2 * alpha));
  const double summed =
      0.5 * (std::pow(r1 + r2, 2 * alpha) + std::pow(r1 - r2, 2 * alpha));

  SplitBoundMargins out;
  out.lhs = stabilizer_purity(psi, static_cast<double>(alpha));
  out.rhs_expanded = expanded + tail;
  out.rhs_summed = summed + tail;
  return out;
}

double min_branch_margin(double p, const PureState& phi1, const PureState& phi2, int alpha) {
  const PureState psi = split_state(p, phi1, phi2);
  const double m = stabilizer_entropy_bits(psi, static_cast<double>(alpha));
  const double m1 = stabilizer_entropy_bits(phi1, static_cast<double>(alpha));
  const double m2 = stabilizer_entropy_bits(phi2, static_cast<double>(alpha));
  return m - std::min(m1, m2);
}

double average_purity_margin(double p, const PureState& phi1, const PureState& phi2, int alpha) {
  const PureState psi = split_state(p, phi1, phi2);
  const double lhs = stabilizer_purity(psi, static_cast<double>(alpha));
  const double rhs = p * stabilizer_purity(phi1, static_cast<double>(alpha)) +
                     (1.0 - p) * stabilizer_purity(phi2, static_cast<double>(alpha));
  return rhs - lhs;
}

PureState random_trial_state(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int pick = std::uniform_int_distribution<int>(0, 3)(rng);
  if (pick <= 1) return haar_state(n, derive_seed(seed, 11));
  const double eps = pick == 2 ? 1e-3 : 1e-1;
  const PureState sigma = random_stabilizer_state(n, derive_seed(seed, 12));
  const PureState noise = haar_state(n, derive_seed(seed, 13));
  PureState out;
  out.num_qubits = n;
  out.amplitudes.resize(sigma.dim());
  for (std::size_t i = 0; i < sigma.dim(); ++i) {
    out.amplitudes[i] = sigma.amplitudes[i] + eps * noise.amplitudes[i];
  }
  out.renormalize();
  return out;
}

namespace {

// Shared driver for the three split-state inequality suites.
template <typename Case>
TrialReport run_split_suite(const std::string& name, double tolerance, const VerifyOptions& options,
                            Case&& run_case) {
  TrialReport report;
  report.suite = name;
  report.tolerance = tolerance;
  for (int t = 0; t < options.trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(options.seed, t);
    std::mt19937_64 rng(trial_seed);
    const int n_minus_1 = std::uniform_int_distribution<int>(2, 3)(rng);
    const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const PureState phi1 = random_trial_state(n_minus_1, derive_seed(trial_seed, 1));
    const PureState phi2 = random_trial_state(n_minus_1, derive_seed(trial_seed, 2));
    for (int alpha : options.alphas) {
      if (alpha < 2) continue;  // the split-state bounds hold for integer alpha >= 2
      run_case(report, trial_seed, p, phi1, phi2, alpha);
    }
    ++report.trials;
  }
  return report;
}

}  // namespace

TrialReport check_split_purity_bound(const VerifyOptions& options) {
  return run_split_suite("split_bound", 1e-9, options,
                         [](TrialReport& report, std::uint64_t seed, double p, const PureState& phi1,
                            const PureState& phi2, int alpha) {
                           const SplitBoundMargins m = split_purity_bound_case(p, phi1, phi2, alpha);
                           report.record(seed, "expanded form, alpha=" + std::to_string(alpha),
                                         m.rhs_expanded - m.lhs);
                           report.record(seed, "summed form, alpha=" + std::to_string(alpha),
                                         m.rhs_summed - m.lhs);
                         });
}

TrialReport check_min_branch_bound(const VerifyOptions& options) {
  return run_split_suite("min_branch", 1e-9, options,
                         [](TrialReport& report, std::uint64_t seed, double p, const PureState& phi1,
                            const PureState& phi2, int alpha) {
                           report.record(seed, "alpha=" + std::to_string(alpha),
                                         min_branch_margin(p, phi1, phi2, alpha));
                         });
}

TrialReport check_average_purity_bound(const VerifyOptions& options) {
  return run_split_suite("average_purity", 1e-9, options,
                         [](TrialReport& report, std::uint64_t seed, double p, const PureState& phi1,
                            const PureState& phi2, int alpha) {
                           report.record(seed, "alpha=" + std::to_string(alpha),
                                         average_purity_margin(p, phi1, phi2, alpha));
                         });
}

namespace {

// One randomized (state, protocol) pair; the two monotonicity suites share it.
struct ProtocolTrial {
  PureState input;
  StateCollection output;
};

ProtocolTrial make_protocol_trial(const VerifyOptions& options, std::uint64_t trial_seed) {
  if (options.n > 5) throw ResourceError("monotonicity suites are limited to n <= 5");
  std::mt19937_64 rng(trial_seed);
  ProtocolTrial trial;
  trial.input = random_trial_state(options.n, derive_seed(trial_seed, 21));
  const int depth = std::uniform_int_distribution<int>(1, options.max_depth)(rng);
  const ProtocolProgram program = random_protocol(options.n, depth, derive_seed(trial_seed, 22));
  trial.output = run_protocol(trial.input, program).collection;
  return trial;
}

}  // namespace

TrialReport check_deterministic_monotonicity(const VerifyOptions& options) {
  TrialReport report;
  report.suite = "monotonicity";
  report.tolerance = 1e-8;
  for (int t = 0; t < options.trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(options.seed, t);
    const ProtocolTrial trial = make_protocol_trial(options, trial_seed);
    if (!trial.output.all_pure()) continue;
    for (int alpha : options.alphas) {
      if (alpha < 2) continue;  // monotonicity is only claimed for alpha >= 2
      const double m_in = stabilizer_entropy_bits(trial.input, static_cast<double>(alpha));
      if (is_deterministic_pure(trial.output)) {
        const double m_out =
            stabilizer_entropy_bits(trial.output.entries.front().pure(), static_cast<double>(alpha));
        report.record(trial_seed, "deterministic, alpha=" + std::to_string(alpha), m_in - m_out);
      }
      double min_branch = std::numeric_limits<double>::infinity();
      for (const auto& e : trial.output.entries) {
        min_branch =
            std::min(min_branch, stabilizer_entropy_bits(e.pure(), static_cast<double>(alpha)));
      }
      report.record(trial_seed, "min-branch, alpha=" + std::to_string(alpha), m_in - min_branch);
    }
    ++report.trials;
  }
  return report;
}

TrialReport check_strong_monotonicity(const VerifyOptions& options) {
  TrialReport report;
  report.suite = "strong_monotonicity";
  report.tolerance = 1e-8;
  for (int t = 0; t < options.trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(options.seed, t);
    const ProtocolTrial trial = make_protocol_trial(options, trial_seed);
    if (!trial.output.all_pure()) continue;
    for (int alpha : options.alphas) {
      if (alpha < 2) continue;
      const double lin_in = linear_stabilizer_entropy(trial.input, static_cast<double>(alpha));
      double avg = 0.0;
      for (const auto& e : trial.output.entries) {
        avg += e.weight * linear_stabilizer_entropy(e.pure(), static_cast<double>(alpha));
      }
      report.record(trial_seed, "average-linear, alpha=" + std::to_string(alpha), lin_in - avg);
    }
    ++report.trials;
  }
  return report;
}

CounterexampleScan counterexample_scan(int n_max, std::uint64_t seed, int max_qubits) {
  if (n_max > max_qubits) throw ResourceError("counterexample scan limited to n <= max_qubits");
  CounterexampleScan out;
  for (int n = 2; n <= n_max; ++n) {
    const PureState phi = haar_state(n - 1, derive_seed(seed, static_cast<std::uint64_t>(n)));
    const PureState psi = split_state(0.5, zeros_state(n - 1), phi);
    const double m2_phi = stabilizer_entropy_bits(phi, 2.0, max_qubits);
    const double m2_psi = stabilizer_entropy_bits(psi, 2.0, max_qubits);
    // Measuring qubit 0 gives {(1/2, |0^{n-1}>), (1/2, phi)}: the average
    // post-measurement entropy is M_2(phi)/2.
    if (0.5 * m2_phi > m2_psi) {
      out.found = true;
      out.n_found = n;
      out.m2_psi = m2_psi;
      out.avg_after = 0.5 * m2_phi;
      return out;
    }
  }
  return out;
}

TrialReport check_counterexample(const VerifyOptions& options) {
  TrialReport report;
  report.suite = "counterexample";
  report.tolerance = 0.0;
  const CounterexampleScan scan = counterexample_scan(options.counterexample_n_max, options.seed);
  report.trials = 1;
  if (scan.found) {
    report.worst_margin = scan.avg_after - scan.m2_psi;
    report.notes.push_back("violation at n = " + std::to_string(scan.n_found) +
                           ": average after measurement " + std::to_string(scan.avg_after) +
                           " > M_2(psi) = " + std::to_string(scan.m2_psi));
  } else {
    report.record(options.seed,
                  "no strong-monotonicity violation found up to n = " +
                      std::to_string(options.counterexample_n_max),
                  -1.0);
  }
  return report;
}

// --- stabilizer enumeration and the property chain --------------------------

namespace {

std::vector<std::int64_t> canonical_key(const PureState& psi) {
  // Fix the global phase by the first significant amplitude, then quantize.
  // Canonicalized stabilizer amplitudes have re/im in {0, +-2^{-j/2}}, spaced
  // ~0.1 apart, so the 2^-14 grid sits far above float noise and far below
  // the value spacing.
  cdouble phase{1.0, 0.0};
  for (const cdouble& a : psi.amplitudes) {
    if (std::abs(a) > 1e-6) {
      phase = std::conj(a) / std::abs(a);
      break;
    }
  }
  std::vector<std::int64_t> key;
  key.reserve(2 * psi.dim());
  for (const cdouble& a : psi.amplitudes) {
    const cdouble v = a * phase;
    key.push_back(std::llround(v.real() * 16384.0));
    key.push_back(std::llround(v.imag() * 16384.0));
  }
  return key;
}

std::uint64_t expected_stabilizer_count(int n) {
  std::uint64_t count = std::uint64_t{1} << n;
  for (int k = 1; k <= n; ++k) count *= (std::uint64_t{1} << k) + 1;
  return count;
}

}  // namespace

const std::vector<PureState>& enumerate_stabilizer_states(int n) {
  if (n < 1 || n > 3) throw ResourceError("stabilizer enumeration is limited to n in {1, 2, 3}");
  static std::mutex cache_mutex;
  static std::map<int, std::vector<PureState>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<CliffordGate> generators;
  for (int q = 0; q < n; ++q) generators.push_back(CliffordGate::hadamard(q));
  for (int q = 0; q < n; ++q) generators.push_back(CliffordGate::phase(q));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a != b) generators.push_back(CliffordGate::cnot(a, b));
    }
  }

  std::map<std::vector<std::int64_t>, PureState> seen;
  std::vector<PureState> frontier{zeros_state(n)};
  seen.emplace(canonical_key(frontier.front()), frontier.front());
  while (!frontier.empty()) {
    std::vector<PureState> next;
    for (const PureState& psi : frontier) {
      for (const CliffordGate& g : generators) {
        PureState image = psi;
        apply_gate_in_place(image.amplitudes, n, g);
        auto key = canonical_key(image);
        auto [slot, inserted] = seen.emplace(std::move(key), std::move(image));
        if (inserted) next.push_back(slot->second);
      }
    }
    frontier = std::move(next);
  }

  std::vector<PureState> states;
  states.reserve(seen.size());
  for (auto& [key, psi] : seen) states.push_back(std::move(psi));
  if (states.size() != expected_stabilizer_count(n)) {
    throw NumericalError("stabilizer enumeration found " + std::to_string(states.size()) +
                         " states at n = " + std::to_string(n) + ", expected " +
                         std::to_string(expected_stabilizer_count(n)));
  }
  return cache.emplace(n, std::move(states)).first->second;
}

double d_min_bits(const PureState& psi) {
  double best = 0.0;
  for (const PureState& sigma : enumerate_stabilizer_states(psi.num_qubits)) {
    best = std::max(best, psi.fidelity(sigma));
  }
  return -std::log2(best);
}

TrialReport check_property_chain(const VerifyOptions& options) {
  TrialReport report;
  report.suite = "property_chain";
  // Each sub-check bakes its own stated tolerance into the margin, so any
  // negative margin is a violation.
  report.tolerance = 0.0;

  // Additivity and ordering on random pairs.
  for (int t = 0; t < options.trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(options.seed, 1000 + t);
    std::mt19937_64 rng(trial_seed);
    const int n1 = std::uniform_int_distribution<int>(1, 3)(rng);
    const int n2 = std::uniform_int_distribution<int>(1, 3)(rng);
    const PureState a = random_trial_state(n1, derive_seed(trial_seed, 1));
    const PureState b = random_trial_state(n2, derive_seed(trial_seed, 2));
    const PureState ab = tensor(a, b);
    for (double alpha : {1.0, 2.0, 3.0}) {
      const double gap = std::abs(stabilizer_entropy_bits(ab, alpha) -
                                  stabilizer_entropy_bits(a, alpha) -
                                  stabilizer_entropy_bits(b, alpha));
      report.record(trial_seed, "additivity, alpha=" + std::to_string(alpha), 1e-8 - gap);
    }

    const int n = std::uniform_int_distribution<int>(2, 5)(rng);
    const PureState psi = random_trial_state(n, derive_seed(trial_seed, 3));
    double prev = stabilizer_entropy_bits(psi, 1.0);
    for (double alpha : {2.0, 3.0, 4.0}) {
      const double cur = stabilizer_entropy_bits(psi, alpha);
      report.record(trial_seed, "ordering at alpha=" + std::to_string(alpha), prev - cur + 1e-9);
      prev = cur;
    }

    // Upper bounds and nullity domination.
    const double d = std::pow(2.0, n);
    for (double alpha : {2.0, 3.0}) {
      const double m = stabilizer_entropy_bits(psi, alpha);
      report.record(trial_seed, "bound M <= n", n - m + 1e-9);
      report.record(trial_seed, "bound M <= log2(d+1)-1", std::log2(d + 1.0) - 1.0 - m + 1e-9);
      try {
        const int nu = stabilizer_nullity(psi);
        report.record(trial_seed, "nullity domination", nu - m + 1e-9);
      } catch (const NumericalError&) {
        // nu not well-defined at this tolerance; nothing to assert.
      }
    }

    // Clifford invariance of the spectrum as a multiset.
    const int nc = std::uniform_int_distribution<int>(1, 4)(rng);
    const PureState base = random_trial_state(nc, derive_seed(trial_seed, 4));
    const PureState rotated = apply_clifford(base, random_clifford(nc, derive_seed(trial_seed, 5)));
    CharSpectrum s0 = char_spectrum(base);
    CharSpectrum s1 = char_spectrum(rotated);
    std::sort(s0.xi.begin(), s0.xi.end());
    std::sort(s1.xi.begin(), s1.xi.end());
    double max_gap = 0.0;
    for (std::size_t i = 0; i < s0.xi.size(); ++i) {
      max_gap = std::max(max_gap, std::abs(s0.xi[i] - s1.xi[i]));
    }
    report.record(trial_seed, "Clifford invariance", 1e-9 - max_gap);
    ++report.trials;
  }

  // D_min chain at n <= 3 via full enumeration (also checks the counts).
  for (int n = 1; n <= 3; ++n) {
    const auto& stabs = enumerate_stabilizer_states(n);
    report.notes.push_back("stabilizer states at n=" + std::to_string(n) + ": " +
                           std::to_string(stabs.size()));
    for (std::size_t i = 0; i < stabs.size(); ++i) {
      const double m2 = stabilizer_entropy_bits(stabs[i], 2.0);
      report.record(i, "faithfulness on stabilizer states", 1e-10 - std::abs(m2));
    }
  }
  for (const char* name : {"t", "cs", "ccz"}) {
    const PureState psi = *make_named_state(name);
    const double m2 = stabilizer_entropy_bits(psi, 2.0);
    report.record(0, std::string("faithfulness: M_2(") + name + ") > 1e-6", m2 - 1e-6);
    report.record(0, std::string("D_min bound for ") + name, 4.0 * d_min_bits(psi) - m2 + 1e-9);
  }
  for (int t = 0; t < std::min(options.trials, 50); ++t) {
    const std::uint64_t trial_seed = derive_seed(options.seed, 5000 + t);
    std::mt19937_64 rng(trial_seed);
    const int n = std::uniform_int_distribution<int>(1, 3)(rng);
    const PureState psi = random_trial_state(n, trial_seed);
    const double m2 = stabilizer_entropy_bits(psi, 2.0);
    report.record(trial_seed, "D_min bound", 4.0 * d_min_bits(psi) - m2 + 1e-9);
  }

  // Fannes-type continuity of M_1 on random pairs.
  for (int t = 0; t < options.trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(options.seed, 9000 + t);
    std::mt19937_64 rng(trial_seed);
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    PureState a = random_trial_state(n, derive_seed(trial_seed, 1));
    PureState b;
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
      b = random_trial_state(n, derive_seed(trial_seed, 2));
    } else {
      // Nearby pair: the binary-entropy part of the bound dominates there.
      b = a;
      const PureState noise = haar_state(n, derive_seed(trial_seed, 3));
      for (std::size_t i = 0; i < b.amplitudes.size(); ++i) {
        b.amplitudes[i] += 1e-2 * noise.amplitudes[i];
      }
      b.renormalize();
    }
    const double lhs = std::abs(stabilizer_entropy_bits(a, 1.0) - stabilizer_entropy_bits(b, 1.0));
    const double trace_norm = 2.0 * std::sqrt(std::max(0.0, 1.0 - a.fidelity(b)));
    const double d = std::pow(2.0, n);
    const double rhs = trace_norm * std::log2(d * d - 1.0) +
                       (trace_norm <= 0.5 ? binary_entropy_bits(trace_norm) : 1.0);
    report.record(trial_seed, "Fannes bound", rhs - lhs);
  }

  return report;
}

std::vector<TrialReport> run_suites(const std::string& name, const VerifyOptions& options) {
  std::vector<TrialReport> reports;
  const bool all = name == "all";
  if (all || name == "split_bound") reports.push_back(check_split_purity_bound(options));
  if (all || name == "min_branch") reports.push_back(check_min_branch_bound(options));
  if (all || name == "average_purity") reports.push_back(check_average_purity_bound(options));
  if (all || name == "monotonicity") reports.push_back(check_deterministic_monotonicity(options));
  if (all || name == "strong_monotonicity") reports.push_back(check_strong_monotonicity(options));
  if (all || name == "counterexample") reports.push_back(check_counterexample(options));
  if (all || name == "property_chain") reports.push_back(check_property_chain(options));
  if (reports.empty()) {
    throw ValidationError("unknown suite: " + name +
                          " (expected all, split_bound, min_branch, average_purity, monotonicity, "
                          "strong_monotonicity, counterexample, property_chain)");
  }
  return reports;
}

std::string reports_to_json(const std::vector<TrialReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const TrialReport& r : reports) arr.push_back(nlohmann::json::parse(r.to_json()));
  return arr.dump(2);
}

}  // namespace stabent
