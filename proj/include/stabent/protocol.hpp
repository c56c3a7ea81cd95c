#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "stabent/clifford.hpp"
#include "stabent/state.hpp"

namespace stabent {

// Weighted collection of output states. Entries may have different qubit
// counts; weights sum to 1 up to logged renormalization events.
struct StateCollection {
  struct Entry {
    double weight;
    std::variant<PureState, DensityState> state;

    bool is_pure() const { return std::holds_alternative<PureState>(state); }
    const PureState& pure() const { return std::get<PureState>(state); }
    const DensityState& density() const { return std::get<DensityState>(state); }
    int qubits() const;
  };
  std::vector<Entry> entries;

  double total_weight() const;
  bool all_pure() const;
};

struct ProtocolStep;

struct ProtocolProgram {
  std::vector<ProtocolStep> steps;
};

struct CliffordStep {
  CliffordCircuit circuit;
};

// Computational-basis measurement. `then_prog` runs on the outcome-0 branch,
// `else_prog` on the outcome-1 branch. The measured qubit is discarded by
// default; with `keep` it stays collapsed in place as |outcome>.
struct MeasureStep {
  int qubit = 0;
  bool keep = false;
  ProtocolProgram then_prog;
  ProtocolProgram else_prog;
};

// Partial trace. On pure branches this is realized as a forgetful
// computational-basis measurement, keeping the pure residuals as separate
// unconditioned branches; RunOptions::force_density_trace switches to genuine
// density-matrix semantics. Density branches are always traced for real.
struct TraceOutStep {
  int qubit = 0;
};

struct AppendZeroStep {
  int count = 1;
};

// Classical randomness: branch into programs a (probability p) and b (1-p).
struct RandomSplitStep {
  double p = 0.5;
  ProtocolProgram branch_a;
  ProtocolProgram branch_b;
};

struct ProtocolStep {
  std::variant<CliffordStep, MeasureStep, TraceOutStep, AppendZeroStep, RandomSplitStep> op;
};

struct RunOptions {
  bool force_density_trace = false;
  double branch_drop = 1e-12;   // branches below this weight are dropped
  double coalesce_tol = 1e-10;  // fidelity slack when merging equal branches
  bool sample = false;          // draw one trajectory instead of branching
  std::uint64_t seed = 0;       // used only when sample is set
};

struct RunResult {
  StateCollection collection;
  int renormalization_events = 0;
  std::vector<std::string> log;
};

// Exhaustive-branch interpreter for stabilizer protocols. Branch order is the
// depth-first order of the program tree. Ill-typed steps raise
// ValidationError naming the step path; losing every branch to the weight
// floor raises NumericalError.
RunResult run_protocol(const PureState& input, const ProtocolProgram& program,
                       const RunOptions& options = {});

// True iff the collection is a single unit-weight entry that is pure (or has
// top eigenvalue >= 1 - tol when density-typed).
bool is_deterministic_pure(const StateCollection& collection, double tol = 1e-9);

// Seeded random composition of all six elementary operation kinds, well-typed
// along every branch path and never dropping below one qubit. Conditional
// sub-programs are Clifford-only so every path leaves a step with a single
// qubit count.
ProtocolProgram random_protocol(int n, int depth, std::uint64_t seed);

// Script format: JSON array of step objects, e.g.
//   {"op":"clifford","gates":[["H",0],["CNOT",0,1]]}
//   {"op":"measure","qubit":2,"keep":false,"then":[...],"else":[...]}
//   {"op":"trace_out","qubit":0}
//   {"op":"append_zero","count":1}
//   {"op":"random_split","p":0.5,"a":[...],"b":[...]}
// Qubit indices are 0-based from the most significant basis bit.
ProtocolProgram parse_protocol_json(const std::string& text);
std::string protocol_to_json(const ProtocolProgram& program);

}  // namespace stabent
