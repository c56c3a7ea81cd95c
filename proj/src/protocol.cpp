#include "stabent/protocol.hpp"

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "stabent/errors.hpp"
#include "stabent/numeric.hpp"

namespace stabent {

namespace {

using Branch = StateCollection::Entry;
using Branches = std::vector<Branch>;

struct RunContext {
  const RunOptions& options;
  int renormalization_events = 0;
  std::vector<std::string> log;
  std::mt19937_64 rng;
};

[[noreturn]] void step_error(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

int branch_qubits(const Branch& b) {
  return b.is_pure() ? b.pure().num_qubits : b.density().num_qubits();
}

// --- pure-state primitives -------------------------------------------------

// Projects qubit q of psi onto |outcome>, returning the Born weight and the
// renormalized residual. discard removes the qubit from the register.
std::pair<double, PureState> project_qubit(const PureState& psi, int q, int outcome, bool discard) {
  const std::size_t bit = qubit_bit(psi.num_qubits, q);
  const std::size_t dim = psi.dim();
  double weight = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    if (((i & bit) != 0) == (outcome == 1)) weight += std::norm(psi.amplitudes[i]);
  }
  PureState post;
  if (weight <= 0.0) return {0.0, post};
  const double scale = 1.0 / std::sqrt(weight);
  if (discard) {
    const std::size_t low_mask = bit - 1;
    post.num_qubits = psi.num_qubits - 1;
    post.amplitudes.resize(dim / 2);
    for (std::size_t i = 0; i < dim; ++i) {
      if (((i & bit) != 0) != (outcome == 1)) continue;
      const std::size_t packed = ((i & ~((bit << 1) - 1)) >> 1) | (i & low_mask);
      post.amplitudes[packed] = psi.amplitudes[i] * scale;
    }
  } else {
    post.num_qubits = psi.num_qubits;
    post.amplitudes.assign(dim, cdouble{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i) {
      if (((i & bit) != 0) == (outcome == 1)) post.amplitudes[i] = psi.amplitudes[i] * scale;
    }
  }
  return {weight, post};
}

PureState append_zeros_pure(const PureState& psi, int count) {
  PureState out;
  out.num_qubits = psi.num_qubits + count;
  out.amplitudes.assign(psi.dim() << count, cdouble{0.0, 0.0});
  for (std::size_t i = 0; i < psi.dim(); ++i) out.amplitudes[i << count] = psi.amplitudes[i];
  return out;
}

// --- density-state primitives ----------------------------------------------

Eigen::MatrixXcd partial_trace_matrix(const Eigen::MatrixXcd& rho, int n, int q) {
  const std::size_t bit = qubit_bit(n, q);
  const std::size_t low_mask = bit - 1;
  const auto dim = static_cast<std::size_t>(rho.rows());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim / 2),
                                                static_cast<Eigen::Index>(dim / 2));
  auto packed = [&](std::size_t i) {
    return ((i & ~((bit << 1) - 1)) >> 1) | (i & low_mask);
  };
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if ((i & bit) != (j & bit)) continue;
      out(static_cast<Eigen::Index>(packed(i)), static_cast<Eigen::Index>(packed(j))) +=
          rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

std::pair<double, Eigen::MatrixXcd> project_qubit_density(const Eigen::MatrixXcd& rho, int n, int q,
                                                          int outcome, bool discard) {
  const std::size_t bit = qubit_bit(n, q);
  const auto dim = static_cast<std::size_t>(rho.rows());
  double weight = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    if (((i & bit) != 0) == (outcome == 1)) {
      weight += rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    }
  }
  if (weight <= 0.0) return {0.0, Eigen::MatrixXcd()};
  const std::size_t low_mask = bit - 1;
  auto packed = [&](std::size_t i) {
    return ((i & ~((bit << 1) - 1)) >> 1) | (i & low_mask);
  };
  const std::size_t out_dim = discard ? dim / 2 : dim;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(out_dim),
                                                static_cast<Eigen::Index>(out_dim));
  for (std::size_t i = 0; i < dim; ++i) {
    if (((i & bit) != 0) != (outcome == 1)) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      if (((j & bit) != 0) != (outcome == 1)) continue;
      const cdouble v = rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / weight;
      if (discard) {
        out(static_cast<Eigen::Index>(packed(i)), static_cast<Eigen::Index>(packed(j))) = v;
      } else {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      }
    }
  }
  return {weight, out};
}

Eigen::MatrixXcd append_zeros_density(const Eigen::MatrixXcd& rho, int count) {
  const auto dim = static_cast<std::size_t>(rho.rows());
  const std::size_t out_dim = dim << count;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(out_dim),
                                                static_cast<Eigen::Index>(out_dim));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      out(static_cast<Eigen::Index>(i << count), static_cast<Eigen::Index>(j << count)) =
          rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

// --- branch bookkeeping ----------------------------------------------------

bool branches_equal(const Branch& a, const Branch& b, double tol) {
  if (a.is_pure() != b.is_pure()) return false;
  if (branch_qubits(a) != branch_qubits(b)) return false;
  if (a.is_pure()) return a.pure().fidelity(b.pure()) >= 1.0 - tol;
  return (a.density().matrix() - b.density().matrix()).cwiseAbs().maxCoeff() <= tol;
}

void coalesce(Branches& branches, double tol) {
  Branches merged;
  for (Branch& b : branches) {
    bool absorbed = false;
    for (Branch& m : merged) {
      if (branches_equal(m, b, tol)) {
        m.weight += b.weight;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(std::move(b));
  }
  branches = std::move(merged);
}

void drop_and_renormalize(Branches& branches, RunContext& ctx, const std::string& path) {
  Branches kept;
  double dropped = 0.0;
  for (Branch& b : branches) {
    if (b.weight < ctx.options.branch_drop) {
      dropped += b.weight;
    } else {
      kept.push_back(std::move(b));
    }
  }
  if (kept.empty()) {
    throw NumericalError(path + ": every branch fell below the weight floor");
  }
  if (dropped > 0.0) {
    double total = 0.0;
    for (const Branch& b : kept) total += b.weight;
    for (Branch& b : kept) b.weight /= total;
    ++ctx.renormalization_events;
    ctx.log.push_back(path + ": dropped branches of total weight " + std::to_string(dropped) +
                      " and renormalized");
  }
  branches = std::move(kept);
}

void run_program(const ProtocolProgram& program, Branches& branches, RunContext& ctx,
                 const std::string& path);

// Applies one step to a single branch, appending the resulting branches.
void apply_step(const ProtocolStep& step, const Branch& branch, Branches& out, RunContext& ctx,
                const std::string& path) {
  const int n = branch_qubits(branch);
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, CliffordStep>) {
          for (const CliffordGate& g : op.circuit.gates) {
            if (g.q0 < 0 || g.q0 >= n || (g.kind == CliffordGate::Kind::CNOT && (g.q1 < 0 || g.q1 >= n))) {
              step_error(path, "gate " + g.name() + " out of range for " + std::to_string(n) + " qubits");
            }
          }
          if (branch.is_pure()) {
            out.push_back({branch.weight, apply_clifford(branch.pure(), op.circuit)});
          } else {
            out.push_back({branch.weight,
                           DensityState(n, apply_clifford_density(branch.density().matrix(), n, op.circuit))});
          }
        } else if constexpr (std::is_same_v<T, MeasureStep>) {
          if (op.qubit < 0 || op.qubit >= n) step_error(path, "measured qubit out of range");
          if (!op.keep && n == 1) step_error(path, "cannot discard the last qubit");
          int outcomes[2] = {0, 1};
          if (ctx.options.sample) {
            // One trajectory: draw the outcome, keep unit conditional weight.
            double p1 = 0.0;
            if (branch.is_pure()) {
              p1 = project_qubit(branch.pure(), op.qubit, 1, false).first;
            } else {
              p1 = project_qubit_density(branch.density().matrix(), n, op.qubit, 1, false).first;
            }
            const int drawn = std::bernoulli_distribution(std::min(1.0, std::max(0.0, p1)))(ctx.rng) ? 1 : 0;
            outcomes[0] = outcomes[1] = drawn;
          }
          for (int oi = 0; oi <= (ctx.options.sample ? 0 : 1); ++oi) {
            const int outcome = outcomes[oi];
            Branches sub;
            if (branch.is_pure()) {
              auto [w, post] = project_qubit(branch.pure(), op.qubit, outcome, !op.keep);
              if (w <= 0.0) continue;
              sub.push_back({ctx.options.sample ? branch.weight : branch.weight * w, std::move(post)});
            } else {
              auto [w, post] = project_qubit_density(branch.density().matrix(), n, op.qubit, outcome, !op.keep);
              if (w <= 0.0) continue;
              sub.push_back({ctx.options.sample ? branch.weight : branch.weight * w,
                             DensityState(op.keep ? n : n - 1, std::move(post))});
            }
            const ProtocolProgram& conditional = outcome == 0 ? op.then_prog : op.else_prog;
            run_program(conditional, sub, ctx, path + (outcome == 0 ? ".then" : ".else"));
            for (Branch& b : sub) out.push_back(std::move(b));
          }
        } else if constexpr (std::is_same_v<T, TraceOutStep>) {
          if (op.qubit < 0 || op.qubit >= n) step_error(path, "traced qubit out of range");
          if (n == 1) step_error(path, "cannot trace out the last qubit");
          if (branch.is_pure() && !ctx.options.force_density_trace) {
            // Forgetful measurement: keep the pure residuals as branches.
            for (int outcome : {0, 1}) {
              auto [w, post] = project_qubit(branch.pure(), op.qubit, outcome, true);
              if (w <= 0.0) continue;
              out.push_back({branch.weight * w, std::move(post)});
            }
          } else {
            const Eigen::MatrixXcd rho =
                branch.is_pure() ? DensityState::from_pure(branch.pure()).matrix()
                                 : branch.density().matrix();
            out.push_back({branch.weight, DensityState(n - 1, partial_trace_matrix(rho, n, op.qubit))});
          }
        } else if constexpr (std::is_same_v<T, AppendZeroStep>) {
          if (op.count < 1) step_error(path, "append count must be >= 1");
          if (branch.is_pure()) {
            out.push_back({branch.weight, append_zeros_pure(branch.pure(), op.count)});
          } else {
            out.push_back({branch.weight,
                           DensityState(n + op.count, append_zeros_density(branch.density().matrix(), op.count))});
          }
        } else if constexpr (std::is_same_v<T, RandomSplitStep>) {
          if (!(op.p > 0.0 && op.p < 1.0)) step_error(path, "split probability must lie in (0, 1)");
          if (ctx.options.sample) {
            const bool take_a = std::bernoulli_distribution(op.p)(ctx.rng);
            Branches sub{{branch.weight, branch.state}};
            run_program(take_a ? op.branch_a : op.branch_b, sub, ctx, path + (take_a ? ".a" : ".b"));
            for (Branch& b : sub) out.push_back(std::move(b));
          } else {
            Branches sub_a{{branch.weight * op.p, branch.state}};
            run_program(op.branch_a, sub_a, ctx, path + ".a");
            for (Branch& b : sub_a) out.push_back(std::move(b));
            Branches sub_b{{branch.weight * (1.0 - op.p), branch.state}};
            run_program(op.branch_b, sub_b, ctx, path + ".b");
            for (Branch& b : sub_b) out.push_back(std::move(b));
          }
        }
      },
      step.op);
}

void run_program(const ProtocolProgram& program, Branches& branches, RunContext& ctx,
                 const std::string& path) {
  for (std::size_t i = 0; i < program.steps.size(); ++i) {
    const std::string step_path = path.empty() ? "step " + std::to_string(i)
                                               : path + ".step " + std::to_string(i);
    Branches next;
    for (const Branch& b : branches) apply_step(program.steps[i], b, next, ctx, step_path);
    drop_and_renormalize(next, ctx, step_path);
    coalesce(next, ctx.options.coalesce_tol);
    branches = std::move(next);
  }
}

}  // namespace

int StateCollection::Entry::qubits() const { return branch_qubits(*this); }

double StateCollection::total_weight() const {
  double acc = 0.0;
  for (const Entry& e : entries) acc += e.weight;
  return acc;
}

bool StateCollection::all_pure() const {
  for (const Entry& e : entries) {
    if (!e.is_pure()) return false;
  }
  return true;
}

RunResult run_protocol(const PureState& input, const ProtocolProgram& program,
                       const RunOptions& options) {
  RunContext ctx{options, 0, {}, std::mt19937_64(options.seed)};
  Branches branches{{1.0, input}};
  run_program(program, branches, ctx, "");
  RunResult result;
  result.collection.entries = std::move(branches);
  result.renormalization_events = ctx.renormalization_events;
  result.log = std::move(ctx.log);
  return result;
}

bool is_deterministic_pure(const StateCollection& collection, double tol) {
  if (collection.entries.size() != 1) return false;
  const auto& e = collection.entries.front();
  if (std::abs(e.weight - 1.0) > tol) return false;
  if (e.is_pure()) return true;
  return e.density().largest_eigenvalue() >= 1.0 - tol;
}

namespace {

CliffordCircuit small_random_circuit(int k, int gates, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind_dist(0, k > 1 ? 2 : 1);
  std::uniform_int_distribution<int> qubit_dist(0, k - 1);
  CliffordCircuit out;
  for (int i = 0; i < gates; ++i) {
    switch (kind_dist(rng)) {
      case 0: out.gates.push_back(CliffordGate::hadamard(qubit_dist(rng))); break;
      case 1: out.gates.push_back(CliffordGate::phase(qubit_dist(rng))); break;
      default: {
        const int c = qubit_dist(rng);
        int t = qubit_dist(rng);
        while (t == c) t = qubit_dist(rng);
        out.gates.push_back(CliffordGate::cnot(c, t));
      }
    }
  }
  return out;
}

ProtocolProgram clifford_only_program(int k, std::mt19937_64& rng) {
  ProtocolProgram out;
  if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) return out;  // often empty
  const int gates = std::uniform_int_distribution<int>(1, 3)(rng);
  out.steps.push_back(ProtocolStep{CliffordStep{small_random_circuit(k, gates, rng)}});
  return out;
}

}  // namespace

ProtocolProgram random_protocol(int n, int depth, std::uint64_t seed) {
  if (n < 1) throw ValidationError("random_protocol needs n >= 1");
  if (depth < 1) throw ValidationError("random_protocol needs depth >= 1");
  std::mt19937_64 rng(seed);
  const int max_qubits = n + 2;
  int k = n;
  ProtocolProgram program;
  for (int i = 0; i < depth; ++i) {
    int pick = std::uniform_int_distribution<int>(0, 99)(rng);
    // Re-route choices that are ill-typed at the current width.
    if (pick >= 35 && pick < 72 && k < 2) pick = 0;
    if (pick >= 72 && pick < 80 && k >= max_qubits) pick = 0;
    if (pick < 35) {
      program.steps.push_back(ProtocolStep{CliffordStep{small_random_circuit(k, 2 * k + 2, rng)}});
    } else if (pick < 60) {
      MeasureStep step;
      step.qubit = std::uniform_int_distribution<int>(0, k - 1)(rng);
      step.keep = std::uniform_int_distribution<int>(0, 3)(rng) == 0;
      const int post_k = step.keep ? k : k - 1;
      step.then_prog = clifford_only_program(post_k, rng);
      step.else_prog = clifford_only_program(post_k, rng);
      program.steps.push_back(ProtocolStep{std::move(step)});
      k = post_k;
    } else if (pick < 72) {
      TraceOutStep step{std::uniform_int_distribution<int>(0, k - 1)(rng)};
      program.steps.push_back(ProtocolStep{step});
      k -= 1;
    } else if (pick < 80) {
      program.steps.push_back(ProtocolStep{AppendZeroStep{1}});
      k += 1;
    } else {
      RandomSplitStep step;
      step.p = std::uniform_real_distribution<double>(0.15, 0.85)(rng);
      step.branch_a = clifford_only_program(k, rng);
      step.branch_b = clifford_only_program(k, rng);
      program.steps.push_back(ProtocolStep{std::move(step)});
    }
  }
  return program;
}

// --- JSON script format ------------------------------------------------------

namespace {

using nlohmann::json;

json circuit_to_json(const CliffordCircuit& c) {
  json gates = json::array();
  for (const CliffordGate& g : c.gates) {
    if (g.kind == CliffordGate::Kind::CNOT) {
      gates.push_back({g.name(), g.q0, g.q1});
    } else {
      gates.push_back({g.name(), g.q0});
    }
  }
  return gates;
}

CliffordCircuit circuit_from_json(const json& gates, const std::string& path) {
  CliffordCircuit out;
  for (const auto& g : gates) {
    if (!g.is_array() || g.size() < 2) step_error(path, "gate entries are [name, qubit...] arrays");
    const std::string name = g.at(0).get<std::string>();
    const int q0 = g.at(1).get<int>();
    if (name == "H") out.gates.push_back(CliffordGate::hadamard(q0));
    else if (name == "S") out.gates.push_back(CliffordGate::phase(q0));
    else if (name == "X") out.gates.push_back(CliffordGate::pauli_x(q0));
    else if (name == "Y") out.gates.push_back(CliffordGate::pauli_y(q0));
    else if (name == "Z") out.gates.push_back(CliffordGate::pauli_z(q0));
    else if (name == "CNOT") {
      if (g.size() != 3) step_error(path, "CNOT takes [\"CNOT\", control, target]");
      out.gates.push_back(CliffordGate::cnot(q0, g.at(2).get<int>()));
    } else {
      step_error(path, "unknown gate name: " + name);
    }
  }
  return out;
}

json program_to_json_impl(const ProtocolProgram& p);

json step_to_json(const ProtocolStep& step) {
  return std::visit(
      [](const auto& op) -> json {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, CliffordStep>) {
          return json{{"op", "clifford"}, {"gates", circuit_to_json(op.circuit)}};
        } else if constexpr (std::is_same_v<T, MeasureStep>) {
          return json{{"op", "measure"},
                      {"qubit", op.qubit},
                      {"keep", op.keep},
                      {"then", program_to_json_impl(op.then_prog)},
                      {"else", program_to_json_impl(op.else_prog)}};
        } else if constexpr (std::is_same_v<T, TraceOutStep>) {
          return json{{"op", "trace_out"}, {"qubit", op.qubit}};
        } else if constexpr (std::is_same_v<T, AppendZeroStep>) {
          return json{{"op", "append_zero"}, {"count", op.count}};
        } else {
          return json{{"op", "random_split"},
                      {"p", op.p},
                      {"a", program_to_json_impl(op.branch_a)},
                      {"b", program_to_json_impl(op.branch_b)}};
        }
      },
      step.op);
}

json program_to_json_impl(const ProtocolProgram& p) {
  json steps = json::array();
  for (const ProtocolStep& s : p.steps) steps.push_back(step_to_json(s));
  return steps;
}

ProtocolProgram program_from_json(const json& arr, const std::string& path) {
  if (!arr.is_array()) step_error(path, "a protocol script is a JSON array of steps");
  ProtocolProgram out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& s = arr[i];
    const std::string step_path = path + "step " + std::to_string(i);
    if (!s.is_object() || !s.contains("op")) step_error(step_path, "missing \"op\"");
    const std::string op = s.at("op").get<std::string>();
    if (op == "clifford") {
      out.steps.push_back(ProtocolStep{CliffordStep{circuit_from_json(s.at("gates"), step_path)}});
    } else if (op == "measure") {
      MeasureStep step;
      step.qubit = s.at("qubit").get<int>();
      step.keep = s.value("keep", false);
      if (s.contains("then")) step.then_prog = program_from_json(s.at("then"), step_path + ".then.");
      if (s.contains("else")) step.else_prog = program_from_json(s.at("else"), step_path + ".else.");
      out.steps.push_back(ProtocolStep{std::move(step)});
    } else if (op == "trace_out") {
      out.steps.push_back(ProtocolStep{TraceOutStep{s.at("qubit").get<int>()}});
    } else if (op == "append_zero") {
      out.steps.push_back(ProtocolStep{AppendZeroStep{s.value("count", 1)}});
    } else if (op == "random_split") {
      RandomSplitStep step;
      step.p = s.at("p").get<double>();
      if (s.contains("a")) step.branch_a = program_from_json(s.at("a"), step_path + ".a.");
      if (s.contains("b")) step.branch_b = program_from_json(s.at("b"), step_path + ".b.");
      out.steps.push_back(ProtocolStep{std::move(step)});
    } else {
      step_error(step_path, "unknown op: " + op);
    }
  }
  return out;
}

}  // namespace

ProtocolProgram parse_protocol_json(const std::string& text) {
  return program_from_json(json::parse(text), "");
}

std::string protocol_to_json(const ProtocolProgram& program) {
  return program_to_json_impl(program).dump();
}

}  // namespace stabent
