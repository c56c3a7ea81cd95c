// stabent: stabilizer entropies, protocol simulation, convex roofs,
// conversion bounds and the numerical certification suites, over JSON files.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stabent/bounds.hpp"
#include "stabent/entropy.hpp"
#include "stabent/errors.hpp"
#include "stabent/numeric.hpp"
#include "stabent/protocol.hpp"
#include "stabent/roof.hpp"
#include "stabent/spectrum.hpp"
#include "stabent/state.hpp"
#include "stabent/verify.hpp"

namespace {

using nlohmann::json;
using namespace stabent;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(output_path);
    if (!out) throw ValidationError("cannot write file: " + output_path);
    out << text << "\n";
  }
}

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> alphas;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) alphas.push_back(std::stod(item));
  }
  if (alphas.empty()) throw ValidationError("empty alpha list");
  return alphas;
}

PureState load_state(const std::string& named, const std::string& input_path) {
  if (!named.empty()) {
    auto psi = make_named_state(named);
    if (!psi) throw ValidationError("unknown named state: " + named);
    return *psi;
  }
  if (!input_path.empty()) return read_state_json(input_path);
  throw ValidationError("one of --state or --input is required");
}

// Mixed-state input for the roof command: either a pure state file, or
// {"mix": [{"p": w, "state": {...}}, ...]}, or {"entries": [{"weight": w,
// "mix"/"state"/"named": ...}, ...]} for a full collection.
StateCollection load_collection(const std::string& named, const std::string& input_path) {
  StateCollection collection;
  if (!named.empty()) {
    collection.entries.push_back({1.0, load_state(named, "")});
    return collection;
  }
  const json j = json::parse(slurp(input_path));
  auto pure_from = [](const json& node) {
    if (node.is_string()) {
      auto psi = make_named_state(node.get<std::string>());
      if (!psi) throw ValidationError("unknown named state: " + node.get<std::string>());
      return *psi;
    }
    return state_from_json_text(node.dump());
  };
  auto entry_state = [&](const json& node) -> std::variant<PureState, DensityState> {
    if (node.contains("mix")) {
      std::vector<std::pair<double, PureState>> terms;
      for (const auto& t : node.at("mix")) {
        terms.emplace_back(t.at("p").get<double>(), pure_from(t.at("state")));
      }
      return DensityState::mixture(terms);
    }
    return pure_from(node.contains("state") ? node.at("state") : node);
  };
  if (j.contains("entries")) {
    for (const auto& e : j.at("entries")) {
      collection.entries.push_back({e.at("weight").get<double>(), entry_state(e)});
    }
  } else {
    collection.entries.push_back({1.0, entry_state(j)});
  }
  return collection;
}

json branch_to_json(const StateCollection::Entry& e, const std::vector<double>& alphas) {
  json out{{"weight", e.weight}, {"n", e.qubits()}, {"pure", e.is_pure()}};
  if (e.is_pure()) {
    json amps = json::array();
    for (const cdouble& a : e.pure().amplitudes) amps.push_back({a.real(), a.imag()});
    out["amplitudes"] = std::move(amps);
    json monotones = json::object();
    for (double alpha : alphas) {
      monotones["M_" + std::to_string(alpha)] = stabilizer_entropy_bits(e.pure(), alpha);
    }
    if (!alphas.empty()) out["entropy_bits"] = std::move(monotones);
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"stabilizer entropy toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: STABENT_THREADS or all cores)");

  std::string state_name, input_path, output_path, alpha_text = "2";
  int max_qubits = kDefaultMaxQubits;

  auto* entropy_cmd = app.add_subcommand("entropy", "stabilizer purities and entropies");
  entropy_cmd->add_option("--state", state_name, "named state (t, cs, ccz, ckz:m, cks:m, zeros:n, haar:n:seed)");
  entropy_cmd->add_option("--input", input_path, "state JSON file");
  entropy_cmd->add_option("--alpha", alpha_text, "comma-separated Renyi indices");
  entropy_cmd->add_option("--output", output_path, "write the report here instead of stdout");
  entropy_cmd->add_option("--max-qubits", max_qubits, "spectrum size guard");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "full characteristic distribution");
  bool nonzero_only = false;
  spectrum_cmd->add_option("--state", state_name, "named state");
  spectrum_cmd->add_option("--input", input_path, "state JSON file");
  spectrum_cmd->add_option("--output", output_path, "output path");
  spectrum_cmd->add_option("--max-qubits", max_qubits, "spectrum size guard");
  spectrum_cmd->add_flag("--nonzero-only", nonzero_only, "emit only entries above 1e-12");

  auto* protocol_cmd = app.add_subcommand("protocol", "run a stabilizer protocol script");
  std::string script_path, report_kind = "branches";
  bool force_density = false;
  protocol_cmd->add_option("--state", state_name, "named input state");
  protocol_cmd->add_option("--input", input_path, "input state JSON file");
  protocol_cmd->add_option("--script", script_path, "protocol script JSON")->required();
  protocol_cmd->add_option("--report", report_kind, "branches | monotones");
  protocol_cmd->add_option("--alpha", alpha_text, "entropy indices for --report monotones");
  protocol_cmd->add_flag("--force-density-trace", force_density, "genuine partial-trace semantics");
  protocol_cmd->add_option("--output", output_path, "output path");

  auto* roof_cmd = app.add_subcommand("roof", "convex-roof extended entropies");
  RoofOptions roof_options;
  int roof_alpha = 2;
  roof_cmd->add_option("--state", state_name, "named pure state");
  roof_cmd->add_option("--input", input_path, "state / mixture / collection JSON file");
  roof_cmd->add_option("--alpha", roof_alpha, "integer Renyi index >= 2");
  roof_cmd->add_option("--restarts", roof_options.restarts, "optimizer restarts");
  roof_cmd->add_option("--m-max", roof_options.m_max, "max decomposition terms (0 = 2*rank)");
  roof_cmd->add_option("--max-iters", roof_options.max_iters, "ascent iterations per restart");
  roof_cmd->add_option("--seed", roof_options.seed, "optimizer seed");
  roof_cmd->add_option("--output", output_path, "output path");

  auto* bounds_cmd = app.add_subcommand("bounds", "resource conversion bound table");
  int bounds_alpha = 2, n_lo = 3, n_hi = 8;
  std::string format = "json";
  bounds_cmd->add_option("--alpha", bounds_alpha, "integer Renyi index >= 2");
  bounds_cmd->add_option("--n-lo", n_lo, "smallest family size");
  bounds_cmd->add_option("--n-hi", n_hi, "largest family size");
  bounds_cmd->add_option("--format", format, "json | text");
  bounds_cmd->add_option("--output", output_path, "output path");

  auto* verify_cmd = app.add_subcommand("verify", "numerical certification suites");
  VerifyOptions verify_options;
  std::string suite = "all";
  std::string verify_alpha_text = "2,3";
  verify_cmd->add_option("--suite", suite,
                         "all | split_bound | min_branch | average_purity | monotonicity | "
                         "strong_monotonicity | counterexample | property_chain");
  verify_cmd->add_option("--trials", verify_options.trials, "trials per suite");
  verify_cmd->add_option("--seed", verify_options.seed, "master seed");
  verify_cmd->add_option("--alpha", verify_alpha_text, "comma-separated integer indices");
  verify_cmd->add_option("--n", verify_options.n, "register size for the protocol suites");
  verify_cmd->add_option("--max-depth", verify_options.max_depth, "protocol depth cap");
  verify_cmd->add_option("--counterexample-n-max", verify_options.counterexample_n_max,
                         "scan limit for the counterexample suite");
  verify_cmd->add_option("--output", output_path, "report path");

  auto* state_cmd = app.add_subcommand("state", "state file utilities");
  auto* gen_cmd = state_cmd->add_subcommand("gen", "write a named state to a JSON file");
  gen_cmd->add_option("--state", state_name, "named state")->required();
  gen_cmd->add_option("--output", output_path, "output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2, --help exits 0
  }
  if (threads > 0) set_thread_count(threads);

  if (entropy_cmd->parsed()) {
    const PureState psi = load_state(state_name, input_path);
    std::ostringstream lines;
    bool first = true;
    for (double alpha : parse_alpha_list(alpha_text)) {
      if (!first) lines << "\n";
      lines << entropy_report(psi, alpha, 1e-8, max_qubits).to_json();
      first = false;
    }
    emit(lines.str(), output_path);
    return 0;
  }

  if (spectrum_cmd->parsed()) {
    const PureState psi = load_state(state_name, input_path);
    const CharSpectrum spectrum = char_spectrum(psi, max_qubits);
    json entries = json::array();
    for (std::size_t idx = 0; idx < spectrum.xi.size(); ++idx) {
      if (nonzero_only && spectrum.xi[idx] <= 1e-12) continue;
      entries.push_back({PauliLabel::from_index(psi.num_qubits, idx).to_string(), spectrum.xi[idx]});
    }
    emit(json{{"n", psi.num_qubits}, {"sum", spectrum.sum()}, {"xi", std::move(entries)}}.dump(),
         output_path);
    return 0;
  }

  if (protocol_cmd->parsed()) {
    const PureState psi = load_state(state_name, input_path);
    const ProtocolProgram program = parse_protocol_json(slurp(script_path));
    RunOptions run_options;
    run_options.force_density_trace = force_density;
    const RunResult result = run_protocol(psi, program, run_options);
    const std::vector<double> alphas =
        report_kind == "monotones" ? parse_alpha_list(alpha_text) : std::vector<double>{};
    json branches = json::array();
    for (const auto& e : result.collection.entries) branches.push_back(branch_to_json(e, alphas));
    json out{{"branches", std::move(branches)},
             {"total_weight", result.collection.total_weight()},
             {"deterministic_pure", is_deterministic_pure(result.collection)},
             {"renormalization_events", result.renormalization_events},
             {"log", result.log}};
    emit(out.dump(), output_path);
    return 0;
  }

  if (roof_cmd->parsed()) {
    const StateCollection collection = load_collection(state_name, input_path);
    const RoofResult purity = extended_purity(collection, roof_alpha, roof_options);
    json out = json::parse(purity.to_json());
    out["alpha"] = roof_alpha;
    out["extended_entropy_bits"] = std::log2(purity.purity) / (1.0 - roof_alpha);
    out["extended_linear"] = 1.0 - purity.purity;
    emit(out.dump(), output_path);
    return 0;
  }

  if (bounds_cmd->parsed()) {
    const auto table = conversion_bound_table(bounds_alpha, n_lo, n_hi);
    emit(format == "text" ? bounds_to_text(table) : bounds_to_json(table), output_path);
    return 0;
  }

  if (verify_cmd->parsed()) {
    verify_options.alphas.clear();
    for (double x : parse_alpha_list(verify_alpha_text)) {
      verify_options.alphas.push_back(static_cast<int>(x));
    }
    const auto reports = run_suites(suite, verify_options);
    emit(reports_to_json(reports), output_path);
    bool ok = true;
    for (const auto& r : reports) ok = ok && r.passed();
    return ok ? 0 : 1;
  }

  if (gen_cmd->parsed()) {
    const PureState psi = load_state(state_name, "");
    if (output_path.empty()) {
      std::cout << state_to_json_text(psi) << "\n";
    } else {
      write_state_json(psi, output_path);
    }
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
