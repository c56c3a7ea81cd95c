#include "stabent/state.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stabent/errors.hpp"
#include "stabent/numeric.hpp"

namespace stabent {

namespace {

void check_qubit_count(int n) {
  if (n < 1 || n > 62) throw ValidationError("qubit count must be in [1, 62], got " + std::to_string(n));
}

}  // namespace

PureState::PureState(int n, std::vector<cdouble> amps) : num_qubits(n), amplitudes(std::move(amps)) {
  check_qubit_count(n);
  const std::size_t want = std::size_t{1} << n;
  if (amplitudes.size() != want) {
    throw ValidationError("amplitude vector has length " + std::to_string(amplitudes.size()) +
                          ", expected 2^" + std::to_string(n));
  }
  const double nrm = norm();
  if (std::abs(nrm - 1.0) > 1e-10) {
    throw ValidationError("state is not normalized: |norm - 1| = " + std::to_string(std::abs(nrm - 1.0)));
  }
}

PureState PureState::basis(int n, std::uint64_t index) {
  check_qubit_count(n);
  std::vector<cdouble> amps(std::size_t{1} << n, cdouble{0.0, 0.0});
  amps.at(index) = cdouble{1.0, 0.0};
  PureState out;
  out.num_qubits = n;
  out.amplitudes = std::move(amps);
  return out;
}

double PureState::norm() const {
  double acc = 0.0;
  for (const cdouble& a : amplitudes) acc += std::norm(a);
  return std::sqrt(acc);
}

void PureState::renormalize() {
  const double nrm = norm();
  if (nrm <= 0.0) throw NumericalError("cannot renormalize a zero state");
  for (cdouble& a : amplitudes) a /= nrm;
}

cdouble PureState::inner(const PureState& other) const {
  if (num_qubits != other.num_qubits) {
    throw ValidationError("inner product between states of different qubit counts");
  }
  cdouble acc{0.0, 0.0};
  for (std::size_t i = 0; i < amplitudes.size(); ++i) acc += std::conj(amplitudes[i]) * other.amplitudes[i];
  return acc;
}

double PureState::fidelity(const PureState& other) const { return std::norm(inner(other)); }

PureState tensor(const PureState& a, const PureState& b) {
  PureState out;
  out.num_qubits = a.num_qubits + b.num_qubits;
  out.amplitudes.resize(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) {
      out.amplitudes[i * b.dim() + j] = a.amplitudes[i] * b.amplitudes[j];
    }
  }
  return out;
}

PureState zeros_state(int n) { return PureState::basis(n, 0); }

PureState plus_state() {
  const double s = 1.0 / std::sqrt(2.0);
  PureState out;
  out.num_qubits = 1;
  out.amplitudes = {cdouble{s, 0.0}, cdouble{s, 0.0}};
  return out;
}

PureState t_state() {
  const double s = 1.0 / std::sqrt(2.0);
  PureState out;
  out.num_qubits = 1;
  out.amplitudes = {cdouble{s, 0.0}, std::polar(s, M_PI / 4.0)};
  return out;
}

PureState ckz_state(int m) {
  check_qubit_count(m);
  const std::size_t dim = std::size_t{1} << m;
  const double amp = std::pow(2.0, -0.5 * m);
  PureState out;
  out.num_qubits = m;
  out.amplitudes.assign(dim, cdouble{amp, 0.0});
  out.amplitudes[dim - 1] = cdouble{-amp, 0.0};  // b = 1...1 is the only product-1 string
  return out;
}

PureState cks_state(int m) {
  check_qubit_count(m);
  const std::size_t dim = std::size_t{1} << m;
  const double amp = std::pow(2.0, -0.5 * m);
  PureState out;
  out.num_qubits = m;
  out.amplitudes.assign(dim, cdouble{amp, 0.0});
  out.amplitudes[dim - 1] = cdouble{0.0, amp};
  return out;
}

PureState haar_state(int n, std::uint64_t seed) {
  check_qubit_count(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  PureState out;
  out.num_qubits = n;
  out.amplitudes.resize(std::size_t{1} << n);
  for (cdouble& a : out.amplitudes) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    a = cdouble{re, im};
  }
  out.renormalize();
  return out;
}

std::optional<PureState> make_named_state(std::string_view name) {
  auto split = [](std::string_view s) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      const std::size_t next = s.find(':', pos);
      if (next == std::string_view::npos) {
        parts.emplace_back(s.substr(pos));
        break;
      }
      parts.emplace_back(s.substr(pos, next - pos));
      pos = next + 1;
    }
    return parts;
  };
  std::string lowered(name);
  for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto parts = split(lowered);
  const std::string& head = parts[0];
  try {
    if (head == "t" && parts.size() == 1) return t_state();
    if (head == "plus" && parts.size() == 1) return plus_state();
    if (head == "cs" && parts.size() == 1) return cks_state(2);
    if (head == "ccz" && parts.size() == 1) return ckz_state(3);
    if (head == "ckz" && parts.size() == 2) return ckz_state(std::stoi(parts[1]));
    if (head == "cks" && parts.size() == 2) return cks_state(std::stoi(parts[1]));
    if (head == "zeros" && parts.size() == 2) return zeros_state(std::stoi(parts[1]));
    if (head == "haar" && parts.size() == 3) {
      return haar_state(std::stoi(parts[1]), std::stoull(parts[2]));
    }
  } catch (const std::logic_error&) {
    return std::nullopt;  // malformed number
  }
  return std::nullopt;
}

DensityState::DensityState(int n, Eigen::MatrixXcd matrix, double rank_cutoff)
    : num_qubits_(n), matrix_(std::move(matrix)) {
  check_qubit_count(n);
  const auto want = Eigen::Index{1} << n;
  if (matrix_.rows() != want || matrix_.cols() != want) {
    throw ValidationError("density matrix must be 2^n x 2^n");
  }
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw ValidationError("density matrix is not Hermitian: residue " + std::to_string(herm));
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > 1e-10) throw ValidationError("density matrix trace differs from 1");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const auto& evals = solver.eigenvalues();
  if (evals.minCoeff() < -1e-10) {
    throw ValidationError("density matrix has a negative eigenvalue: " + std::to_string(evals.minCoeff()));
  }
  for (Eigen::Index i = evals.size() - 1; i >= 0; --i) {  // descending
    if (evals(i) > rank_cutoff) {
      eigen_pairs_.push_back(EigenPair{evals(i), solver.eigenvectors().col(i)});
    }
  }
}

DensityState DensityState::from_pure(const PureState& psi) {
  Eigen::VectorXcd v(psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i) v(static_cast<Eigen::Index>(i)) = psi.amplitudes[i];
  return DensityState(psi.num_qubits, v * v.adjoint());
}

DensityState DensityState::mixture(const std::vector<std::pair<double, PureState>>& terms) {
  if (terms.empty()) throw ValidationError("mixture needs at least one term");
  const int n = terms.front().second.num_qubits;
  const auto dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [p, psi] : terms) {
    if (psi.num_qubits != n) throw ValidationError("mixture terms must share the qubit count");
    if (p < 0.0) throw ValidationError("mixture weights must be nonnegative");
    Eigen::VectorXcd v(psi.dim());
    for (std::size_t i = 0; i < psi.dim(); ++i) v(static_cast<Eigen::Index>(i)) = psi.amplitudes[i];
    rho += p * v * v.adjoint();
  }
  return DensityState(n, std::move(rho));
}

double DensityState::largest_eigenvalue() const {
  return eigen_pairs_.empty() ? 0.0 : eigen_pairs_.front().value;
}

PureState state_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const int n = j.at("n").get<int>();
  const auto& amps = j.at("amplitudes");
  std::vector<cdouble> out;
  out.reserve(amps.size());
  for (const auto& pair : amps) {
    out.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  }
  return PureState(n, std::move(out));
}

std::string state_to_json_text(const PureState& psi) {
  nlohmann::json amps = nlohmann::json::array();
  for (const cdouble& a : psi.amplitudes) amps.push_back({a.real(), a.imag()});
  nlohmann::json j{{"n", psi.num_qubits}, {"amplitudes", std::move(amps)}};
  return j.dump();
}

PureState read_state_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open state file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return state_from_json_text(buf.str());
}

void write_state_json(const PureState& psi, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write state file: " + path);
  out << state_to_json_text(psi) << "\n";
}

}  // namespace stabent
