#include "stabent/roof.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <nlohmann/json.hpp>

#include "stabent/entropy.hpp"
#include "stabent/errors.hpp"
#include "stabent/numeric.hpp"

namespace stabent {

namespace {

// d x r matrix whose columns are sqrt(lambda_k) |e_k>.
Eigen::MatrixXcd scaled_eigenbasis(const DensityState& rho) {
  const auto& pairs = rho.eigen_pairs();
  Eigen::MatrixXcd b(rho.matrix().rows(), static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    b.col(static_cast<Eigen::Index>(k)) = std::sqrt(pairs[k].value) * pairs[k].vector;
  }
  return b;
}

PureState column_to_state(int n, const Eigen::VectorXcd& u) {
  PureState psi;
  psi.num_qubits = n;
  psi.amplitudes.resize(static_cast<std::size_t>(u.size()));
  const double nrm = u.norm();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    psi.amplitudes[static_cast<std::size_t>(i)] = u(i) / nrm;
  }
  return psi;
}

Eigen::MatrixXcd random_isometry(Eigen::Index m, Eigen::Index r, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(m, r);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) g(i, j) = cdouble{gauss(rng), gauss(rng)};
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(m, r);
}

// Nearest-isometry retraction (thin QR with the R diagonal made positive so
// the map is continuous around the current point).
Eigen::MatrixXcd retract(const Eigen::MatrixXcd& w) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(w);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(w.rows(), w.cols());
  const Eigen::MatrixXcd r = qr.matrixQR().topRows(w.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    const cdouble d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= std::conj(d) / std::abs(d);
  }
  return q;
}

// Average purity of the decomposition induced by isometry v on basis b.
double isometry_objective(const Eigen::MatrixXcd& b, const Eigen::MatrixXcd& v, int n, int alpha,
                          int max_qubits) {
  const Eigen::MatrixXcd u = b * v.transpose();  // column j = sum_k v(j,k) b_k
  double acc = 0.0;
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    const double q = u.col(j).squaredNorm();
    if (q < 1e-14) continue;
    acc += q * stabilizer_purity(column_to_state(n, u.col(j)), alpha, max_qubits);
  }
  return acc;
}

struct AscentOutcome {
  double value;
  Eigen::MatrixXcd point;
  long iterations;
  bool converged;
  double residual;  // last accepted improvement
};

// Random-restart local ascent (or descent via sign) over isometries with
// finite-difference directions and QR retraction.
template <typename Objective>
AscentOutcome optimize_isometry(Eigen::Index m, Eigen::Index r, const Objective& f, bool maximize,
                                const RoofOptions& opts, std::mt19937_64& rng,
                                const Eigen::MatrixXcd* start = nullptr) {
  const double sign = maximize ? 1.0 : -1.0;
  Eigen::MatrixXcd v = start ? *start : random_isometry(m, r, rng);
  double value = f(v);
  long iters = 0;
  bool converged = false;
  double step = 0.1;
  int small_gain_streak = 0;
  double last_gain = 0.0;
  Eigen::MatrixXcd grad(m, r);
  for (int it = 0; it < opts.max_iters; ++it) {
    ++iters;
    // Central finite differences on the real coordinates, retracting before
    // each evaluation so the direction lives on the manifold.
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < r; ++j) {
        cdouble g{0.0, 0.0};
        for (int part = 0; part < 2; ++part) {
          const cdouble delta = part == 0 ? cdouble{opts.fd_step, 0.0} : cdouble{0.0, opts.fd_step};
          Eigen::MatrixXcd plus = v, minus = v;
          plus(i, j) += delta;
          minus(i, j) -= delta;
          const double df = (f(retract(plus)) - f(retract(minus))) / (2.0 * opts.fd_step);
          g += part == 0 ? cdouble{df, 0.0} : cdouble{0.0, df};
        }
        grad(i, j) = sign * g;
      }
    }
    const double gnorm = grad.norm();
    if (gnorm < 1e-13) {
      converged = true;
      break;
    }
    // Backtracking ascent step along the estimated direction.
    bool improved = false;
    double trial_step = step;
    for (int attempt = 0; attempt < 40; ++attempt) {
      const Eigen::MatrixXcd candidate = retract(v + trial_step * grad / gnorm);
      const double cand_value = f(candidate);
      if (sign * (cand_value - value) > 0.0) {
        const double gain = sign * (cand_value - value);
        v = candidate;
        value = cand_value;
        step = std::min(trial_step * 1.5, 1.0);
        improved = true;
        last_gain = gain;
        // A tiny gain right after halving just means the line search
        // overshot; only a streak of tiny full-step gains signals a summit.
        small_gain_streak = gain < opts.improve_tol ? small_gain_streak + 1 : 0;
        break;
      }
      trial_step *= 0.5;
      if (trial_step < 1e-14) break;
    }
    if (!improved || small_gain_streak >= 3) {
      converged = true;
      break;
    }
  }
  return {value, v, iters, converged, last_gain};
}

struct EntryOutcome {
  double purity;  // best average purity (normalized entry)
  DecompositionCandidate decomposition;
  long iterations = 0;
  int restarts = 0;
  bool converged = true;
  double residual = 0.0;
};

EntryOutcome optimize_entry_purity(const DensityState& rho, int alpha, const RoofOptions& opts,
                                   std::uint64_t entry_seed) {
  const int r = rho.rank();
  if (r == 0) throw ValidationError("density entry has no eigenvalue above the rank cutoff");
  const Eigen::MatrixXcd b = scaled_eigenbasis(rho);
  const int n = rho.num_qubits();
  EntryOutcome out;
  out.purity = -std::numeric_limits<double>::infinity();
  const int m_hi = opts.m_max > 0 ? std::max(opts.m_max, r) : 2 * r;
  for (int m = r; m <= m_hi; ++m) {
    // Restart 0 ascends from the eigenbasis decomposition itself (identity
    // isometry padded with zero-weight terms); the rest are random starts.
    Eigen::MatrixXcd canonical = Eigen::MatrixXcd::Zero(m, r);
    canonical.topRows(r) = Eigen::MatrixXcd::Identity(r, r);
    for (int restart = 0; restart < opts.restarts; ++restart) {
      std::mt19937_64 rng(derive_seed(entry_seed, static_cast<std::uint64_t>(m) * 4096 + restart));
      auto objective = [&](const Eigen::MatrixXcd& v) {
        return isometry_objective(b, v, n, alpha, opts.max_qubits);
      };
      const AscentOutcome run = optimize_isometry(m, r, objective, /*maximize=*/true, opts, rng,
                                                  restart == 0 ? &canonical : nullptr);
      out.iterations += run.iterations;
      ++out.restarts;
      if (run.value > out.purity) {
        out.purity = run.value;
        out.decomposition = decomposition_from_isometry(rho, run.point, 1.0);
        out.converged = run.converged;
        out.residual = run.residual;
      }
    }
  }
  return out;
}

double purity_of_pure_entry(const PureState& psi, int alpha, const RoofOptions& opts) {
  return stabilizer_purity(psi, alpha, opts.max_qubits);
}

void require_integer_alpha(int alpha) {
  if (alpha < 2) throw ValidationError("convex-roof quantities require integer alpha >= 2");
}

}  // namespace

DecompositionCandidate decomposition_from_isometry(const DensityState& rho,
                                                   const Eigen::MatrixXcd& isometry,
                                                   double entry_weight) {
  const Eigen::MatrixXcd b = scaled_eigenbasis(rho);
  if (isometry.cols() != b.cols()) throw ValidationError("isometry column count must equal the rank");
  const Eigen::MatrixXcd u = b * isometry.transpose();
  DecompositionCandidate out;
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    const double q = u.col(j).squaredNorm();
    if (q < 1e-14) continue;
    out.weights.push_back(entry_weight * q);
    out.states.push_back(column_to_state(rho.num_qubits(), u.col(j)));
  }
  return out;
}

double candidate_average_purity(const DecompositionCandidate& candidate, int alpha, int max_qubits) {
  double total = 0.0, acc = 0.0;
  for (std::size_t j = 0; j < candidate.states.size(); ++j) {
    total += candidate.weights[j];
    acc += candidate.weights[j] * stabilizer_purity(candidate.states[j], alpha, max_qubits);
  }
  if (total <= 0.0) throw ValidationError("candidate has zero total weight");
  return acc / total;
}

bool candidate_reconstructs(const DecompositionCandidate& candidate, const DensityState& rho,
                            double weight, double tol) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (std::size_t j = 0; j < candidate.states.size(); ++j) {
    const PureState& psi = candidate.states[j];
    Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.dim()));
    for (std::size_t i = 0; i < psi.dim(); ++i) v(static_cast<Eigen::Index>(i)) = psi.amplitudes[i];
    acc += candidate.weights[j] * (v * v.adjoint());
  }
  return (acc - weight * rho.matrix()).cwiseAbs().maxCoeff() <= tol;
}

RoofResult extended_purity(const StateCollection& collection, int alpha, const RoofOptions& options) {
  require_integer_alpha(alpha);
  if (collection.entries.empty()) throw ValidationError("empty collection");
  RoofResult result;
  double total = 0.0;
  for (std::size_t i = 0; i < collection.entries.size(); ++i) {
    const auto& entry = collection.entries[i];
    if (entry.is_pure()) {
      const double p = purity_of_pure_entry(entry.pure(), alpha, options);
      total += entry.weight * p;
      result.decompositions.push_back({{entry.weight}, {entry.pure()}});
      continue;
    }
    EntryOutcome outcome = optimize_entry_purity(entry.density(), alpha, options,
                                                 derive_seed(options.seed, i));
    total += entry.weight * outcome.purity;
    for (double& w : outcome.decomposition.weights) w *= entry.weight;
    result.decompositions.push_back(std::move(outcome.decomposition));
    result.trace.iterations += outcome.iterations;
    result.trace.restarts += outcome.restarts;
    result.trace.converged = result.trace.converged && outcome.converged;
    result.trace.residual = std::max(result.trace.residual, outcome.residual);
  }
  result.purity = total;
  result.value = total;
  return result;
}

RoofResult extended_entropy_bits(const StateCollection& collection, int alpha,
                                 const RoofOptions& options) {
  RoofResult result = extended_purity(collection, alpha, options);
  result.value = std::log2(result.purity) / (1.0 - alpha);
  return result;
}

RoofResult extended_linear(const StateCollection& collection, int alpha,
                           const RoofOptions& options) {
  RoofResult result = extended_purity(collection, alpha, options);
  result.value = 1.0 - result.purity;
  return result;
}

RoofResult collection_min_entropy(const StateCollection& collection, int alpha,
                                  const RoofOptions& options) {
  require_integer_alpha(alpha);
  if (collection.entries.empty()) throw ValidationError("empty collection");
  RoofResult result;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < collection.entries.size(); ++i) {
    const auto& entry = collection.entries[i];
    if (entry.is_pure()) {
      const double m = stabilizer_entropy_bits(entry.pure(), alpha, options.max_qubits);
      if (m < best) {
        best = m;
        result.decompositions = {{{entry.weight}, {entry.pure()}}};
      }
      continue;
    }
    // Any unit vector in the support appears in some valid decomposition, so
    // the inf over decompositions of the min term is the min over the range.
    const DensityState& rho = entry.density();
    const Eigen::MatrixXcd b = scaled_eigenbasis(rho);
    const int r = rho.rank();
    for (int restart = 0; restart < options.restarts; ++restart) {
      std::mt19937_64 rng(derive_seed(derive_seed(options.seed, i), restart));
      // A unit range vector is an r x 1 isometry on the eigenbasis.
      auto objective = [&](const Eigen::MatrixXcd& c) {
        const Eigen::VectorXcd u = b * c.col(0);
        return stabilizer_entropy_bits(column_to_state(rho.num_qubits(), u), alpha,
                                       options.max_qubits);
      };
      const AscentOutcome run =
          optimize_isometry(r, 1, objective, /*maximize=*/false, options, rng);
      result.trace.iterations += run.iterations;
      ++result.trace.restarts;
      if (run.value < best) {
        best = run.value;
        const Eigen::VectorXcd u = b * run.point.col(0);
        result.decompositions = {{{entry.weight}, {column_to_state(rho.num_qubits(), u)}}};
        result.trace.converged = run.converged;
        result.trace.residual = run.residual;
      }
    }
  }
  result.value = best;
  result.purity = std::exp2((1.0 - alpha) * best);
  return result;
}

double roof_oracle_rank2(const DensityState& rho, int alpha, int grid, std::uint64_t seed) {
  require_integer_alpha(alpha);
  if (rho.rank() != 2) {
    throw ValidationError("roof_oracle_rank2 requires rank exactly 2, got rank " +
                          std::to_string(rho.rank()));
  }
  const Eigen::MatrixXcd b = scaled_eigenbasis(rho);
  const int n = rho.num_qubits();
  double best = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd grid_best(2, 2);
  // All 2-term decompositions, up to irrelevant per-term phases, are rows
  // (cos t, sin t e^{i f}), (-sin t e^{-i f}, cos t) of a 2 x 2 unitary.
  for (int ti = 0; ti < grid; ++ti) {
    const double theta = (M_PI / 2.0) * ti / (grid - 1);
    const double c = std::cos(theta), s = std::sin(theta);
    for (int fi = 0; fi < grid; ++fi) {
      const double phi = 2.0 * M_PI * fi / grid;
      const cdouble e = std::polar(1.0, phi);
      Eigen::MatrixXcd v(2, 2);
      v << cdouble{c, 0.0}, s * e, -s * std::conj(e), cdouble{c, 0.0};
      const double value = isometry_objective(b, v, n, alpha, kDefaultMaxQubits);
      if (value > best) {
        best = value;
        grid_best = v;
      }
    }
  }
  // Interior points of the decomposition polytope need more than two terms
  // (a single-qubit state inside the stabilizer octahedron reaches purity 1
  // only with 3 or 4 stabilizer terms), so refine at m = 3, 4 with restarted
  // (1+1)-style random search: accept improving jitters, grow the radius on
  // success and shrink on failure. Starts are the m = 2 grid winner padded
  // with zero-weight terms plus random isometries. Derivative-free and
  // independent of the ascent optimizer's path.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int m : {3, 4}) {
    std::vector<Eigen::MatrixXcd> starts;
    Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(m, 2);
    padded.topRows(2) = grid_best;
    starts.push_back(padded);
    for (int i = 0; i < 27; ++i) starts.push_back(random_isometry(m, 2, rng));
    for (const Eigen::MatrixXcd& start : starts) {
      Eigen::MatrixXcd point = start;
      double value = isometry_objective(b, point, n, alpha, kDefaultMaxQubits);
      double radius = 0.3;
      for (int it = 0; it < 4000 && radius > 1e-8; ++it) {
        Eigen::MatrixXcd jitter(m, 2);
        for (Eigen::Index a = 0; a < m; ++a) {
          for (Eigen::Index c = 0; c < 2; ++c) jitter(a, c) = cdouble{gauss(rng), gauss(rng)};
        }
        const Eigen::MatrixXcd cand = retract(point + radius * jitter);
        const double cand_value = isometry_objective(b, cand, n, alpha, kDefaultMaxQubits);
        if (cand_value > value) {
          value = cand_value;
          point = cand;
          radius = std::min(radius * 1.3, 0.5);
        } else {
          radius *= 0.85;
        }
      }
      best = std::max(best, value);
    }
  }
  return best;
}

std::string RoofResult::to_json() const {
  nlohmann::json decomps = nlohmann::json::array();
  for (const auto& d : decompositions) {
    nlohmann::json terms = nlohmann::json::array();
    for (std::size_t j = 0; j < d.states.size(); ++j) {
      nlohmann::json amps = nlohmann::json::array();
      for (const cdouble& a : d.states[j].amplitudes) amps.push_back({a.real(), a.imag()});
      terms.push_back({{"weight", d.weights[j]},
                       {"n", d.states[j].num_qubits},
                       {"amplitudes", std::move(amps)}});
    }
    decomps.push_back(std::move(terms));
  }
  nlohmann::json j{{"value", value},
                   {"purity", purity},
                   {"restarts", trace.restarts},
                   {"iterations", trace.iterations},
                   {"converged", trace.converged},
                   {"residual", trace.residual},
                   {"decompositions", std::move(decomps)}};
  return j.dump();
}

}  // namespace stabent
