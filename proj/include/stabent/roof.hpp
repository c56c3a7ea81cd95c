#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stabent/protocol.hpp"
#include "stabent/state.hpp"

namespace stabent {

struct RoofOptions {
  int restarts = 32;
  int m_max = 0;  // decomposition terms swept from rank r up to this, 0 = 2r
  int max_iters = 400;
  double improve_tol = 1e-10;  // per-sweep improvement below this stops a restart
  double fd_step = 1e-5;       // finite-difference step for the ascent direction
  double rank_cutoff = 1e-10;
  std::uint64_t seed = 20240601;
  int max_qubits = kDefaultMaxQubits;
};

// One convex pure-state decomposition q_j, |phi_j> of a collection entry;
// weights include the entry weight, so sum_j q_j equals it.
struct DecompositionCandidate {
  std::vector<double> weights;
  std::vector<PureState> states;
};

struct OptimizerTrace {
  int restarts = 0;
  long iterations = 0;
  bool converged = true;
  double residual = 0.0;  // last accepted improvement of the winning restart
};

struct RoofResult {
  double value = 0.0;   // in the scale of the requested quantity
  double purity = 0.0;  // underlying extended purity
  std::vector<DecompositionCandidate> decompositions;  // one per entry
  OptimizerTrace trace;

  std::string to_json() const;
};

// Extended stabilizer purity: a certified lower bound on
// sup over decompositions of sum_ij q_ij P_alpha(phi_ij), obtained by local
// ascent over the purification isometries (columns of E diag(sqrt(lambda))
// mixed by an m x r isometry) from seeded random restarts. Pure entries
// contribute P_alpha directly without optimization.
RoofResult extended_purity(const StateCollection& collection, int alpha,
                           const RoofOptions& options = {});

// Thin wrappers: M-hat = log2(P-hat)/(1-alpha) and 1 - P-hat.
RoofResult extended_entropy_bits(const StateCollection& collection, int alpha,
                                 const RoofOptions& options = {});
RoofResult extended_linear(const StateCollection& collection, int alpha,
                           const RoofOptions& options = {});

// Upper-bound certificate for M_alpha^min: the smallest M_alpha over pure
// states in the support of any entry, minimized by local descent over range
// vectors. Pure collections return min_i M_alpha(phi_i) exactly.
RoofResult collection_min_entropy(const StateCollection& collection, int alpha,
                                  const RoofOptions& options = {});

// Exhaustive desk-scale oracle for rank-2 density matrices: all 2-term
// decompositions on a (theta, phi) grid of grid^2 points plus random m = 3, 4
// refinements. Lower-bound oracle with grid-resolution error O(1/grid).
double roof_oracle_rank2(const DensityState& rho, int alpha, int grid = 720,
                         std::uint64_t seed = 77);

// Average purity of an explicit candidate (weights are renormalized
// internally), used by the sup-property tests.
double candidate_average_purity(const DecompositionCandidate& candidate, int alpha,
                                int max_qubits = kDefaultMaxQubits);

// Whether sum_j q_j phi_j phi_j^dag reconstructs weight * rho within tol in
// max-entry norm.
bool candidate_reconstructs(const DecompositionCandidate& candidate, const DensityState& rho,
                            double weight, double tol = 1e-8);

// The decomposition induced by an m x r isometry on the entry's eigenbasis.
DecompositionCandidate decomposition_from_isometry(const DensityState& rho,
                                                   const Eigen::MatrixXcd& isometry,
                                                   double entry_weight = 1.0);

}  // namespace stabent
