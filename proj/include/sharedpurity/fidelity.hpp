#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sharedpurity/states.hpp"

namespace sharedpurity {

// Which set of product states the local fidelity is maximized over:
//  - full_product: states product across every party
//  - n_gen: states product across at least one bipartition (not genuinely
//    multiparty entangled); the maximum over all 2^(N-1)-1 bipartitions
enum class Variant { full_product, n_gen };

struct OptimizerConfig {
  int n_starts = 64;      // random starts, in addition to deterministic ones
  int max_sweeps = 500;   // alternating sweeps per start
  double tol = 1e-12;     // convergence: objective gain per sweep below this
  std::uint64_t seed = 0; // per-start streams derive from (seed, start index)
};

// Product ansatz achieving the reported local fidelity: one unit-norm factor
// per party (full_product) or one per bipartition block (n_gen).
struct ProductAnsatz {
  std::vector<Vec> factors;
  std::optional<std::pair<PartyIndexSet, PartyIndexSet>> bipartition;
};

struct Diagnostics {
  int n_starts = 0;            // total starts explored (deterministic + random)
  int best_start_index = 0;    // index of the start achieving the maximum
  int iterations = 0;          // sweeps used by the winning start
  bool converged = true;
  int objective_history_length = 0;
};

struct SharedPurityResult {
  double f_global = 0.0;
  double f_local = 0.0;
  double s_p = 0.0;  // f_global - f_local, exactly
  Variant variant = Variant::full_product;
  Diagnostics diagnostics;
};

struct SchmidtData {
  PartyIndexSet block_a, block_b;
  std::vector<double> coefficients;  // descending, squares sum to 1
};

struct LocalFidelityOutcome {
  double value = 0.0;
  ProductAnsatz ansatz;
  Diagnostics diagnostics;
  std::vector<double> history;  // objective after each alternating step of the
                                // winning start (history[0] = initial value)
};

// Largest eigenvalue of the state (equals 1 exactly when the input is pure).
double global_fidelity(const DensityOperator& state);

// Best product-state overlap <phi|rho|phi> found by multistart alternating
// conditional-eigenvector optimization. Deterministic starts: every
// computational-basis product state and the product of per-party top
// eigenvectors of the single-party marginals; plus config.n_starts
// Haar-random product starts. Guarantees value >= max diagonal entry of rho,
// and value >= lambda_max/d (each basis start is feasible).
LocalFidelityOutcome local_fidelity(const DensityOperator& state, Variant variant,
                                    const OptimizerConfig& config);

SharedPurityResult shared_purity(const DensityOperator& state, Variant variant,
                                 const OptimizerConfig& config);

// Schmidt coefficients of a pure state across block_a vs its complement.
SchmidtData schmidt(const PureState& psi, const PartyIndexSet& block_a);

// Shared purity of a pure state. full_product: 1 - (best product overlap)
// via the optimizer with the global fidelity fixed at exactly 1.
// n_gen: 1 - max over bipartitions of (top Schmidt coefficient)^2, exact.
double pure_state_shared_purity(const PureState& psi, Variant variant,
                                const OptimizerConfig& config = {});

// All bipartitions (A|B) of {0..n_parties-1} with party 0 in A, B non-empty.
std::vector<std::pair<PartyIndexSet, PartyIndexSet>> bipartitions(int n_parties);

namespace detail {
// One alternating-optimization run from a given start; factors are updated in
// place, history (if non-null) receives the objective after every party
// update, prefixed by the initial objective. Exposed for property tests.
double run_alternating(const Mat& rho, const std::vector<int>& dims,
                       std::vector<Vec>& factors, int max_sweeps, double tol,
                       std::vector<double>* history, int& sweeps_used,
                       bool& converged);
}  // namespace detail

}  // namespace sharedpurity
