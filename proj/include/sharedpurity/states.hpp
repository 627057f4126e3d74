#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sharedpurity/constants.hpp"

namespace sharedpurity {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Thrown on malformed input (bad files, out-of-range parameters, violated
// state invariants). The message names the violated invariant.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A subset of party indices, strictly increasing, 0-based.
struct PartyIndexSet {
  std::vector<int> parties;

  PartyIndexSet() = default;
  PartyIndexSet(std::initializer_list<int> p) : parties(p) {}
  explicit PartyIndexSet(std::vector<int> p) : parties(std::move(p)) {}

  // throws InputError unless non-empty, sorted, unique, within [0, n_parties)
  void validate(int n_parties) const;
  bool contains(int p) const;
  int size() const { return static_cast<int>(parties.size()); }
};

// Pure state of N parties with local dimensions dims[0..N-1].
// Party 0 is the most significant tensor slot: basis index
// i = i_0 * (d_1 * ... * d_{N-1}) + ... + i_{N-1}.
struct PureState {
  std::vector<int> dims;
  Vec amps;

  int n_parties() const { return static_cast<int>(dims.size()); }
  Eigen::Index dim() const { return amps.size(); }
  // throws InputError naming the violated invariant (dimension consistency,
  // unit normalization)
  void validate() const;
};

// Density operator with the same party labelling convention as PureState.
struct DensityOperator {
  std::vector<int> dims;
  Mat rho;

  int n_parties() const { return static_cast<int>(dims.size()); }
  Eigen::Index dim() const { return rho.rows(); }
  // throws InputError naming the violated invariant (dimension consistency,
  // hermiticity, unit trace, positive semidefiniteness)
  void validate() const;
};

DensityOperator to_density(const PureState& psi);

PureState tensor(const PureState& a, const PureState& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

// Trace out every party not in `keep`; kept parties stay in ascending order.
DensityOperator partial_trace(const DensityOperator& state,
                              const PartyIndexSet& keep);

// Relabel parties: slot i of the result is old party order[i].
DensityOperator permute_parties(const DensityOperator& state,
                                const std::vector<int>& order);
PureState permute_parties(const PureState& psi, const std::vector<int>& order);

// Eigendecomposition of a Hermitian operator, eigenvalues sorted descending,
// eigenvectors as orthonormal columns in matching order. Residuals
// ||rho v - lambda v|| are checked against tol::eig_residual.
std::pair<Eigen::VectorXd, Mat> eig_hermitian(const DensityOperator& state);

// Haar-distributed pure state: i.i.d. standard complex Gaussian amplitudes,
// normalized. Deterministic per seed.
PureState haar_random_pure(const std::vector<int>& dims, std::uint64_t seed);

// ------------------------------------------------------------------ file IO
// JSON schema: {"dims": [d1,...,dN], "matrix": [[re, im], ...]} row-major for
// density operators; {"dims": [...], "vector": [[re, im], ...]} for pure
// states. Parsing validates the state and throws InputError with the violated
// invariant named.
struct StateFile {
  bool is_pure = false;
  PureState pure;        // valid when is_pure
  DensityOperator mixed; // valid when !is_pure
  // view as a density operator regardless of kind
  DensityOperator as_density() const { return is_pure ? to_density(pure) : mixed; }
};

StateFile read_state_file(const std::string& path);
void write_state_file(const std::string& path, const DensityOperator& state);
void write_state_file(const std::string& path, const PureState& psi);

// helpers shared with other modules
std::vector<Eigen::Index> index_strides(const std::vector<int>& dims);
Eigen::Index dims_product(const std::vector<int>& dims);

}  // namespace sharedpurity
