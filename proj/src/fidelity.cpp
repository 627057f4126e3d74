#include "sharedpurity/fidelity.hpp"

#include <algorithm>
#include <cmath>

#include "sharedpurity/rng.hpp"

namespace sharedpurity {

double global_fidelity(const DensityOperator& state) {
  state.validate();
  return eig_hermitian(state).first(0);
}

static Vec kron_vec(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

static Vec product_vector(const std::vector<Vec>& factors) {
  Vec out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron_vec(out, factors[k]);
  return out;
}

namespace detail {

double run_alternating(const Mat& rho, const std::vector<int>& dims,
                       std::vector<Vec>& factors, int max_sweeps, double tol,
                       std::vector<double>* history, int& sweeps_used,
                       bool& converged) {
  const int n = static_cast<int>(dims.size());
  const Eigen::Index d_total = rho.rows();

  Vec phi = product_vector(factors);
  double obj = (phi.adjoint() * rho * phi).real()(0);
  if (history) history->push_back(obj);

  converged = false;
  sweeps_used = 0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double sweep_start = obj;
    for (int k = 0; k < n; ++k) {
      const int dk = dims[k];
      Eigen::Index left_dim = 1, right_dim = 1;
      for (int j = 0; j < k; ++j) left_dim *= dims[j];
      for (int j = k + 1; j < n; ++j) right_dim *= dims[j];
      Vec left = Vec::Ones(1), right = Vec::Ones(1);
      for (int j = 0; j < k; ++j) left = kron_vec(left, factors[j]);
      for (int j = k + 1; j < n; ++j) right = kron_vec(right, factors[j]);

      // isometry whose column q is (left ⊗ e_q ⊗ right)
      Mat V = Mat::Zero(d_total, dk);
      for (Eigen::Index l = 0; l < left_dim; ++l)
        for (int q = 0; q < dk; ++q)
          for (Eigen::Index r = 0; r < right_dim; ++r)
            V((l * dk + q) * right_dim + r, q) = left(l) * right(r);

      Mat M = V.adjoint() * (rho * V);  // effective dk x dk operator
      M = Cplx(0.5, 0.0) * (M + M.adjoint().eval());
      Eigen::SelfAdjointEigenSolver<Mat> es(M);
      factors[k] = es.eigenvectors().col(dk - 1);
      obj = es.eigenvalues()(dk - 1);
      if (history) history->push_back(obj);
    }
    ++sweeps_used;
    if (obj - sweep_start < tol) {
      converged = true;
      break;
    }
  }
  return obj;
}

}  // namespace detail

namespace {

struct MultistartOutcome {
  double value = -1.0;
  std::vector<Vec> factors;
  Diagnostics diagnostics;
  std::vector<double> history;
};

// Multistart alternating optimization over product states with the given
// effective party dimensions.
MultistartOutcome multistart_optimize(const Mat& rho, const std::vector<int>& dims,
                                      const OptimizerConfig& config) {
  const int n = static_cast<int>(dims.size());
  const Eigen::Index d_total = rho.rows();
  const auto strides = index_strides(dims);

  MultistartOutcome best;
  int start_index = 0;
  auto try_start = [&](std::vector<Vec> factors) {
    std::vector<double> history;
    int sweeps = 0;
    bool conv = false;
    const double value = detail::run_alternating(rho, dims, factors, config.max_sweeps,
                                                 config.tol, &history, sweeps, conv);
    if (value > best.value) {
      best.value = value;
      best.factors = std::move(factors);
      best.history = std::move(history);
      best.diagnostics.best_start_index = start_index;
      best.diagnostics.iterations = sweeps;
      best.diagnostics.converged = conv;
    }
    ++start_index;
  };

  // every computational-basis product state
  for (Eigen::Index idx = 0; idx < d_total; ++idx) {
    std::vector<Vec> factors(n);
    for (int k = 0; k < n; ++k) {
      const int digit = static_cast<int>((idx / strides[k]) % dims[k]);
      factors[k] = Vec::Zero(dims[k]);
      factors[k](digit) = 1.0;
    }
    try_start(std::move(factors));
  }

  // product of per-party top marginal eigenvectors
  {
    DensityOperator tmp{dims, rho};
    std::vector<Vec> factors(n);
    for (int k = 0; k < n; ++k) {
      const DensityOperator marg = partial_trace(tmp, PartyIndexSet{{k}});
      Eigen::SelfAdjointEigenSolver<Mat> es(marg.rho);
      factors[k] = es.eigenvectors().col(dims[k] - 1);
    }
    try_start(std::move(factors));
  }

  // Haar-random product starts on independent per-index streams
  for (int s = 0; s < config.n_starts; ++s) {
    Rng rng = Rng::stream(config.seed, static_cast<std::uint64_t>(s));
    std::vector<Vec> factors(n);
    for (int k = 0; k < n; ++k) {
      factors[k] = Vec(dims[k]);
      for (int q = 0; q < dims[k]; ++q) factors[k](q) = rng.complex_normal();
      factors[k].normalize();
    }
    try_start(std::move(factors));
  }

  best.diagnostics.n_starts = start_index;
  best.diagnostics.objective_history_length = static_cast<int>(best.history.size());
  return best;
}

}  // namespace

std::vector<std::pair<PartyIndexSet, PartyIndexSet>> bipartitions(int n_parties) {
  std::vector<std::pair<PartyIndexSet, PartyIndexSet>> out;
  if (n_parties < 2) return out;
  const unsigned full = (1u << (n_parties - 1)) - 1u;
  for (unsigned mask = 0; mask < full; ++mask) {  // party 0 always in block A
    PartyIndexSet a, b;
    a.parties.push_back(0);
    for (int p = 1; p < n_parties; ++p) {
      if (mask & (1u << (p - 1)))
        a.parties.push_back(p);
      else
        b.parties.push_back(p);
    }
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

LocalFidelityOutcome local_fidelity(const DensityOperator& state, Variant variant,
                                    const OptimizerConfig& config) {
  state.validate();
  const int n = state.n_parties();

  if (variant == Variant::full_product || n <= 2) {
    MultistartOutcome r = multistart_optimize(state.rho, state.dims, config);
    LocalFidelityOutcome out;
    out.value = r.value;
    out.ansatz.factors = std::move(r.factors);
    if (variant == Variant::n_gen && n == 2)
      out.ansatz.bipartition = {PartyIndexSet{{0}}, PartyIndexSet{{1}}};
    out.diagnostics = r.diagnostics;
    out.history = std::move(r.history);
    return out;
  }

  // n-gen: best over all bipartitions, optimizing product-across-one-cut states
  LocalFidelityOutcome out;
  out.value = -1.0;
  bool all_converged = true;
  for (const auto& [block_a, block_b] : bipartitions(n)) {
    std::vector<int> order(block_a.parties);
    order.insert(order.end(), block_b.parties.begin(), block_b.parties.end());
    const DensityOperator grouped = permute_parties(state, order);
    Eigen::Index da = 1, db = 1;
    for (int p : block_a.parties) da *= state.dims[p];
    for (int p : block_b.parties) db *= state.dims[p];
    const std::vector<int> block_dims = {static_cast<int>(da), static_cast<int>(db)};
    MultistartOutcome r = multistart_optimize(grouped.rho, block_dims, config);
    all_converged = all_converged && r.diagnostics.converged;
    if (r.value > out.value) {
      out.value = r.value;
      out.ansatz.factors = std::move(r.factors);
      out.ansatz.bipartition = {block_a, block_b};
      out.diagnostics = r.diagnostics;
      out.history = std::move(r.history);
    }
  }
  out.diagnostics.converged = all_converged;
  return out;
}

SharedPurityResult shared_purity(const DensityOperator& state, Variant variant,
                                 const OptimizerConfig& config) {
  const double fg = global_fidelity(state);
  LocalFidelityOutcome local = local_fidelity(state, variant, config);
  SharedPurityResult out;
  out.f_global = fg;
  // round-off guard: the optimum can exceed fg by machine epsilon only
  out.f_local = std::clamp(local.value, 0.0, fg);
  out.s_p = out.f_global - out.f_local;
  out.variant = variant;
  out.diagnostics = local.diagnostics;
  return out;
}

SchmidtData schmidt(const PureState& psi, const PartyIndexSet& block_a) {
  psi.validate();
  const int n = psi.n_parties();
  block_a.validate(n);
  SchmidtData out;
  out.block_a = block_a;
  for (int p = 0; p < n; ++p)
    if (!block_a.contains(p)) out.block_b.parties.push_back(p);
  if (out.block_b.parties.empty())
    throw InputError("bipartition block B is empty");

  std::vector<int> order(block_a.parties);
  order.insert(order.end(), out.block_b.parties.begin(), out.block_b.parties.end());
  const PureState grouped = permute_parties(psi, order);
  Eigen::Index da = 1;
  for (int p : block_a.parties) da *= psi.dims[p];
  const Eigen::Index db = grouped.dim() / da;
  Mat m(da, db);
  for (Eigen::Index a = 0; a < da; ++a)
    for (Eigen::Index b = 0; b < db; ++b) m(a, b) = grouped.amps(a * db + b);
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  out.coefficients.assign(sv.data(), sv.data() + sv.size());
  double sumsq = 0.0;
  for (double s : out.coefficients) sumsq += s * s;
  if (std::abs(sumsq - 1.0) > tol::schmidt_norm)
    throw std::runtime_error("Schmidt coefficients do not square-sum to 1");
  return out;
}

double pure_state_shared_purity(const PureState& psi, Variant variant,
                                const OptimizerConfig& config) {
  psi.validate();
  if (psi.n_parties() < 2) return 0.0;
  if (variant == Variant::full_product) {
    const LocalFidelityOutcome local =
        local_fidelity(to_density(psi), Variant::full_product, config);
    return 1.0 - std::min(local.value, 1.0);  // f_global of a pure state is 1
  }
  double max_sq = 0.0;
  for (const auto& [block_a, block_b] : bipartitions(psi.n_parties())) {
    const SchmidtData sd = schmidt(psi, block_a);
    max_sq = std::max(max_sq, sd.coefficients.front() * sd.coefficients.front());
  }
  return 1.0 - max_sq;
}

}  // namespace sharedpurity
