#include "sharedpurity/monogamy.hpp"

#include <cmath>
#include <thread>

#include "sharedpurity/rng.hpp"

namespace sharedpurity {

namespace {

// Best product overlap over n_search Bloch-angle-uniform product states.
// The 4x4 marginal is Hermitian; the quadratic form is evaluated directly.
double search_local_fidelity(const Mat& rho, long n_search, Rng& rng) {
  Cplx r[4][4];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) r[a][b] = rho(a, b);
  double best = 0.0;
  for (long s = 0; s < n_search; ++s) {
    const double t1 = rng.uniform(0.0, M_PI), p1 = rng.uniform(0.0, 2.0 * M_PI);
    const double t2 = rng.uniform(0.0, M_PI), p2 = rng.uniform(0.0, 2.0 * M_PI);
    const Cplx u0 = std::cos(0.5 * t1), u1 = std::polar(std::sin(0.5 * t1), p1);
    const Cplx v0 = std::cos(0.5 * t2), v1 = std::polar(std::sin(0.5 * t2), p2);
    const Cplx w[4] = {u0 * v0, u0 * v1, u1 * v0, u1 * v1};
    double val = 0.0;
    for (int a = 0; a < 4; ++a) {
      val += r[a][a].real() * std::norm(w[a]);
      for (int b = a + 1; b < 4; ++b)
        val += 2.0 * (std::conj(w[a]) * r[a][b] * w[b]).real();
    }
    if (val > best) best = val;
  }
  return best;
}

double top_eigenvalue(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

LocalFidelityMethod default_method(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::ghz_class:
    case FamilyTag::w_class:
    case FamilyTag::generalized_w:
      return LocalFidelityMethod::randomized_search;
    default:
      return LocalFidelityMethod::exact_multistart;
  }
}

MonogamyRecord monogamy_score(const PureState& psi, const MonogamyConfig& config,
                              std::uint64_t search_seed) {
  psi.validate();
  if (psi.n_parties() != 3)
    throw InputError("monogamy score requires exactly three parties, got " +
                     std::to_string(psi.n_parties()));

  MonogamyRecord rec;
  const SchmidtData cut = schmidt(psi, PartyIndexSet{{0}});
  rec.s_p_1_23 = 1.0 - cut.coefficients.front() * cut.coefficients.front();

  const DensityOperator full = to_density(psi);
  const DensityOperator rho12 = partial_trace(full, PartyIndexSet{{0, 1}});
  const DensityOperator rho13 = partial_trace(full, PartyIndexSet{{0, 2}});

  if (config.method == LocalFidelityMethod::exact_multistart) {
    const SharedPurityResult r12 =
        shared_purity(rho12, Variant::full_product, config.optimizer);
    const SharedPurityResult r13 =
        shared_purity(rho13, Variant::full_product, config.optimizer);
    rec.s_p_12 = r12.s_p;
    rec.s_p_13 = r13.s_p;
    rec.converged = r12.diagnostics.converged && r13.diagnostics.converged;
  } else {
    Rng rng(search_seed);
    rec.s_p_12 = top_eigenvalue(rho12.rho) -
                 search_local_fidelity(rho12.rho, config.n_search, rng);
    rec.s_p_13 = top_eigenvalue(rho13.rho) -
                 search_local_fidelity(rho13.rho, config.n_search, rng);
    rec.converged = true;
  }

  rec.delta = rec.s_p_1_23 - rec.s_p_12 - rec.s_p_13;
  rec.delta_sq = rec.s_p_1_23 * rec.s_p_1_23 - rec.s_p_12 * rec.s_p_12 -
                 rec.s_p_13 * rec.s_p_13;
  rec.monogamous = rec.delta >= 0.0;
  rec.monogamous_sq = rec.delta_sq >= 0.0;
  return rec;
}

std::vector<MonogamyRecord> scan_class(FamilyTag tag, long n, std::uint64_t seed,
                                       const MonogamyConfig& config, int jobs) {
  const std::vector<FamilySpec> specs = sample_class(tag, n, seed);
  std::vector<MonogamyRecord> records(n);

  auto work = [&](long begin, long end) {
    for (long i = begin; i < end; ++i) {
      const PureState psi = build_pure(specs[i]);
      // the search stream continues the sample's own parameter stream
      MonogamyRecord rec = monogamy_score(psi, config, mix_seed(seed, i) + 1);
      rec.spec = specs[i];
      rec.has_spec = true;
      records[i] = std::move(rec);
    }
  };

  jobs = std::max(1, jobs);
  if (jobs == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (n + jobs - 1) / jobs;
    for (int t = 0; t < jobs; ++t) {
      const long b = t * chunk, e = std::min(n, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return records;
}

FractionEstimate estimate_fraction(const std::vector<MonogamyRecord>& records,
                                   bool squared, std::uint64_t seed) {
  FractionEstimate est;
  est.n_samples = static_cast<long>(records.size());
  est.seed = seed;
  for (const auto& rec : records) {
    const bool mono = squared ? rec.monogamous_sq : rec.monogamous;
    if (!mono) ++est.n_non_monogamous;
    if (!rec.converged) ++est.n_unconverged;
  }
  est.fraction = double(est.n_non_monogamous) / double(est.n_samples);
  est.std_err = std::sqrt(est.fraction * (1.0 - est.fraction) / double(est.n_samples));
  est.flagged = est.n_unconverged * 1000 > est.n_samples;  // > 0.1% of n
  return est;
}

FractionEstimate fraction_non_monogamous(FamilyTag tag, long n, std::uint64_t seed,
                                         bool squared, const MonogamyConfig& config,
                                         int jobs) {
  if (n < 100) throw InputError("fraction estimation requires n >= 100");
  return estimate_fraction(scan_class(tag, n, seed, config, jobs), squared, seed);
}

}  // namespace sharedpurity
