#include "sharedpurity/states.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sharedpurity/rng.hpp"

namespace sharedpurity {

using nlohmann::json;

Eigen::Index dims_product(const std::vector<int>& dims) {
  Eigen::Index d = 1;
  for (int dk : dims) d *= dk;
  return d;
}

std::vector<Eigen::Index> index_strides(const std::vector<int>& dims) {
  std::vector<Eigen::Index> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k)
    s[k] = s[k + 1] * dims[k + 1];
  return s;
}

static void check_dims(const std::vector<int>& dims) {
  if (dims.empty()) throw InputError("party dimension list is empty");
  for (int d : dims)
    if (d < 2) throw InputError("party dimensions must be >= 2, got " + std::to_string(d));
}

void PartyIndexSet::validate(int n_parties) const {
  if (parties.empty()) throw InputError("party index set is empty");
  for (std::size_t i = 0; i < parties.size(); ++i) {
    if (parties[i] < 0 || parties[i] >= n_parties)
      throw InputError("party index " + std::to_string(parties[i]) +
                       " out of range for " + std::to_string(n_parties) + " parties");
    if (i > 0 && parties[i] <= parties[i - 1])
      throw InputError("party index set must be strictly increasing");
  }
}

bool PartyIndexSet::contains(int p) const {
  return std::binary_search(parties.begin(), parties.end(), p);
}

void PureState::validate() const {
  check_dims(dims);
  if (amps.size() != dims_product(dims))
    throw InputError("dimension mismatch: amplitude count " +
                     std::to_string(amps.size()) + " does not equal the product of party dimensions");
  const double nrm = amps.norm();
  if (std::abs(nrm - 1.0) > tol::pure_norm)
    throw InputError("unit normalization violated: ||psi|| = " + std::to_string(nrm));
}

void DensityOperator::validate() const {
  check_dims(dims);
  if (rho.rows() != rho.cols())
    throw InputError("dimension mismatch: density matrix is not square");
  if (rho.rows() != dims_product(dims))
    throw InputError("dimension mismatch: matrix size " + std::to_string(rho.rows()) +
                     " does not equal the product of party dimensions");
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol::hermiticity)
    throw InputError("hermiticity violated: max |rho - rho^dag| = " + std::to_string(herm));
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tol::unit_trace)
    throw InputError("unit trace violated: tr(rho) = " + std::to_string(tr));
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin < tol::psd_floor)
    throw InputError("positive semidefiniteness violated: min eigenvalue = " +
                     std::to_string(lmin));
}

DensityOperator to_density(const PureState& psi) {
  DensityOperator out;
  out.dims = psi.dims;
  out.rho = psi.amps * psi.amps.adjoint();
  return out;
}

PureState tensor(const PureState& a, const PureState& b) {
  PureState out;
  out.dims = a.dims;
  out.dims.insert(out.dims.end(), b.dims.begin(), b.dims.end());
  out.amps = Vec(a.amps.size() * b.amps.size());
  for (Eigen::Index i = 0; i < a.amps.size(); ++i)
    out.amps.segment(i * b.amps.size(), b.amps.size()) = a.amps(i) * b.amps;
  return out;
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  DensityOperator out;
  out.dims = a.dims;
  out.dims.insert(out.dims.end(), b.dims.begin(), b.dims.end());
  const Eigen::Index da = a.rho.rows(), db = b.rho.rows();
  out.rho = Mat(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      out.rho.block(i * db, j * db, db, db) = a.rho(i, j) * b.rho;
  return out;
}

DensityOperator partial_trace(const DensityOperator& state,
                              const PartyIndexSet& keep) {
  keep.validate(state.n_parties());
  const auto& dims = state.dims;
  const auto strides = index_strides(dims);

  std::vector<int> traced;
  for (int p = 0; p < state.n_parties(); ++p)
    if (!keep.contains(p)) traced.push_back(p);

  // enumerate offsets of the kept and traced sub-lattices
  auto offsets_of = [&](const std::vector<int>& parts) {
    Eigen::Index count = 1;
    for (int p : parts) count *= dims[p];
    std::vector<Eigen::Index> off(count, 0);
    Eigen::Index repeat = 1;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      const int p = *it;
      for (Eigen::Index i = 0; i < count; ++i)
        off[i] += ((i / repeat) % dims[p]) * strides[p];
      repeat *= dims[p];
    }
    return off;
  };
  const auto keep_off = offsets_of(keep.parties);
  const auto tr_off = offsets_of(traced);

  DensityOperator out;
  for (int p : keep.parties) out.dims.push_back(dims[p]);
  const Eigen::Index dk = static_cast<Eigen::Index>(keep_off.size());
  out.rho = Mat::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a)
    for (Eigen::Index b = 0; b < dk; ++b) {
      Cplx acc = 0.0;
      for (Eigen::Index t : tr_off) acc += state.rho(keep_off[a] + t, keep_off[b] + t);
      out.rho(a, b) = acc;
    }
  return out;
}

static std::vector<Eigen::Index> permutation_map(const std::vector<int>& dims,
                                                 const std::vector<int>& order) {
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(order.size()) != n)
    throw InputError("party permutation length does not match party count");
  std::vector<bool> seen(n, false);
  for (int p : order) {
    if (p < 0 || p >= n || seen[p])
      throw InputError("party permutation is not a bijection");
    seen[p] = true;
  }
  std::vector<int> new_dims(n);
  for (int i = 0; i < n; ++i) new_dims[i] = dims[order[i]];
  const auto old_strides = index_strides(dims);
  const auto new_strides = index_strides(new_dims);
  const Eigen::Index d = dims_product(dims);
  std::vector<Eigen::Index> map(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::Index old_index = 0;
    for (int slot = 0; slot < n; ++slot) {
      const Eigen::Index digit = (i / new_strides[slot]) % new_dims[slot];
      old_index += digit * old_strides[order[slot]];
    }
    map[i] = old_index;
  }
  return map;
}

DensityOperator permute_parties(const DensityOperator& state,
                                const std::vector<int>& order) {
  const auto map = permutation_map(state.dims, order);
  DensityOperator out;
  out.dims.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) out.dims[i] = state.dims[order[i]];
  const Eigen::Index d = state.dim();
  out.rho = Mat(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out.rho(i, j) = state.rho(map[i], map[j]);
  return out;
}

PureState permute_parties(const PureState& psi, const std::vector<int>& order) {
  const auto map = permutation_map(psi.dims, order);
  PureState out;
  out.dims.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) out.dims[i] = psi.dims[order[i]];
  out.amps = Vec(psi.dim());
  for (Eigen::Index i = 0; i < psi.dim(); ++i) out.amps(i) = psi.amps(map[i]);
  return out;
}

std::pair<Eigen::VectorXd, Mat> eig_hermitian(const DensityOperator& state) {
  const double herm = (state.rho - state.rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol::hermiticity)
    throw InputError("hermiticity violated: max |rho - rho^dag| = " + std::to_string(herm));
  Eigen::SelfAdjointEigenSolver<Mat> es(state.rho);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("Hermitian eigensolver failed to converge");
  const Eigen::Index d = state.dim();
  Eigen::VectorXd vals(d);
  Mat vecs(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {  // ascending -> descending
    vals(i) = es.eigenvalues()(d - 1 - i);
    vecs.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    const double resid = (state.rho * vecs.col(i) - vals(i) * vecs.col(i)).norm();
    if (resid > tol::eig_residual)
      throw std::runtime_error("eigenpair residual " + std::to_string(resid) +
                               " exceeds tolerance");
  }
  return {vals, vecs};
}

PureState haar_random_pure(const std::vector<int>& dims, std::uint64_t seed) {
  check_dims(dims);
  Rng rng(seed);
  PureState psi;
  psi.dims = dims;
  psi.amps = Vec(dims_product(dims));
  for (Eigen::Index i = 0; i < psi.amps.size(); ++i) psi.amps(i) = rng.complex_normal();
  psi.amps.normalize();
  return psi;
}

// ------------------------------------------------------------------ file IO

static json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open state file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return j;
}

static std::vector<int> parse_dims(const json& j) {
  if (!j.contains("dims") || !j["dims"].is_array())
    throw InputError("state file is missing the \"dims\" array");
  std::vector<int> dims;
  for (const auto& v : j["dims"]) dims.push_back(v.get<int>());
  return dims;
}

static Cplx parse_entry(const json& v) {
  if (!v.is_array() || v.size() != 2)
    throw InputError("matrix/vector entries must be [re, im] pairs");
  return {v[0].get<double>(), v[1].get<double>()};
}

StateFile read_state_file(const std::string& path) {
  const json j = load_json(path);
  const auto dims = parse_dims(j);
  const Eigen::Index d = dims_product(dims);
  StateFile out;
  if (j.contains("vector")) {
    const auto& arr = j["vector"];
    if (static_cast<Eigen::Index>(arr.size()) != d)
      throw InputError("dimension mismatch: vector length " + std::to_string(arr.size()) +
                       " does not equal the product of party dimensions");
    out.is_pure = true;
    out.pure.dims = dims;
    out.pure.amps = Vec(d);
    for (Eigen::Index i = 0; i < d; ++i) out.pure.amps(i) = parse_entry(arr[i]);
    out.pure.validate();
  } else if (j.contains("matrix")) {
    const auto& arr = j["matrix"];
    if (static_cast<Eigen::Index>(arr.size()) != d * d)
      throw InputError("dimension mismatch: matrix entry count " + std::to_string(arr.size()) +
                       " does not equal the squared product of party dimensions");
    out.is_pure = false;
    out.mixed.dims = dims;
    out.mixed.rho = Mat(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index k = 0; k < d; ++k)
        out.mixed.rho(i, k) = parse_entry(arr[i * d + k]);  // row-major
    out.mixed.validate();
  } else {
    throw InputError("state file must contain a \"matrix\" or \"vector\" field");
  }
  return out;
}

static void dump_json(const std::string& path, const json& j) {
  std::ofstream outf(path);
  if (!outf) throw InputError("cannot write state file: " + path);
  outf << j.dump(2) << "\n";
}

void write_state_file(const std::string& path, const DensityOperator& state) {
  state.validate();
  json j;
  j["dims"] = state.dims;
  json arr = json::array();
  const Eigen::Index d = state.dim();
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k)
      arr.push_back({state.rho(i, k).real(), state.rho(i, k).imag()});
  j["matrix"] = std::move(arr);
  dump_json(path, j);
}

void write_state_file(const std::string& path, const PureState& psi) {
  psi.validate();
  json j;
  j["dims"] = psi.dims;
  json arr = json::array();
  for (Eigen::Index i = 0; i < psi.dim(); ++i)
    arr.push_back({psi.amps(i).real(), psi.amps(i).imag()});
  j["vector"] = std::move(arr);
  dump_json(path, j);
}

}  // namespace sharedpurity
