#include "sharedpurity/families.hpp"

#include <cmath>

#include "json.hpp"
#include "sharedpurity/rng.hpp"

namespace sharedpurity {

using nlohmann::json;

namespace {

const std::map<std::string, FamilyTag> kNameToTag = {
    {"bell_product_admixture", FamilyTag::bell_product_admixture},
    {"bell_mixture", FamilyTag::bell_mixture},
    {"noisy_pure", FamilyTag::noisy_pure},
    {"noisy_ghz_n", FamilyTag::noisy_ghz_n},
    {"generalized_ghz", FamilyTag::generalized_ghz},
    {"generalized_w", FamilyTag::generalized_w},
    {"ghz_class", FamilyTag::ghz_class},
    {"w_class", FamilyTag::w_class},
};

constexpr double kPi = M_PI;

void check_range(const FamilySpec& spec, const std::string& key, double lo,
                 double hi, bool lo_open = false, bool hi_open = false) {
  const double v = spec.param(key);
  const bool below = lo_open ? (v <= lo) : (v < lo);
  const bool above = hi_open ? (v >= hi) : (v > hi);
  if (below || above)
    throw InputError("parameter " + key + " = " + std::to_string(v) +
                     " is outside the declared range for family " +
                     family_name(spec.family));
}

Vec basis_vec(Eigen::Index dim, Eigen::Index idx) {
  Vec v = Vec::Zero(dim);
  v(idx) = 1.0;
  return v;
}

}  // namespace

std::string family_name(FamilyTag tag) {
  for (const auto& [name, t] : kNameToTag)
    if (t == tag) return name;
  throw std::logic_error("unknown family tag");
}

FamilyTag family_from_name(const std::string& name) {
  const auto it = kNameToTag.find(name);
  if (it == kNameToTag.end()) throw InputError("unknown family name: " + name);
  return it->second;
}

double FamilySpec::param(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end())
    throw InputError("family " + family_name(family) + " is missing parameter " + key);
  return it->second;
}

int FamilySpec::int_param(const std::string& key) const {
  const double v = param(key);
  const long r = std::lround(v);
  if (std::abs(v - double(r)) > 1e-9)
    throw InputError("parameter " + key + " must be an integer, got " + std::to_string(v));
  return static_cast<int>(r);
}

bool family_is_pure(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::generalized_ghz:
    case FamilyTag::generalized_w:
    case FamilyTag::ghz_class:
    case FamilyTag::w_class:
      return true;
    default:
      return false;
  }
}

void FamilySpec::validate() const {
  switch (family) {
    case FamilyTag::bell_product_admixture:
    case FamilyTag::bell_mixture:
      check_range(*this, "p", 0.0, 1.0);
      break;
    case FamilyTag::noisy_pure:
      check_range(*this, "p", 0.0, 1.0);
      check_range(*this, "theta", 0.0, kPi / 4);
      break;
    case FamilyTag::noisy_ghz_n: {
      check_range(*this, "p", 0.0, 1.0);
      const int d = int_param("d");
      const int n = int_param("n");
      if (d < 2) throw InputError("parameter d must be >= 2");
      if (n < 2) throw InputError("parameter n must be >= 2");
      if (n * std::log2(double(d)) > 12.0 + 1e-9)
        throw InputError("state dimension d^n exceeds the supported 12-qubit total");
      break;
    }
    case FamilyTag::generalized_ghz:
      check_range(*this, "theta", 0.0, kPi);
      check_range(*this, "phi", 0.0, 2 * kPi, false, true);
      break;
    case FamilyTag::generalized_w:
      check_range(*this, "theta1", 0.0, kPi / 2);
      check_range(*this, "theta2", 0.0, kPi / 2);
      check_range(*this, "phi1", 0.0, 2 * kPi, false, true);
      check_range(*this, "phi2", 0.0, 2 * kPi, false, true);
      break;
    case FamilyTag::ghz_class: {
      check_range(*this, "delta", 0.0, kPi / 4, true, false);
      check_range(*this, "theta1", 0.0, kPi / 2, true, false);
      check_range(*this, "theta2", 0.0, kPi / 2, true, false);
      check_range(*this, "theta3", 0.0, kPi / 2, true, false);
      check_range(*this, "phi", 0.0, 2 * kPi, false, true);
      const double de = param("delta"), ph = param("phi");
      const double c = std::cos(param("theta1")) * std::cos(param("theta2")) *
                       std::cos(param("theta3"));
      const double k = 1.0 / (1.0 + 2.0 * std::cos(de) * std::sin(de) * c * std::cos(ph));
      if (!(k > 0.5) || !std::isfinite(k))
        throw InputError("normalization factor K = " + std::to_string(k) +
                         " is outside (1/2, inf)");
      break;
    }
    case FamilyTag::w_class:
      // Construction accepts the closed right endpoint (phi2 = pi/2 zeroes
      // the |100> amplitude, phi3 = pi/2 the |000> one); the ensemble
      // sampler stays on the open interior for phi1, phi2.
      check_range(*this, "phi1", 0.0, kPi / 2, true, false);
      check_range(*this, "phi2", 0.0, kPi / 2, true, false);
      check_range(*this, "phi3", 0.0, kPi / 2, true, false);
      break;
  }
}

PureState build_pure(const FamilySpec& spec) {
  spec.validate();
  PureState psi;
  switch (spec.family) {
    case FamilyTag::generalized_ghz: {
      const double t = spec.param("theta"), ph = spec.param("phi");
      psi.dims = {2, 2, 2};
      psi.amps = Vec::Zero(8);
      psi.amps(0b000) = std::cos(t);
      psi.amps(0b111) = std::polar(std::sin(t), ph);
      break;
    }
    case FamilyTag::generalized_w: {
      const double t1 = spec.param("theta1"), t2 = spec.param("theta2");
      const double p1 = spec.param("phi1"), p2 = spec.param("phi2");
      psi.dims = {2, 2, 2};
      psi.amps = Vec::Zero(8);
      psi.amps(0b001) = std::sin(t1) * std::cos(t2);
      psi.amps(0b010) = std::polar(std::sin(t1) * std::sin(t2), p1);
      psi.amps(0b100) = std::polar(std::cos(t1), p2);
      break;
    }
    case FamilyTag::ghz_class: {
      const double de = spec.param("delta"), ph = spec.param("phi");
      const double th[3] = {spec.param("theta1"), spec.param("theta2"),
                            spec.param("theta3")};
      Vec xi[3];
      for (int i = 0; i < 3; ++i) {
        xi[i] = Vec(2);
        xi[i] << std::cos(th[i]), std::sin(th[i]);
      }
      psi.dims = {2, 2, 2};
      psi.amps = Vec::Zero(8);
      psi.amps(0b000) = std::cos(de);
      const Cplx w = std::polar(std::sin(de), ph);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c)
            psi.amps(4 * a + 2 * b + c) += w * xi[0](a) * xi[1](b) * xi[2](c);
      psi.amps.normalize();  // multiplies by sqrt(K)
      break;
    }
    case FamilyTag::w_class: {
      const double p1 = spec.param("phi1"), p2 = spec.param("phi2"),
                   p3 = spec.param("phi3");
      psi.dims = {2, 2, 2};
      psi.amps = Vec::Zero(8);
      psi.amps(0b001) = std::sin(p1) * std::sin(p2) * std::sin(p3);
      psi.amps(0b010) = std::cos(p1) * std::sin(p2) * std::sin(p3);
      psi.amps(0b100) = std::cos(p2) * std::sin(p3);
      psi.amps(0b000) = std::cos(p3);
      break;
    }
    default:
      throw InputError("family " + family_name(spec.family) +
                       " is not a pure-state family");
  }
  psi.validate();
  return psi;
}

DensityOperator build(const FamilySpec& spec) {
  spec.validate();
  if (family_is_pure(spec.family)) return to_density(build_pure(spec));

  DensityOperator out;
  switch (spec.family) {
    case FamilyTag::bell_product_admixture: {
      const double p = spec.param("p");
      Vec minus(4);
      minus << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
      out.dims = {2, 2};
      out.rho = p * basis_vec(4, 0) * basis_vec(4, 0).adjoint() +
                (1.0 - p) * minus * minus.adjoint();
      break;
    }
    case FamilyTag::bell_mixture: {
      const double p = spec.param("p");
      Vec minus(4), plus(4);
      minus << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
      plus << 0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0;
      out.dims = {2, 2};
      out.rho = p * minus * minus.adjoint() + (1.0 - p) * plus * plus.adjoint();
      break;
    }
    case FamilyTag::noisy_pure: {
      const double p = spec.param("p"), t = spec.param("theta");
      Vec psi = Vec::Zero(4);
      psi(0) = std::cos(t);
      psi(3) = std::sin(t);
      out.dims = {2, 2};
      out.rho = p * psi * psi.adjoint() + (1.0 - p) * 0.25 * Mat::Identity(4, 4);
      break;
    }
    case FamilyTag::noisy_ghz_n: {
      const double p = spec.param("p");
      const int d = spec.int_param("d");
      const int n = spec.int_param("n");
      out.dims.assign(n, d);
      const Eigen::Index dim = dims_product(out.dims);
      Vec ghz = Vec::Zero(dim);
      Eigen::Index stride = 0;  // index of |j...j> is j * (d^{n-1}+...+1)
      for (Eigen::Index s = 1, k = 0; k < n; ++k, s *= d) stride += s;
      for (int j = 0; j < d; ++j) ghz(j * stride) = 1.0 / std::sqrt(double(d));
      out.rho = p * ghz * ghz.adjoint() +
                (1.0 - p) / double(dim) * Mat::Identity(dim, dim);
      break;
    }
    default:
      throw std::logic_error("unhandled family");
  }
  out.validate();
  return out;
}

std::optional<double> oracle_shared_purity(const FamilySpec& spec) {
  spec.validate();
  switch (spec.family) {
    case FamilyTag::bell_product_admixture: {
      const double p = spec.param("p");
      const double low = (1.0 - p) * (1.0 - 2.0 * p) / (2.0 - 3.0 * p);
      if (std::abs(p - 0.5) < 1e-12 && std::abs(low) > 1e-12)
        throw std::logic_error("branch mismatch at p = 1/2");
      return p < 0.5 ? low : 0.0;
    }
    case FamilyTag::bell_mixture:
      return std::abs(spec.param("p") - 0.5);
    case FamilyTag::noisy_pure: {
      const double c = std::cos(spec.param("theta")), s = std::sin(spec.param("theta"));
      return spec.param("p") * (1.0 - std::max(c * c, s * s));
    }
    case FamilyTag::noisy_ghz_n:
      return spec.param("p") * (1.0 - 1.0 / spec.int_param("d"));
    case FamilyTag::generalized_ghz: {
      const double c = std::cos(spec.param("theta")), s = std::sin(spec.param("theta"));
      return 1.0 - std::max(c * c, s * s);
    }
    default:
      return std::nullopt;
  }
}

std::optional<double> oracle_local_fidelity(const FamilySpec& spec) {
  spec.validate();
  switch (spec.family) {
    case FamilyTag::bell_product_admixture: {
      const double p = spec.param("p");
      return p <= 0.5 ? (1.0 - p) * (1.0 - p) / (2.0 - 3.0 * p) : p;
    }
    case FamilyTag::bell_mixture:
      return 0.5;
    case FamilyTag::noisy_pure: {
      const double c = std::cos(spec.param("theta")), s = std::sin(spec.param("theta"));
      return spec.param("p") * std::max(c * c, s * s) + (1.0 - spec.param("p")) / 4.0;
    }
    case FamilyTag::noisy_ghz_n: {
      const double p = spec.param("p");
      const int d = spec.int_param("d");
      const int n = spec.int_param("n");
      return p / d + (1.0 - p) / std::pow(double(d), n);
    }
    default:
      return std::nullopt;
  }
}

std::vector<FamilySpec> sample_class(FamilyTag tag, long n, std::uint64_t seed) {
  if (n < 1) throw InputError("sample count must be >= 1");
  std::vector<FamilySpec> out;
  out.reserve(n);
  for (long i = 0; i < n; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    FamilySpec s;
    s.family = tag;
    switch (tag) {
      case FamilyTag::ghz_class:
        s.params["delta"] = kPi / 4 * rng.uniform_pos();
        s.params["theta1"] = kPi / 2 * rng.uniform_pos();
        s.params["theta2"] = kPi / 2 * rng.uniform_pos();
        s.params["theta3"] = kPi / 2 * rng.uniform_pos();
        s.params["phi"] = 2 * kPi * rng.uniform();
        break;
      case FamilyTag::w_class: {
        auto open_unit = [&rng]() {
          double u;
          do {
            u = rng.uniform();
          } while (u == 0.0);
          return u;
        };
        s.params["phi1"] = kPi / 2 * open_unit();
        s.params["phi2"] = kPi / 2 * open_unit();
        s.params["phi3"] = kPi / 2 * rng.uniform_pos();
        break;
      }
      case FamilyTag::generalized_ghz: {
        double u;
        do {
          u = rng.uniform();
        } while (u == 0.0);
        s.params["theta"] = kPi / 2 * u;
        s.params["phi"] = 2 * kPi * rng.uniform();
        break;
      }
      case FamilyTag::generalized_w: {
        const double lo = kGeneralizedWAngleMargin;
        const double hi = kPi / 2 - kGeneralizedWAngleMargin;
        s.params["theta1"] = rng.uniform(lo, hi);
        s.params["theta2"] = rng.uniform(lo, hi);
        s.params["phi1"] = 2 * kPi * rng.uniform();
        s.params["phi2"] = 2 * kPi * rng.uniform();
        break;
      }
      default:
        throw InputError("family " + family_name(tag) + " is not a sampled class");
    }
    s.validate();
    out.push_back(std::move(s));
  }
  return out;
}

std::string spec_to_json(const FamilySpec& spec) {
  json j;
  j["family"] = family_name(spec.family);
  j["params"] = spec.params;
  return j.dump();
}

FamilySpec spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON family spec: ") + e.what());
  }
  if (!j.contains("family")) throw InputError("family spec is missing \"family\"");
  FamilySpec spec;
  spec.family = family_from_name(j["family"].get<std::string>());
  if (j.contains("params"))
    for (const auto& [k, v] : j["params"].items()) spec.params[k] = v.get<double>();
  spec.validate();
  return spec;
}

}  // namespace sharedpurity
