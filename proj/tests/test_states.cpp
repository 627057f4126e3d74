#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "sharedpurity/states.hpp"
#include "test_support.hpp"

using namespace sharedpurity;
using support::basis_state;
using support::random_density;
using support::singlet;
using support::triplet;
using support::w_state;

namespace {

bool message_names(const InputError& error, const std::string& needle) {
  return std::string(error.what()).find(needle) != std::string::npos;
}

DensityOperator maximally_mixed(const std::vector<int>& dims) {
  const Eigen::Index d = dims_product(dims);
  return DensityOperator{dims,
                         Mat::Identity(d, d) / static_cast<double>(d)};
}

}  // namespace

TEST_CASE("tensor products") {
  const DensityOperator i4 =
      tensor(maximally_mixed({2}), maximally_mixed({2}));
  CHECK(i4.dims == std::vector<int>{2, 2});
  CHECK((i4.rho - Mat::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-15);

  const PureState zero_one = tensor(basis_state({2}, 0), basis_state({2}, 1));
  CHECK(zero_one.dims == std::vector<int>{2, 2});
  CHECK(std::abs(zero_one.amps(1) - Cplx(1.0)) < 1e-15);
  CHECK(zero_one.amps.cwiseAbs().sum() == doctest::Approx(1.0));

  Mat qubit = Mat::Zero(2, 2);
  qubit(0, 0) = 0.3;
  qubit(1, 1) = 0.7;
  const DensityOperator mix =
      tensor(DensityOperator{{2}, qubit}, to_density(basis_state({2}, 0)));
  for (int i = 0; i < 4; ++i) {
    const double expected = (i == 0) ? 0.3 : (i == 2) ? 0.7 : 0.0;
    CHECK(std::abs(mix.rho(i, i) - expected) < 1e-15);
  }
}

TEST_CASE("partial trace marginals") {
  const DensityOperator half = partial_trace(to_density(singlet()), {0});
  CHECK((half.rho - Mat::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-14);

  // cos t|000> + sin t|111>, marginal on parties (0,1)
  const double t = 0.7;
  PureState ghz;
  ghz.dims = {2, 2, 2};
  ghz.amps = Vec::Zero(8);
  ghz.amps(0) = std::cos(t);
  ghz.amps(7) = std::sin(t);
  const DensityOperator pair = partial_trace(to_density(ghz), {0, 1});
  Mat expected = Mat::Zero(4, 4);
  expected(0, 0) = std::cos(t) * std::cos(t);
  expected(3, 3) = std::sin(t) * std::sin(t);
  CHECK((pair.rho - expected).cwiseAbs().maxCoeff() < 1e-12);

  // W state: marginal on (0,1) is (1/3)|00><00| + (2/3)|psi+><psi+|
  const DensityOperator w12 = partial_trace(to_density(w_state()), {0, 1});
  const Vec plus = triplet().amps;
  Mat expected_w = (plus * plus.adjoint()) * (2.0 / 3.0);
  expected_w(0, 0) += 1.0 / 3.0;
  CHECK((w12.rho - expected_w).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(partial_trace(to_density(w_state()), PartyIndexSet{}),
                  InputError);
  CHECK_THROWS_AS(partial_trace(to_density(w_state()), {0, 3}), InputError);
}

TEST_CASE("partial trace composes and preserves trace") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const DensityOperator rho = random_density({2, 2, 2}, seed);
    const DensityOperator step =
        partial_trace(partial_trace(rho, {0, 1}), {0});
    const DensityOperator direct = partial_trace(rho, {0});
    CHECK((step.rho - direct.rho).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(direct.rho.trace().real() - 1.0) < 1e-12);
  }
}

TEST_CASE("tensor then partial trace returns the factor") {
  const DensityOperator a = random_density({2}, 21);
  const DensityOperator b = random_density({3}, 22);
  const DensityOperator joint = tensor(a, b);
  CHECK(joint.dims == std::vector<int>{2, 3});
  const DensityOperator back = partial_trace(joint, {0});
  CHECK((back.rho - a.rho).cwiseAbs().maxCoeff() < 1e-12);
  const DensityOperator back_b = partial_trace(joint, {1});
  CHECK((back_b.rho - b.rho).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hermitian eigendecomposition") {
  const auto [mixed_vals, mixed_vecs] = eig_hermitian(maximally_mixed({2, 2}));
  for (int i = 0; i < 4; ++i) {
    CHECK(mixed_vals(i) == doctest::Approx(0.25).epsilon(1e-12));
  }

  // p|psi-><psi-| + (1-p)|psi+><psi+| at p = 0.7
  const double p = 0.7;
  const Vec minus = singlet().amps;
  const Vec plus = triplet().amps;
  const DensityOperator bell_mix{
      {2, 2}, p * (minus * minus.adjoint()) + (1 - p) * (plus * plus.adjoint())};
  const auto [vals, vecs] = eig_hermitian(bell_mix);
  CHECK(vals(0) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(std::abs(vecs.col(0).dot(minus)) ==
        doctest::Approx(1.0).epsilon(1e-9));

  for (std::uint64_t seed : {31u, 32u}) {
    const DensityOperator rho = random_density({2, 2}, seed);
    const auto [values, vectors] = eig_hermitian(rho);
    Mat rebuilt = Mat::Zero(4, 4);
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      rebuilt += values(i) * (vectors.col(i) * vectors.col(i).adjoint());
      sum += values(i);
      CHECK(values(i) >= -1e-9);
      if (i > 0) {
        CHECK(values(i) <= values(i - 1) + 1e-15);
      }
    }
    CHECK((rebuilt - rho.rho).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(sum - 1.0) < 1e-9);
    CHECK((vectors.adjoint() * vectors - Mat::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
  }

  Mat skew = Mat::Zero(2, 2);
  skew(0, 1) = 1.0;
  skew(0, 0) = 0.5;
  skew(1, 1) = 0.5;
  try {
    eig_hermitian(DensityOperator{{2}, skew});
    FAIL("expected InputError");
  } catch (const InputError& error) {
    CHECK(message_names(error, "hermiticity"));
  }
}

TEST_CASE("haar random states") {
  const PureState one = haar_random_pure({2}, 5);
  CHECK(std::abs(one.amps.norm() - 1.0) < 1e-12);

  const PureState a = haar_random_pure({2, 2}, 99);
  const PureState b = haar_random_pure({2, 2}, 99);
  CHECK((a.amps - b.amps).norm() == 0.0);
  const PureState c = haar_random_pure({2, 2}, 100);
  CHECK((a.amps - c.amps).norm() > 1e-3);

  double mean = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    mean += std::norm(haar_random_pure({2}, 7'000'000 + i).amps(0));
  }
  mean /= n;
  CHECK(std::abs(mean - 0.5) < 0.01);
}

TEST_CASE("validation names the violated invariant") {
  Mat off_trace = Mat::Identity(2, 2) * 0.45;
  try {
    DensityOperator{{2}, off_trace}.validate();
    FAIL("expected InputError");
  } catch (const InputError& error) {
    CHECK(message_names(error, "unit trace"));
  }

  Mat non_hermitian = Mat::Identity(2, 2) * 0.5;
  non_hermitian(0, 1) = 0.2;
  try {
    DensityOperator{{2}, non_hermitian}.validate();
    FAIL("expected InputError");
  } catch (const InputError& error) {
    CHECK(message_names(error, "hermiticity"));
  }

  Mat indefinite = Mat::Zero(2, 2);
  indefinite(0, 0) = 1.5;
  indefinite(1, 1) = -0.5;
  try {
    DensityOperator{{2}, indefinite}.validate();
    FAIL("expected InputError");
  } catch (const InputError& error) {
    CHECK(message_names(error, "positive semidefiniteness"));
  }

  PureState short_norm = basis_state({2}, 0);
  short_norm.amps *= 0.9;
  try {
    short_norm.validate();
    FAIL("expected InputError");
  } catch (const InputError& error) {
    CHECK(message_names(error, "unit normalization"));
  }

  try {
    DensityOperator{{2, 3}, Mat::Identity(4, 4) / 4.0}.validate();
    FAIL("expected InputError");
  } catch (const InputError& error) {
    CHECK(message_names(error, "dimension"));
  }
}

TEST_CASE("party permutation") {
  const PureState psi = basis_state({2, 2, 2}, 0b011);
  const PureState moved = permute_parties(psi, {2, 0, 1});
  // slot0 = old party 2 (=1), slot1 = old party 0 (=0), slot2 = old party 1
  CHECK(std::abs(moved.amps(0b101) - Cplx(1.0)) < 1e-15);

  const PureState hpsi = haar_random_pure({2, 3, 2}, 123);
  const PureState hperm = permute_parties(hpsi, {1, 2, 0});
  CHECK(hperm.dims == std::vector<int>{3, 2, 2});
  const DensityOperator via_pure = to_density(hperm);
  const DensityOperator via_density =
      permute_parties(to_density(hpsi), {1, 2, 0});
  CHECK((via_pure.rho - via_density.rho).cwiseAbs().maxCoeff() < 1e-13);
  // permuting back round-trips
  const PureState back = permute_parties(hperm, {2, 0, 1});
  CHECK((back.amps - hpsi.amps).norm() < 1e-13);
}

TEST_CASE("state files round-trip and validate") {
  const std::string dir = "test_states_io";
  std::filesystem::create_directories(dir);

  const DensityOperator rho = random_density({2, 2}, 404);
  write_state_file(dir + "/rho.json", rho);
  const StateFile loaded = read_state_file(dir + "/rho.json");
  CHECK_FALSE(loaded.is_pure);
  CHECK(loaded.mixed.dims == rho.dims);
  CHECK((loaded.mixed.rho - rho.rho).cwiseAbs().maxCoeff() < 1e-15);

  const PureState psi = haar_random_pure({2, 2, 2}, 405);
  write_state_file(dir + "/psi.json", psi);
  const StateFile loaded_pure = read_state_file(dir + "/psi.json");
  CHECK(loaded_pure.is_pure);
  CHECK((loaded_pure.pure.amps - psi.amps).norm() < 1e-15);

  {
    std::ofstream bad(dir + "/bad.json");
    bad << "{ not json";
  }
  CHECK_THROWS_AS(read_state_file(dir + "/bad.json"), InputError);

  {
    std::ofstream missing(dir + "/missing.json");
    missing << "{\"matrix\": []}";
  }
  CHECK_THROWS_AS(read_state_file(dir + "/missing.json"), InputError);

  {
    std::ofstream off(dir + "/trace.json");
    off << "{\"dims\": [2], \"matrix\": [[0.45,0],[0,0],[0,0],[0.45,0]]}";
  }
  try {
    read_state_file(dir + "/trace.json");
    FAIL("expected InputError");
  } catch (const InputError& error) {
    CHECK(message_names(error, "unit trace"));
  }
}
