#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sharedpurity/states.hpp"

namespace sharedpurity {

enum class FamilyTag {
  bell_product_admixture,  // p|00><00| + (1-p)|psi-><psi-|
  bell_mixture,            // p|psi-><psi-| + (1-p)|psi+><psi+|
  noisy_pure,              // p|psi(theta)><psi(theta)| + (1-p) I/4
  noisy_ghz_n,             // p|GHZ_{d,N}><GHZ| + (1-p) I/d^N
  generalized_ghz,         // cos t|000> + e^{i phi} sin t|111>
  generalized_w,           // sin t1 cos t2|001> + sin t1 sin t2 e^{i p1}|010> + cos t1 e^{i p2}|100>
  ghz_class,               // sqrt(K)(cos d|000> + e^{i phi} sin d|xi xi xi>)
  w_class,                 // a|001> + b|010> + c|100> + d|000>
};

std::string family_name(FamilyTag tag);
FamilyTag family_from_name(const std::string& name);  // throws InputError

struct FamilySpec {
  FamilyTag family = FamilyTag::bell_product_admixture;
  std::map<std::string, double> params;

  double param(const std::string& key) const;      // throws InputError if absent
  int int_param(const std::string& key) const;
  // throws InputError when a parameter is missing or outside its range
  void validate() const;
};

// True for families whose members are pure states.
bool family_is_pure(FamilyTag tag);

// Build the family member as a density operator (rank-1 for pure families).
DensityOperator build(const FamilySpec& spec);

// Build the state vector; only valid for pure families.
PureState build_pure(const FamilySpec& spec);

// Closed-form shared purity (full-product variant) where one exists:
//   bell_product_admixture: (1-p)(1-2p)/(2-3p) for p < 1/2, else 0
//   bell_mixture:           |p - 1/2|
//   noisy_pure:             p (1 - max(cos^2 t, sin^2 t))
//   noisy_ghz_n:            p (1 - 1/d)
//   generalized_ghz:        1 - max(cos^2 t, sin^2 t)   (all cuts agree)
// Returns nullopt for the remaining families.
std::optional<double> oracle_shared_purity(const FamilySpec& spec);

// Closed-form local fidelity where one exists (same families minus the
// generalized GHZ); used by tests.
std::optional<double> oracle_local_fidelity(const FamilySpec& spec);

// Seeded ensemble sampler. Parameters are drawn independently and uniformly
// over the declared ranges:
//   ghz_class:       delta in (0, pi/4], theta1..3 in (0, pi/2], phi in [0, 2pi)
//   w_class:         phi1, phi2 in (0, pi/2), phi3 in (0, pi/2]
//   generalized_ghz: theta in (0, pi/2), phi in [0, 2pi)
//   generalized_w:   theta1, theta2 in [margin, pi/2 - margin] with
//                    margin = 0.05 rad, phi1, phi2 in [0, 2pi)
// The generalized-W margin keeps samples away from the measure-zero
// bi-product boundaries where the monogamy score vanishes to quartic order
// and its sign is numerically undecidable.
// Sample i is drawn from the independent stream (seed, i), so results do not
// depend on evaluation order.
std::vector<FamilySpec> sample_class(FamilyTag tag, long n, std::uint64_t seed);

inline constexpr double kGeneralizedWAngleMargin = 0.05;

// JSON round-trip: {"family": name, "params": {...}}
std::string spec_to_json(const FamilySpec& spec);
FamilySpec spec_from_json(const std::string& text);

}  // namespace sharedpurity
