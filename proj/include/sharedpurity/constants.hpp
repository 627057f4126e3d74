#pragma once

// Central table of numerical tolerances. Every validation and test bound in
// the library refers to these constants so a pass/fail decision is traceable
// to one place.
namespace sharedpurity::tol {

// state validation
inline constexpr double hermiticity = 1e-10;       // max |rho - rho^dag| entry
inline constexpr double unit_trace = 1e-10;        // |tr(rho) - 1|
inline constexpr double psd_floor = -1e-10;        // smallest admissible eigenvalue
inline constexpr double pure_norm = 1e-12;         // | ||psi|| - 1 |

// linear algebra
inline constexpr double eig_residual = 1e-9;       // ||rho v - lambda v||
inline constexpr double schmidt_norm = 1e-10;      // | sum s_i^2 - 1 |

// optimizer contracts
inline constexpr double monotone_step = 1e-12;     // allowed per-step decrease
inline constexpr double result_identity = 1e-12;   // s_p = f_global - f_local
inline constexpr double bound_cushion = 1e-9;      // floor/ceiling slack

// agreement bounds used by tests
inline constexpr double closed_form = 1e-6;        // optimizer vs closed form
inline constexpr double brute_force = 1e-4;        // optimizer vs grid search
inline constexpr double ed_match = 1e-6;           // momentum sums vs exact diag
inline constexpr double local_unitary = 1e-6;      // S_P invariance under LU
inline constexpr double pure_ngen = 1e-9;          // n-gen S_P vs Schmidt form

}  // namespace sharedpurity::tol
