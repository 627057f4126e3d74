#pragma once

#include <utility>
#include <vector>

#include "sharedpurity/fidelity.hpp"
#include "sharedpurity/states.hpp"

namespace sharedpurity {

// Anisotropic XY ring in a transverse field,
//   H = (J/2) sum_i [(1+gamma) X_i X_{i+1} + (1-gamma) Y_i Y_{i+1}]
//       + lambda sum_i Z_i,
// with J = 1 and periodic boundaries. n_sites == 0 selects the thermodynamic
// limit; finite rings must have an odd site count >= 5 (the closed-form
// momentum sums below assume the fermion sector structure of odd rings).
struct XYParams {
  double gamma = 1.0;
  double lambda = 0.0;
  int n_sites = 0;

  void validate() const;
};

// Nearest-neighbour correlators and transverse magnetization of the ground
// state: t_xx = <X_i X_{i+1}>, t_yy = <Y_i Y_{i+1}>, t_zz = <Z_i Z_{i+1}>,
// m_z = <Z_i>.
struct XYCorrelators {
  double t_xx = 0.0;
  double t_yy = 0.0;
  double t_zz = 0.0;
  double m_z = 0.0;
};

// Energies competing for the ground state of a finite odd ring after the
// fermion mapping. The closed-form correlators describe one specific state:
// every +-k pair of the integer momentum grid (k = 2 pi m / N) relaxed, with
// the unpaired zero mode occupied (`e_integer_grid`). Its odd-parity rival
// keeps the zero mode empty and pays for the cheapest single quasiparticle
// instead (`e_broken_pair`); the even-parity sector lives on the half-integer
// grid (k = (2m-1) pi / N), where its best state either leaves the unpaired
// k = pi mode empty or fills it and breaks the cheapest pair
// (`e_half_integer_grid` takes the minimum). `gap` = min(e_broken_pair,
// e_half_integer_grid) - e_integer_grid; it must stay non-negative for the
// correlator formulas to describe the true ground state. On an odd ring the
// antiferromagnetic coupling is frustrated at weak fields and the gap goes
// negative there (the rivals are degenerate pairs, so no closed-form
// correlators exist for them).
struct XYSectorEnergies {
  double e_integer_grid = 0.0;
  double e_half_integer_grid = 0.0;
  double e_broken_pair = 0.0;
  double gap = 0.0;
};

XYSectorEnergies xy_sector_energies(double gamma, double lambda, int n_sites);

// Ground-state correlators; dispatches on n_sites between closed momentum
// sums (finite odd ring) and adaptive quadrature (thermodynamic limit).
// Throws InputError for a finite ring whose sector-energy gap is negative,
// i.e. when a rival fermion sector dips below the described state.
XYCorrelators xy_correlators(const XYParams& params);

// Two-site reduced density operator of neighbouring spins, reconstructed
// from translation-invariant correlators (an X-shaped matrix in the
// computational basis).
DensityOperator xy_two_site_rdm(const XYCorrelators& correlators);

// Shared purity of the nearest-neighbour pair state.
SharedPurityResult xy_shared_purity(const XYParams& params,
                                    const OptimizerConfig& config);

struct XYSweepRow {
  double gamma = 0.0;
  int n_sites = 0;
  double lambda = 0.0;
  XYCorrelators correlators;
  double f_global = 0.0;
  double f_local = 0.0;
  double s_p = 0.0;
  double ds_p_dlambda = 0.0;
  bool converged = true;
};

// Half-offset field grid lo + step/2 + j*step, every point strictly below
// hi. The offset keeps sweeps from sampling lambda = 1 exactly, where the
// thermodynamic integrands have a removable singular corner.
std::vector<double> sweep_grid(double lo, double hi, double step);

// Sweep of the pair shared purity over a strictly increasing field grid.
// The derivative column uses central differences in the interior and
// one-sided differences at the ends.
std::vector<XYSweepRow> xy_sweep(double gamma, int n_sites,
                                 const std::vector<double>& lambda_grid,
                                 const OptimizerConfig& config);

// Grid and stencil controlling the dip locator: the derivative
// d S_P / d lambda is sampled on the half-offset grid over
// [window_lo, window_hi) using the symmetric stencil
// (S_P(l + stencil_h) - S_P(l - stencil_h)) / (2 stencil_h),
// and its minimum is sharpened by parabolic interpolation.
struct DipGrid {
  double window_lo = 0.90;
  double window_hi = 1.005;
  double grid_step = 2e-3;
  double stencil_h = 0.02;
};

struct DipLocation {
  double lambda_c = 0.0;
  bool refined = false;
};

DipLocation xy_dip_location(double gamma, int n_sites, const DipGrid& grid,
                            const OptimizerConfig& config);

// Vertex of the parabola through the argmin sample and its two neighbours.
// Falls back unrefined (second element false) when the argmin sits on an
// edge of the grid or the three points fail convexity.
std::pair<double, bool> parabolic_refine_min(const std::vector<double>& xs,
                                             const std::vector<double>& ys);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_sum_sq = 0.0;
  double lambda_c = 0.0;
  bool monotone = false;
  bool flagged = false;
  std::vector<int> n_list;
  std::vector<double> lambda_c_n;
  std::vector<bool> refined;
};

// Least-squares fit of log10(lambda_c - lambda_c_n) against log10(n).
// Requires every lambda_c_n strictly below lambda_c; a non-monotone
// sequence flags the fit but does not abort it.
ScalingFit fit_power_law(const std::vector<int>& n_list,
                         const std::vector<double>& lambda_c_n,
                         double lambda_c);

// Finite-size scaling of the dip location toward the critical field
// lambda_c = 1: locates the dip for every ring size, then fits the power
// law of the residual distance.
ScalingFit xy_scaling_fit(double gamma, const std::vector<int>& n_list,
                          const DipGrid& grid, const OptimizerConfig& config);

}  // namespace sharedpurity
