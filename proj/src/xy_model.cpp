#include "sharedpurity/xy_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sharedpurity/quadrature.hpp"

namespace sharedpurity {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kQuadratureTol = 1e-10;

double dispersion(double gamma, double lambda, double k) {
  const double s = gamma * std::sin(k);
  const double c = lambda - std::cos(k);
  return std::sqrt(s * s + c * c);
}

// Correlator kernel g_R(k) = [cos(kR)(lambda - cos k) - gamma sin(kR) sin k]
//                            / Lambda(k).
double kernel(double gamma, double lambda, double k, int r) {
  const double lam_k = dispersion(gamma, lambda, k);
  return (std::cos(k * r) * (lambda - std::cos(k)) -
          gamma * std::sin(k * r) * std::sin(k)) /
         lam_k;
}

XYCorrelators correlators_finite(double gamma, double lambda, int n) {
  XYSectorEnergies sectors = xy_sector_energies(gamma, lambda, n);
  if (sectors.gap < -1e-9) {
    std::ostringstream msg;
    msg << "momentum sector ordering violated: a rival fermion sector lies "
        << -sectors.gap << " below the integer-grid state at gamma=" << gamma
        << ", lambda=" << lambda << ", n_sites=" << n
        << "; the closed-form correlators describe the integer-grid state "
           "with the zero mode occupied, which is not the ground state at "
           "this weak or negative field";
    throw InputError(msg.str());
  }
  double sum_xx = 0.0;
  double sum_yy = 0.0;
  double sum_z = 0.0;
  for (int m = 1; m <= (n - 1) / 2; ++m) {
    const double k = 2.0 * kPi * m / n;
    sum_xx += kernel(gamma, lambda, k, 1);
    sum_yy += kernel(gamma, lambda, k, -1);
    sum_z += (lambda - std::cos(k)) / dispersion(gamma, lambda, k);
  }
  XYCorrelators c;
  c.t_xx = (2.0 * sum_xx + 1.0) / n;
  c.t_yy = (2.0 * sum_yy + 1.0) / n;
  c.m_z = -(2.0 * sum_z + 1.0) / n;
  c.t_zz = c.m_z * c.m_z - c.t_xx * c.t_yy;
  return c;
}

XYCorrelators correlators_thermo(double gamma, double lambda) {
  std::ostringstream tag;
  tag << " at gamma=" << gamma << ", lambda=" << lambda;
  const auto average = [&](const std::function<double(double)>& f,
                           const std::string& name) {
    return integrate(f, 0.0, kPi, kQuadratureTol, name + tag.str()) / kPi;
  };
  XYCorrelators c;
  c.t_xx = average([&](double k) { return kernel(gamma, lambda, k, 1); },
                   "t_xx kernel");
  c.t_yy = average([&](double k) { return kernel(gamma, lambda, k, -1); },
                   "t_yy kernel");
  c.m_z = -average(
      [&](double k) {
        return (lambda - std::cos(k)) / dispersion(gamma, lambda, k);
      },
      "m_z kernel");
  c.t_zz = c.m_z * c.m_z - c.t_xx * c.t_yy;
  return c;
}

void check_correlator_range(const XYCorrelators& c) {
  const double values[4] = {c.t_xx, c.t_yy, c.t_zz, c.m_z};
  for (double v : values) {
    if (!(std::abs(v) <= 1.0 + 1e-9)) {
      std::ostringstream msg;
      msg << "correlator range violated: |" << v << "| exceeds 1";
      throw std::runtime_error(msg.str());
    }
  }
}

}  // namespace

void XYParams::validate() const {
  if (!(gamma > 0.0) || gamma > 1.0) {
    std::ostringstream msg;
    msg << "anisotropy out of range: gamma=" << gamma
        << " must lie in (0, 1]";
    throw InputError(msg.str());
  }
  if (!std::isfinite(lambda)) {
    throw InputError("field out of range: lambda must be finite");
  }
  if (n_sites != 0 && (n_sites < 5 || n_sites % 2 == 0)) {
    std::ostringstream msg;
    msg << "ring size out of range: n_sites=" << n_sites
        << " must be 0 (thermodynamic limit) or an odd integer >= 5";
    throw InputError(msg.str());
  }
}

XYSectorEnergies xy_sector_energies(double gamma, double lambda, int n_sites) {
  XYParams probe{gamma, lambda, n_sites};
  probe.validate();
  if (n_sites == 0) {
    throw InputError(
        "ring size out of range: sector energies require a finite ring");
  }
  const auto eps = [&](double k) { return 2.0 * (std::cos(k) - lambda); };
  const auto band = [&](double k) {
    return 2.0 * dispersion(gamma, lambda, k);
  };
  XYSectorEnergies out;
  // Integer grid k = 2 pi m / N: each +-k pair relaxes to its two-mode
  // ground state. Parity forces one extra fermion: either the unpaired zero
  // mode is occupied (the state the correlators describe) or the cheapest
  // pair is broken into a single quasiparticle.
  double e_int_vacuum = lambda * n_sites;
  double min_band_int = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= (n_sites - 1) / 2; ++m) {
    const double k = 2.0 * kPi * m / n_sites;
    e_int_vacuum += eps(k) - band(k);
    min_band_int = std::min(min_band_int, band(k));
  }
  // Half-integer grid k = (2m-1) pi / N: either every +-k pair relaxes and
  // the k = pi singleton stays empty, or the singleton is filled at the cost
  // of breaking the cheapest pair.
  double e_half_empty = lambda * n_sites;
  double min_band_half = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= (n_sites - 1) / 2; ++m) {
    const double k = (2.0 * m - 1.0) * kPi / n_sites;
    e_half_empty += eps(k) - band(k);
    min_band_half = std::min(min_band_half, band(k));
  }
  const double e_half_break = e_half_empty + eps(kPi) + min_band_half;
  out.e_integer_grid = e_int_vacuum + eps(0.0);
  out.e_broken_pair = e_int_vacuum + min_band_int;
  out.e_half_integer_grid = std::min(e_half_empty, e_half_break);
  out.gap = std::min(out.e_half_integer_grid, out.e_broken_pair) -
            out.e_integer_grid;
  return out;
}

XYCorrelators xy_correlators(const XYParams& params) {
  params.validate();
  const XYCorrelators c =
      params.n_sites == 0
          ? correlators_thermo(params.gamma, params.lambda)
          : correlators_finite(params.gamma, params.lambda, params.n_sites);
  check_correlator_range(c);
  return c;
}

DensityOperator xy_two_site_rdm(const XYCorrelators& correlators) {
  const double alpha_plus = 0.25 * (1.0 + correlators.t_zz);
  const double alpha_minus = 0.25 * (1.0 - correlators.t_zz);
  const double corner = 0.25 * (correlators.t_xx - correlators.t_yy);
  const double center = 0.25 * (correlators.t_xx + correlators.t_yy);
  Mat rho = Mat::Zero(4, 4);
  rho(0, 0) = alpha_plus + 0.5 * correlators.m_z;
  rho(1, 1) = alpha_minus;
  rho(2, 2) = alpha_minus;
  rho(3, 3) = alpha_plus - 0.5 * correlators.m_z;
  rho(0, 3) = corner;
  rho(3, 0) = corner;
  rho(1, 2) = center;
  rho(2, 1) = center;
  DensityOperator pair{{2, 2}, std::move(rho)};
  pair.validate();
  return pair;
}

SharedPurityResult xy_shared_purity(const XYParams& params,
                                    const OptimizerConfig& config) {
  const DensityOperator pair = xy_two_site_rdm(xy_correlators(params));
  return shared_purity(pair, Variant::full_product, config);
}

std::vector<double> sweep_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo)) {
    throw InputError(
        "sweep window out of range: require hi > lo and step > 0");
  }
  const double start = lo + 0.5 * step;
  const double ratio = (hi - start) / step;
  const int count = static_cast<int>(std::floor(ratio - 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int j = 0; j < count; ++j) {
    grid.push_back(lo + 0.5 * step + j * step);
  }
  return grid;
}

std::vector<XYSweepRow> xy_sweep(double gamma, int n_sites,
                                 const std::vector<double>& lambda_grid,
                                 const OptimizerConfig& config) {
  if (lambda_grid.empty()) {
    throw InputError("sweep grid out of range: grid is empty");
  }
  for (std::size_t j = 0; j + 1 < lambda_grid.size(); ++j) {
    if (!(lambda_grid[j + 1] > lambda_grid[j])) {
      throw InputError(
          "sweep grid out of range: grid must be strictly increasing");
    }
  }
  if (lambda_grid.front() < 0.0) {
    throw InputError("sweep grid out of range: require lambda >= 0");
  }
  std::vector<XYSweepRow> rows;
  rows.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) {
    XYParams params{gamma, lambda, n_sites};
    XYSweepRow row;
    row.gamma = gamma;
    row.n_sites = n_sites;
    row.lambda = lambda;
    row.correlators = xy_correlators(params);
    const SharedPurityResult result =
        shared_purity(xy_two_site_rdm(row.correlators), Variant::full_product,
                      config);
    row.f_global = result.f_global;
    row.f_local = result.f_local;
    row.s_p = result.s_p;
    row.converged = result.diagnostics.converged;
    rows.push_back(row);
  }
  const std::size_t n = rows.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (n < 2) {
      rows[j].ds_p_dlambda = 0.0;
    } else if (j == 0) {
      rows[j].ds_p_dlambda =
          (rows[1].s_p - rows[0].s_p) / (rows[1].lambda - rows[0].lambda);
    } else if (j + 1 == n) {
      rows[j].ds_p_dlambda = (rows[n - 1].s_p - rows[n - 2].s_p) /
                             (rows[n - 1].lambda - rows[n - 2].lambda);
    } else {
      rows[j].ds_p_dlambda = (rows[j + 1].s_p - rows[j - 1].s_p) /
                             (rows[j + 1].lambda - rows[j - 1].lambda);
    }
  }
  return rows;
}

std::pair<double, bool> parabolic_refine_min(const std::vector<double>& xs,
                                             const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 3) {
    throw InputError(
        "refinement input out of range: need >= 3 samples of equal length");
  }
  std::size_t i = 0;
  for (std::size_t j = 1; j < ys.size(); ++j) {
    if (ys[j] < ys[i]) {
      i = j;
    }
  }
  if (i == 0 || i + 1 == ys.size()) {
    return {xs[i], false};
  }
  const double y0 = ys[i - 1];
  const double y1 = ys[i];
  const double y2 = ys[i + 1];
  const double denom = y0 - 2.0 * y1 + y2;
  if (!(denom > 0.0)) {
    return {xs[i], false};
  }
  const double h = xs[i] - xs[i - 1];
  return {xs[i] + 0.5 * h * (y0 - y2) / denom, true};
}

DipLocation xy_dip_location(double gamma, int n_sites, const DipGrid& grid,
                            const OptimizerConfig& config) {
  if (n_sites == 0) {
    throw InputError(
        "ring size out of range: the dip locator requires a finite ring");
  }
  if (!(grid.grid_step > 0.0) || !(grid.stencil_h > 0.0) ||
      !(grid.window_hi > grid.window_lo)) {
    throw InputError(
        "dip grid out of range: require window_hi > window_lo, grid_step > 0 "
        "and stencil_h > 0");
  }
  std::map<long long, double> cache;
  const auto sp_at = [&](double lambda) {
    const long long key = std::llround(lambda * 1e9);
    const auto it = cache.find(key);
    if (it != cache.end()) {
      return it->second;
    }
    const double value =
        xy_shared_purity(XYParams{gamma, lambda, n_sites}, config).s_p;
    cache.emplace(key, value);
    return value;
  };
  const std::vector<double> lambdas =
      sweep_grid(grid.window_lo, grid.window_hi, grid.grid_step);
  if (lambdas.size() < 3) {
    throw InputError("dip grid out of range: window holds fewer than 3 points");
  }
  std::vector<double> d1;
  d1.reserve(lambdas.size());
  for (double lambda : lambdas) {
    d1.push_back((sp_at(lambda + grid.stencil_h) -
                  sp_at(lambda - grid.stencil_h)) /
                 (2.0 * grid.stencil_h));
  }
  const auto [lambda_c, refined] = parabolic_refine_min(lambdas, d1);
  return {lambda_c, refined};
}

ScalingFit fit_power_law(const std::vector<int>& n_list,
                         const std::vector<double>& lambda_c_n,
                         double lambda_c) {
  if (n_list.size() != lambda_c_n.size() || n_list.size() < 2) {
    throw InputError(
        "scaling fit input out of range: need >= 2 ring sizes with one dip "
        "location each");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 3) {
      throw InputError("scaling fit input out of range: ring sizes must be >= 3");
    }
    const double distance = lambda_c - lambda_c_n[i];
    if (!(distance > 0.0)) {
      std::ostringstream msg;
      msg << "scaling fit input out of range: dip location " << lambda_c_n[i]
          << " for n_sites=" << n_list[i]
          << " does not lie below the critical field " << lambda_c;
      throw InputError(msg.str());
    }
    x.push_back(std::log10(static_cast<double>(n_list[i])));
    y.push_back(std::log10(distance));
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  ScalingFit fit;
  fit.lambda_c = lambda_c;
  fit.n_list = n_list;
  fit.lambda_c_n = lambda_c_n;
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) {
    throw InputError(
        "scaling fit input out of range: ring sizes are degenerate");
  }
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.residual_sum_sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    fit.residual_sum_sq += r * r;
  }
  fit.monotone = true;
  for (std::size_t i = 1; i < lambda_c_n.size(); ++i) {
    if (!(lambda_c_n[i] > lambda_c_n[i - 1])) {
      fit.monotone = false;
    }
  }
  fit.flagged = !fit.monotone;
  return fit;
}

ScalingFit xy_scaling_fit(double gamma, const std::vector<int>& n_list,
                          const DipGrid& grid, const OptimizerConfig& config) {
  std::vector<double> dips;
  std::vector<bool> refined;
  dips.reserve(n_list.size());
  refined.reserve(n_list.size());
  for (int n : n_list) {
    const DipLocation dip = xy_dip_location(gamma, n, grid, config);
    dips.push_back(dip.lambda_c);
    refined.push_back(dip.refined);
  }
  ScalingFit fit = fit_power_law(n_list, dips, 1.0);
  fit.refined = refined;
  for (bool r : refined) {
    if (!r) {
      fit.flagged = true;
    }
  }
  return fit;
}

}  // namespace sharedpurity
