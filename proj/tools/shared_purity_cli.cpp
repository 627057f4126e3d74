// Command-line surface for the shared-purity pipelines: single-state
// evaluation, closed-form family sweeps, monogamy sampling, XY-chain sweeps
// and finite-size scaling fits. Every command writes its outputs plus a
// manifest (command line, config, seed, digests, duration) into --out.
//
// Exit codes: 0 success, 1 invalid input (message names the violated
// invariant), 2 completed with warnings (non-converged optimizer, oracle gap
// above threshold, or flagged estimate).

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sharedpurity/families.hpp"
#include "sharedpurity/fidelity.hpp"
#include "sharedpurity/manifest.hpp"
#include "sharedpurity/monogamy.hpp"
#include "sharedpurity/states.hpp"
#include "sharedpurity/xy_model.hpp"

namespace sp = sharedpurity;
using nlohmann::json;

namespace {

constexpr double kOracleGapThreshold = 1e-6;

std::chrono::steady_clock::time_point g_start;

// Stamps the wall-clock duration and writes <out_dir>/manifest.json.
void seal_and_write(sp::RunManifest& manifest, const std::string& out_dir) {
  manifest.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - g_start)
          .count();
  std::filesystem::create_directories(out_dir);
  sp::write_manifest(manifest, out_dir);
}

struct CommonOpts {
  int starts = 64;
  int max_sweeps = 500;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out = ".";
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--starts", opts->starts, "random optimizer starts")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-sweeps", opts->max_sweeps,
                  "alternating sweeps per start")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", opts->tol, "optimizer convergence tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opts->seed, "base RNG seed")
      ->envname("SHARED_PURITY_SEED");
  cmd->add_option("--jobs", opts->jobs, "parallel worker bound")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", opts->out, "output directory");
}

sp::OptimizerConfig optimizer_config(const CommonOpts& opts) {
  sp::OptimizerConfig config;
  config.n_starts = opts.starts;
  config.max_sweeps = opts.max_sweeps;
  config.tol = opts.tol;
  config.seed = opts.seed;
  return config;
}

json common_config(const CommonOpts& opts) {
  return json{{"starts", opts.starts}, {"max_sweeps", opts.max_sweeps},
              {"tol", opts.tol},       {"seed", opts.seed},
              {"jobs", opts.jobs},     {"out", opts.out}};
}

std::string join_command_line(int argc, char** argv) {
  std::string joined;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) {
      joined += ' ';
    }
    joined += argv[i];
  }
  return joined;
}

// Writes `content` into out_dir/name and records its digest.
void emit_file(sp::RunManifest& manifest, const std::string& out_dir,
               const std::string& name, const std::string& content) {
  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/" + name;
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot write output file: " + path);
  }
  file << content;
  file.close();
  manifest.output_digests[name] = sp::sha256_file(path);
}

json result_to_json(const sp::SharedPurityResult& result) {
  return json{
      {"f_global", result.f_global},
      {"f_local", result.f_local},
      {"s_p", result.s_p},
      {"variant",
       result.variant == sp::Variant::full_product ? "full" : "ngen"},
      {"diagnostics",
       json{{"n_starts", result.diagnostics.n_starts},
            {"best_start_index", result.diagnostics.best_start_index},
            {"iterations", result.diagnostics.iterations},
            {"converged", result.diagnostics.converged},
            {"objective_history_length",
             result.diagnostics.objective_history_length}}},
  };
}

sp::Variant parse_variant(const std::string& name) {
  return name == "ngen" ? sp::Variant::n_gen : sp::Variant::full_product;
}

struct StateArgs {
  std::string input;
  std::string variant = "full";
};

int cmd_state(const StateArgs& args, const CommonOpts& opts,
              sp::RunManifest manifest) {
  manifest.config["subcommand"] = "state";
  manifest.config["input"] = args.input;
  manifest.config["variant"] = args.variant;
  // Read before digesting so an unreadable path surfaces as an input error.
  const sp::StateFile state = sp::read_state_file(args.input);
  manifest.input_digests[args.input] = sp::sha256_file(args.input);
  const sp::SharedPurityResult result = sp::shared_purity(
      state.as_density(), parse_variant(args.variant), optimizer_config(opts));
  const json payload = result_to_json(result);
  std::cout << payload.dump(2) << "\n";
  emit_file(manifest, opts.out, "result.json", payload.dump(2) + "\n");
  seal_and_write(manifest, opts.out);
  return result.diagnostics.converged ? 0 : 2;
}

struct FamilySweepArgs {
  std::string family;
  std::string param;
  double from = 0.0;
  double to = 1.0;
  int points = 101;
  std::vector<std::string> fixes;
};

std::pair<std::string, double> parse_fix(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw sp::InputError("fixed parameter must have the form name=value: " +
                         text);
  }
  try {
    std::size_t used = 0;
    const double value = std::stod(text.substr(eq + 1), &used);
    if (eq + 1 + used != text.size()) {
      throw std::invalid_argument(text);
    }
    return {text.substr(0, eq), value};
  } catch (const std::exception&) {
    throw sp::InputError("fixed parameter value is not a number: " + text);
  }
}

int cmd_family_sweep(const FamilySweepArgs& args, const CommonOpts& opts,
                     sp::RunManifest manifest) {
  const sp::FamilyTag tag = sp::family_from_name(args.family);
  sp::FamilySpec base;
  base.family = tag;
  for (const std::string& fix : args.fixes) {
    const auto [key, value] = parse_fix(fix);
    base.params[key] = value;
  }
  if (args.points < 1) {
    throw sp::InputError("grid size out of range: points must be >= 1");
  }
  manifest.config["subcommand"] = "family-sweep";
  manifest.config["family"] = args.family;
  manifest.config["param"] = args.param;
  manifest.config["from"] = args.from;
  manifest.config["to"] = args.to;
  manifest.config["points"] = args.points;

  const sp::OptimizerConfig config = optimizer_config(opts);
  std::ostringstream csv;
  bool header_done = false;
  double max_gap = 0.0;
  bool all_converged = true;
  for (int i = 0; i < args.points; ++i) {
    sp::FamilySpec spec = base;
    spec.params[args.param] =
        args.points == 1
            ? args.from
            : args.from + (args.to - args.from) * i / (args.points - 1);
    const std::optional<double> oracle = sp::oracle_shared_purity(spec);
    if (!oracle) {
      throw sp::InputError(
          "family has no closed-form shared purity to sweep against: " +
          args.family);
    }
    const sp::DensityOperator rho = sp::build(spec);
    const sp::SharedPurityResult result =
        sp::shared_purity(rho, sp::Variant::full_product, config);
    const double gap = std::abs(result.s_p - *oracle);
    max_gap = std::max(max_gap, gap);
    all_converged = all_converged && result.diagnostics.converged;
    if (!header_done) {
      csv << "family";
      for (const auto& [key, value] : spec.params) {
        csv << ",param_" << key;
      }
      csv << ",oracle_s_p,s_p,abs_gap\n";
      header_done = true;
    }
    csv << sp::family_name(spec.family);
    for (const auto& [key, value] : spec.params) {
      csv << "," << sp::format_double(value);
    }
    csv << "," << sp::format_double(*oracle) << ","
        << sp::format_double(result.s_p) << "," << sp::format_double(gap)
        << "\n";
  }
  const json summary{{"family", args.family},
                     {"param", args.param},
                     {"points", args.points},
                     {"max_abs_gap", max_gap},
                     {"gap_threshold", kOracleGapThreshold},
                     {"all_converged", all_converged}};
  std::cout << "max_abs_gap=" << sp::format_double(max_gap) << "\n";
  emit_file(manifest, opts.out, "sweep.csv", csv.str());
  emit_file(manifest, opts.out, "summary.json", summary.dump(2) + "\n");
  seal_and_write(manifest, opts.out);
  return (max_gap > kOracleGapThreshold || !all_converged) ? 2 : 0;
}

struct MonogamyArgs {
  std::string class_name;
  long n = 10000;
  bool squared = false;
  std::string method = "default";
  long n_search = 100000;
};

int cmd_monogamy(const MonogamyArgs& args, const CommonOpts& opts,
                 sp::RunManifest manifest) {
  const sp::FamilyTag tag = sp::family_from_name(args.class_name);
  if (args.n < 100) {
    throw sp::InputError(
        "sample count out of range: fraction estimates need n >= 100");
  }
  sp::MonogamyConfig config;
  config.optimizer = optimizer_config(opts);
  config.method = args.method == "default" ? sp::default_method(tag)
                  : args.method == "search"
                      ? sp::LocalFidelityMethod::randomized_search
                      : sp::LocalFidelityMethod::exact_multistart;
  config.n_search = args.n_search;
  const bool search =
      config.method == sp::LocalFidelityMethod::randomized_search;
  manifest.config["subcommand"] = "monogamy";
  manifest.config["class"] = args.class_name;
  manifest.config["n"] = args.n;
  manifest.config["squared"] = args.squared;
  manifest.config["fl_method"] = search ? "search" : "exact";
  manifest.config["n_search"] = args.n_search;

  const std::vector<sp::MonogamyRecord> records =
      sp::scan_class(tag, args.n, opts.seed, config, opts.jobs);
  const sp::FractionEstimate estimate =
      sp::estimate_fraction(records, args.squared, opts.seed);

  std::ostringstream csv;
  csv << "family";
  for (const auto& [key, value] : records.front().spec.params) {
    csv << ",param_" << key;
  }
  csv << ",s_p_1_23,s_p_12,s_p_13,delta,delta_sq,minus_delta,converged\n";
  for (const sp::MonogamyRecord& record : records) {
    csv << sp::family_name(record.spec.family);
    for (const auto& [key, value] : record.spec.params) {
      csv << "," << sp::format_double(value);
    }
    csv << "," << sp::format_double(record.s_p_1_23) << ","
        << sp::format_double(record.s_p_12) << ","
        << sp::format_double(record.s_p_13) << ","
        << sp::format_double(record.delta) << ","
        << sp::format_double(record.delta_sq) << ","
        << sp::format_double(-record.delta) << ","
        << (record.converged ? 1 : 0) << "\n";
  }
  const json payload{{"class", args.class_name},
                     {"squared", args.squared},
                     {"fl_method", search ? "search" : "exact"},
                     {"n_search", search ? args.n_search : 0},
                     {"n_samples", estimate.n_samples},
                     {"n_non_monogamous", estimate.n_non_monogamous},
                     {"fraction", estimate.fraction},
                     {"std_err", estimate.std_err},
                     {"seed", estimate.seed},
                     {"n_unconverged", estimate.n_unconverged},
                     {"flagged", estimate.flagged}};
  std::cout << payload.dump(2) << "\n";
  emit_file(manifest, opts.out, "samples.csv", csv.str());
  emit_file(manifest, opts.out, "fraction.json", payload.dump(2) + "\n");
  seal_and_write(manifest, opts.out);
  return estimate.flagged ? 2 : 0;
}

struct XYSweepArgs {
  double gamma = 1.0;
  int n_sites = 0;
  bool thermodynamic = false;
  double from = 0.0;
  double to = 2.0;
  double step = 1e-2;
};

std::string sweep_csv(const std::vector<sp::XYSweepRow>& rows) {
  std::ostringstream csv;
  csv << "gamma,n_sites,lambda,t_xx,t_yy,t_zz,m_z,f_global,f_local,s_p,"
         "ds_p_dlambda\n";
  for (const sp::XYSweepRow& row : rows) {
    csv << sp::format_double(row.gamma) << "," << row.n_sites << ","
        << sp::format_double(row.lambda) << ","
        << sp::format_double(row.correlators.t_xx) << ","
        << sp::format_double(row.correlators.t_yy) << ","
        << sp::format_double(row.correlators.t_zz) << ","
        << sp::format_double(row.correlators.m_z) << ","
        << sp::format_double(row.f_global) << ","
        << sp::format_double(row.f_local) << "," << sp::format_double(row.s_p)
        << "," << sp::format_double(row.ds_p_dlambda) << "\n";
  }
  return csv.str();
}

int cmd_xy_sweep(const XYSweepArgs& args, const CommonOpts& opts,
                 sp::RunManifest manifest) {
  const int n_sites = args.thermodynamic ? 0 : args.n_sites;
  manifest.config["subcommand"] = "xy-sweep";
  manifest.config["gamma"] = args.gamma;
  manifest.config["n_sites"] = n_sites;
  manifest.config["from"] = args.from;
  manifest.config["to"] = args.to;
  manifest.config["step"] = args.step;
  const std::vector<double> grid = sp::sweep_grid(args.from, args.to, args.step);
  const std::vector<sp::XYSweepRow> rows =
      sp::xy_sweep(args.gamma, n_sites, grid, optimizer_config(opts));
  bool all_converged = true;
  for (const sp::XYSweepRow& row : rows) {
    all_converged = all_converged && row.converged;
  }
  std::cout << "rows=" << rows.size() << "\n";
  emit_file(manifest, opts.out, "sweep.csv", sweep_csv(rows));
  seal_and_write(manifest, opts.out);
  return all_converged ? 0 : 2;
}

struct XYScalingArgs {
  double gamma = 0.8;
  std::vector<int> n_list = {55, 65, 75, 85, 95, 105, 115, 125};
  double window_lo = 0.90;
  double window_hi = 1.005;
  double grid_step = 2e-3;
  double stencil_h = 0.02;
};

int cmd_xy_scaling(const XYScalingArgs& args, const CommonOpts& opts,
                   sp::RunManifest manifest) {
  sp::DipGrid grid;
  grid.window_lo = args.window_lo;
  grid.window_hi = args.window_hi;
  grid.grid_step = args.grid_step;
  grid.stencil_h = args.stencil_h;
  manifest.config["subcommand"] = "xy-scaling";
  manifest.config["gamma"] = args.gamma;
  manifest.config["n_list"] = args.n_list;
  manifest.config["window_lo"] = grid.window_lo;
  manifest.config["window_hi"] = grid.window_hi;
  manifest.config["grid_step"] = grid.grid_step;
  manifest.config["stencil_h"] = grid.stencil_h;
  const sp::ScalingFit fit =
      sp::xy_scaling_fit(args.gamma, args.n_list, grid, optimizer_config(opts));
  json dips = json::object();
  for (std::size_t i = 0; i < fit.n_list.size(); ++i) {
    dips[std::to_string(fit.n_list[i])] = fit.lambda_c_n[i];
  }
  std::vector<int> refined(fit.refined.begin(), fit.refined.end());
  const json payload{{"gamma", args.gamma},
                     {"lambda_c", fit.lambda_c},
                     {"slope", fit.slope},
                     {"intercept", fit.intercept},
                     {"residual_sum_sq", fit.residual_sum_sq},
                     {"monotone", fit.monotone},
                     {"flagged", fit.flagged},
                     {"lambda_c_n", dips},
                     {"refined", refined}};
  std::cout << payload.dump(2) << "\n";
  emit_file(manifest, opts.out, "scaling.json", payload.dump(2) + "\n");
  seal_and_write(manifest, opts.out);
  return fit.flagged ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  g_start = std::chrono::steady_clock::now();
  CLI::App app{"shared purity of multipartite quantum states"};
  app.require_subcommand(1);

  StateArgs state_args;
  CommonOpts state_opts;
  CLI::App* state = app.add_subcommand(
      "state", "shared purity of a single state read from a JSON file");
  state->add_option("--input", state_args.input, "state JSON file")
      ->required();
  state->add_option("--variant", state_args.variant,
                    "local maximization class")
      ->check(CLI::IsMember({"full", "ngen"}));
  add_common(state, &state_opts);

  FamilySweepArgs family_args;
  CommonOpts family_opts;
  CLI::App* family = app.add_subcommand(
      "family-sweep",
      "sweep one parameter of a closed-form family and report oracle gaps");
  family->add_option("--family", family_args.family, "family name")
      ->required();
  family->add_option("--param", family_args.param, "parameter to sweep")
      ->required();
  family->add_option("--from", family_args.from, "sweep start")->required();
  family->add_option("--to", family_args.to, "sweep end")->required();
  family->add_option("--points", family_args.points, "grid size (inclusive)");
  family->add_option("--fix", family_args.fixes,
                     "fixed parameter as name=value (repeatable)");
  add_common(family, &family_opts);

  MonogamyArgs monogamy_args;
  CommonOpts monogamy_opts;
  CLI::App* monogamy = app.add_subcommand(
      "monogamy", "sample a state class and estimate the non-monogamous fraction");
  monogamy->add_option("--class", monogamy_args.class_name, "state class name")
      ->required();
  monogamy->add_option("--n", monogamy_args.n, "number of samples");
  monogamy->add_flag("--squared", monogamy_args.squared,
                     "score with squared shared purity");
  monogamy
      ->add_option("--fl-method", monogamy_args.method,
                   "marginal local-fidelity method")
      ->check(CLI::IsMember({"default", "exact", "search"}));
  monogamy->add_option("--n-search", monogamy_args.n_search,
                       "product-state draws per marginal (search method)");
  add_common(monogamy, &monogamy_opts);

  XYSweepArgs xy_sweep_args;
  CommonOpts xy_sweep_opts;
  CLI::App* xy_sweep_cmd = app.add_subcommand(
      "xy-sweep", "sweep pair shared purity of the XY chain across a field window");
  xy_sweep_cmd->add_option("--gamma", xy_sweep_args.gamma, "anisotropy")
      ->required();
  CLI::Option* n_sites_opt = xy_sweep_cmd->add_option(
      "--n-sites", xy_sweep_args.n_sites, "ring size (odd, >= 5)");
  xy_sweep_cmd
      ->add_flag("--thermodynamic", xy_sweep_args.thermodynamic,
                 "use the thermodynamic limit")
      ->excludes(n_sites_opt);
  xy_sweep_cmd->add_option("--from", xy_sweep_args.from, "window start");
  xy_sweep_cmd->add_option("--to", xy_sweep_args.to, "window end");
  xy_sweep_cmd->add_option("--step", xy_sweep_args.step, "grid step");
  add_common(xy_sweep_cmd, &xy_sweep_opts);

  XYScalingArgs xy_scaling_args;
  CommonOpts xy_scaling_opts;
  CLI::App* xy_scaling_cmd = app.add_subcommand(
      "xy-scaling", "fit the finite-size scaling of the derivative-dip location");
  xy_scaling_cmd->add_option("--gamma", xy_scaling_args.gamma, "anisotropy");
  xy_scaling_cmd
      ->add_option("--n-list", xy_scaling_args.n_list,
                   "comma-separated ring sizes")
      ->delimiter(',');
  xy_scaling_cmd->add_option("--window-lo", xy_scaling_args.window_lo,
                             "dip window start");
  xy_scaling_cmd->add_option("--window-hi", xy_scaling_args.window_hi,
                             "dip window end");
  xy_scaling_cmd->add_option("--grid-step", xy_scaling_args.grid_step,
                             "dip grid step");
  xy_scaling_cmd->add_option("--stencil-h", xy_scaling_args.stencil_h,
                             "derivative stencil half-width");
  add_common(xy_scaling_cmd, &xy_scaling_opts);

  CLI11_PARSE(app, argc, argv);

  const auto finish = [&](sp::RunManifest& manifest, const CommonOpts& opts) {
    manifest.command_line = join_command_line(argc, argv);
    manifest.seed = opts.seed;
    const json common = common_config(opts);
    for (const auto& [key, value] : common.items()) {
      manifest.config[key] = value;
    }
  };

  try {
    sp::RunManifest manifest;
    if (app.got_subcommand(state)) {
      finish(manifest, state_opts);
      return cmd_state(state_args, state_opts, manifest);
    }
    if (app.got_subcommand(family)) {
      finish(manifest, family_opts);
      return cmd_family_sweep(family_args, family_opts, manifest);
    }
    if (app.got_subcommand(monogamy)) {
      finish(manifest, monogamy_opts);
      return cmd_monogamy(monogamy_args, monogamy_opts, manifest);
    }
    if (app.got_subcommand(xy_sweep_cmd)) {
      finish(manifest, xy_sweep_opts);
      return cmd_xy_sweep(xy_sweep_args, xy_sweep_opts, manifest);
    }
    if (app.got_subcommand(xy_scaling_cmd)) {
      finish(manifest, xy_scaling_opts);
      return cmd_xy_scaling(xy_scaling_args, xy_scaling_opts, manifest);
    }
  } catch (const sp::InputError& error) {
    std::cerr << "input error: " << error.what() << "\n";
    return 1;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
