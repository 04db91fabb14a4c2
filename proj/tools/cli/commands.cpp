#include "cli/commands.hpp"
#include "cli/run_config.hpp"

#include "pdmp/pdmp.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>

namespace pdmp::cli {

namespace fs = std::filesystem;

namespace {

struct Flags
{
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> grid_points;
  std::optional<std::size_t> n;
  std::optional<std::size_t> replicates;
  std::string chain;
  std::string preset;
  bool write_grids = false;
  bool record_timing = false;
};

struct Context
{
  RunConfig config;
  fs::path out_dir;
  std::ostream& out;
  std::ostream& err;
};

RunConfig
resolve(const Flags& flags)
{
  RunConfig cfg = flags.config.empty() ? RunConfig{} : load_config(flags.config);
  if (!flags.preset.empty()) {
    auto preset = find_preset(flags.preset);
    if (!preset) {
      throw ConfigError(fmt::format("--preset: unknown preset '{}'", flags.preset));
    }
    cfg.model.name = preset->name;
    cfg.model.flow = preset->model.flow;
    cfg.model.map = preset->model.map;
    cfg.model.rate = preset->model.rate;
  }
  if (flags.seed) {
    cfg.simulation.seed = *flags.seed;
    cfg.experiment.base_seed = *flags.seed;
  }
  if (flags.out) {
    cfg.io.out_dir = *flags.out;
  }
  if (flags.threads) {
    cfg.experiment.threads = *flags.threads;
  }
  if (flags.grid_points) {
    if (*flags.grid_points < 257 || *flags.grid_points % 2 == 0) {
      throw ConfigError(fmt::format("--grid-points: must be odd and >= 257, got {}",
                                    *flags.grid_points));
    }
    cfg.io.grid_points = *flags.grid_points;
  }
  if (flags.n) {
    if (*flags.n < 1) {
      throw ConfigError("--n: must be >= 1");
    }
    cfg.simulation.n = *flags.n;
  }
  if (flags.replicates) {
    if (*flags.replicates < 1) {
      throw ConfigError("--replicates: must be >= 1");
    }
    cfg.experiment.replicates = *flags.replicates;
  }
  if (flags.write_grids) {
    cfg.io.write_grids = true;
  }
  if (flags.record_timing) {
    cfg.io.record_timing = true;
  }
  // Round trip through the document so flag values get the file checks too.
  return parse_config(to_json(cfg));
}

std::ofstream
open_output(const fs::path& path)
{
  std::ofstream file(path);
  if (!file) {
    throw IoError(fmt::format("cannot write '{}'", path.string()));
  }
  return file;
}

void
prepare_out_dir(Context& ctx)
{
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec) {
    throw IoError(fmt::format("cannot create output directory '{}': {}",
                              ctx.out_dir.string(),
                              ec.message()));
  }
  auto file = open_output(ctx.out_dir / "effective_config.json");
  file << to_json(ctx.config).dump(2) << '\n';
}

std::function<double(double)>
truth_of(const ModelSpec& model)
{
  return [rate = model.rate](double y) { return rate.rate(y); };
}

int
cmd_simulate(Context& ctx)
{
  const ModelSpec model = ctx.config.model_spec();
  const auto& sim = ctx.config.simulation;
  fmt::print(ctx.err, "simulating {} transitions of {} (seed {})\n", sim.n,
             model.descriptor(), sim.seed);
  JumpChain chain = simulate_chain(model, sim.z0, sim.n, sim.seed);
  chain.times = reconstruct_times(chain, model);
  save_chain(ctx.out_dir / "chain.txt", chain);

  const auto [lo, hi] = std::minmax_element(chain.z.begin(), chain.z.end());
  fmt::print(ctx.out, "n={} min_z={:.10g} max_z={:.10g} T_n={:.10g}\n",
             chain.transitions(), *lo, *hi, chain.times->back());
  return exit_ok;
}

int
cmd_estimate(Context& ctx, const std::string& chain_path)
{
  JumpChain chain;
  std::optional<ModelSpec> model;
  if (!chain_path.empty()) {
    chain = load_chain(chain_path);
    fmt::print(ctx.err, "loaded {} transitions from {}\n", chain.transitions(),
               chain_path);
  }
  if (ctx.config.has_model()) {
    if (ctx.config.model.rate) {
      model = ctx.config.model_spec();
    } else {
      model = ModelSpec{ ctx.config.model.name, *ctx.config.model.flow,
                         *ctx.config.model.map, JumpRate::power(1.0, 0.0) };
    }
  } else if (!chain.model.empty()) {
    try {
      model = parse_model_descriptor(chain.model);
    } catch (const Error& e) {
      throw ConfigError(fmt::format("model: not configured and chain header unusable: {}",
                                    e.what()));
    }
    ctx.config.model.name = model->name;
    ctx.config.model.flow = model->flow;
    ctx.config.model.map = model->map;
    ctx.config.model.rate = model->rate;
  } else {
    throw ConfigError("model: required (no config model and no chain header)");
  }
  if (chain_path.empty()) {
    if (!ctx.config.model.rate) {
      throw ConfigError("model.rate: required to simulate a chain inline");
    }
    const auto& sim = ctx.config.simulation;
    fmt::print(ctx.err, "simulating {} transitions inline (seed {})\n", sim.n, sim.seed);
    chain = simulate_chain(*model, sim.z0, sim.n, sim.seed);
  }
  const bool truth_known = ctx.config.model.rate.has_value();
  const Interval interval = ctx.config.interval();

  // Rewrite now that the model may have come from the chain header.
  prepare_out_dir(ctx);

  const DensityFit fit = select_model(chain, TrigBasis(ctx.config.estimation.a_max),
                                      ctx.config.estimation.penalty);
  const RateEstimate est =
    estimate_rate(fit, chain, model->flow, model->map, interval,
                  ctx.config.io.grid_points,
                  truth_known ? truth_of(*model) : std::function<double(double)>{});
  {
    auto file = open_output(ctx.out_dir / "fit.txt");
    write_fit(file, fit);
  }
  {
    auto file = open_output(ctx.out_dir / "grid.tsv");
    write_grid_tsv(file, est);
  }
  fmt::print(ctx.out, "n={} m_hat={} D={} I=[{:g}, {:g}] threshold={:.6g}", chain.transitions(),
             fit.selected(), fit.selected_dimension(), interval.lo, interval.hi,
             est.threshold);
  if (est.lambda_true) {
    const double risk = l2_risk(est.grid, est.lambda_hat, truth_of(*model), interval);
    fmt::print(ctx.out, " risk={:.6g}", risk);
  }
  fmt::print(ctx.out, "\n");
  return exit_ok;
}

void
write_replicate_grids(Context& ctx, const ExperimentConfig& cfg, const ReplicateBatch& batch)
{
  const fs::path dir = ctx.out_dir / "grids";
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  }
  for (std::size_t i = 0; i < batch.results.size(); ++i) {
    if (batch.errors[i]) {
      continue;
    }
    const ReplicateResult& r = batch.results[i];
    const JumpChain chain = simulate_chain(cfg.model, cfg.z0, r.n, r.seed);
    const DensityFit fit = select_model(chain, TrigBasis(cfg.window_max), cfg.penalty);
    const RateEstimate est = estimate_rate(fit, chain, cfg.model.flow, cfg.model.map,
                                           cfg.interval, cfg.grid_points,
                                           truth_of(cfg.model));
    auto file =
      open_output(dir / fmt::format("{}_n{}_r{}.tsv", cfg.model.name, r.n, r.replicate));
    write_grid_tsv(file, est);
  }
}

int
cmd_bench(Context& ctx)
{
  const ExperimentConfig cfg = ctx.config.experiment_config();
  fmt::print(ctx.err, "bench {}: {} replicates per n, {} thread(s)\n", cfg.model.name,
             cfg.replicates, ctx.config.experiment.threads);
  if (auto tail = check_tail_condition(cfg.model); tail.violated) {
    fmt::print(ctx.err, "warning: {}\n", tail.message);
  }
  const ReplicateBatch batch =
    run_replicates(cfg, RunOptions{ ctx.config.experiment.threads });
  const auto rows = aggregate(cfg, batch);
  {
    auto file = open_output(ctx.out_dir / (cfg.model.name + ".csv"));
    write_csv(file, rows, ctx.config.io.record_timing);
  }
  if (ctx.config.io.write_grids) {
    write_replicate_grids(ctx, cfg, batch);
  }

  bool failed = false;
  fmt::print(ctx.out, "{:>8} {:>10} {:>10} {:>12} {:>8}\n", "n", "D_mhat", "D_mopt",
             "risk", "oracle");
  for (const auto& row : rows) {
    fmt::print(ctx.out, "{:>8} {:>10.3f} {:>10.3f} {:>12.5g} {:>8.3f}\n", row.n,
               row.mean_d_mhat, row.mean_d_mopt, row.mean_risk, row.oracle_ratio);
    if (row.failed > 0) {
      failed = true;
      fmt::print(ctx.err, "n={}: {} of {} replicates failed; first: {}\n", row.n,
                 row.failed, row.failed + row.completed, row.first_error);
    }
  }
  return failed ? exit_numerical : exit_ok;
}

int
cmd_diagnose(Context& ctx)
{
  const ExperimentConfig cfg = ctx.config.experiment_config();
  DiagnosticOptions opts;
  opts.threads = ctx.config.experiment.threads;
  fmt::print(ctx.err, "diagnosing {}\n", cfg.model.name);
  const DiagnosticReport report = convergence_diagnostics(cfg, opts);
  {
    auto file = open_output(ctx.out_dir / "diagnostics.txt");
    write_report(file, report);
  }
  for (const auto& w : report.warnings) {
    fmt::print(ctx.err, "warning: {}\n", w);
  }
  fmt::print(ctx.out, "half_ratio={:.4g} rmse_slope={:.4g} tail={} warnings={}\n",
             report.half_ratio, report.rmse_slope,
             report.tail.violated ? "violated" : (report.tail.boundary ? "boundary" : "ok"),
             report.warnings.size());
  return exit_ok;
}

void
add_common(CLI::App* cmd, Flags& flags)
{
  cmd->add_option("--config", flags.config, "JSON run config");
  cmd->add_option("--preset", flags.preset, "built-in model preset");
  cmd->add_option("--seed", flags.seed, "seed (simulation.seed, experiment.base_seed)");
  cmd->add_option("--out", flags.out, "output directory");
  cmd->add_option("--threads", flags.threads, "worker threads (0: all cores)");
  cmd->add_option("--grid-points", flags.grid_points, "evaluation grid size (odd)");
}

} // namespace

int
run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Simulation and nonparametric estimation for jump processes", "pdmp" };
  app.require_subcommand(1);
  Flags flags;

  auto* simulate = app.add_subcommand("simulate", "simulate a jump chain");
  add_common(simulate, flags);
  simulate->add_option("--n", flags.n, "number of transitions");

  auto* estimate = app.add_subcommand("estimate", "fit the density and rate estimators");
  add_common(estimate, flags);
  estimate->add_option("--chain", flags.chain, "chain file (default: simulate inline)");
  estimate->add_option("--n", flags.n, "inline chain length");

  auto* bench = app.add_subcommand("bench", "Monte Carlo risk table");
  add_common(bench, flags);
  bench->add_option("--replicates", flags.replicates, "replicates per n");
  bench->add_flag("--write-grids", flags.write_grids, "write per-replicate grid TSVs");
  bench->add_flag("--record-timing", flags.record_timing, "measure mean_time_s");

  auto* diagnose = app.add_subcommand("diagnose", "stationarity and rate diagnostics");
  add_common(diagnose, flags);
  diagnose->add_option("--replicates", flags.replicates, "replicates per n");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    Context ctx{ resolve(flags), {}, out, err };
    ctx.out_dir = ctx.config.io.out_dir;
    if (!estimate->parsed()) {
      prepare_out_dir(ctx);
    }
    if (simulate->parsed()) {
      return cmd_simulate(ctx);
    }
    if (estimate->parsed()) {
      return cmd_estimate(ctx, flags.chain);
    }
    if (bench->parsed()) {
      return cmd_bench(ctx);
    }
    return cmd_diagnose(ctx);
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return exit_config;
  } catch (const DomainError& e) {
    fmt::print(err, "invalid input: {}\n", e.what());
    return exit_config;
  } catch (const NumericalError& e) {
    fmt::print(err, "numerical failure: {}\n", e.what());
    return exit_numerical;
  } catch (const IoError& e) {
    fmt::print(err, "i/o error: {}\n", e.what());
    return exit_io;
  } catch (const FormatError& e) {
    fmt::print(err, "malformed input: {}\n", e.what());
    return exit_io;
  }
}

} // namespace pdmp::cli
