#include "pdmp/bench.hpp"

#include "pdmp/error.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include <fmt/core.h>

namespace pdmp {

void
validate(const ExperimentConfig& config)
{
  validate_interval(config.interval);
  if (config.replicates < 1) {
    throw DomainError("an experiment needs at least one replicate");
  }
  if (config.n_values.empty()) {
    throw DomainError("an experiment needs at least one chain length");
  }
  for (std::size_t i = 0; i < config.n_values.size(); ++i) {
    if (config.n_values[i] < 9) {
      throw DomainError(
        fmt::format("chain length {} is below the minimum of 9", config.n_values[i]));
    }
    if (i > 0 && config.n_values[i] <= config.n_values[i - 1]) {
      throw DomainError("chain lengths must be strictly increasing");
    }
  }
  if (!(config.z0 > 0.0)) {
    throw DomainError(fmt::format("initial state must be > 0, got {}", config.z0));
  }
  if (config.grid_points < 257 || config.grid_points % 2 == 0) {
    throw DomainError(fmt::format(
      "grid points must be odd and >= 257, got {}", config.grid_points));
  }
  TrigBasis{ config.window_max };
}

double
ReplicateResult::oracle_ratio() const
{
  if (risk_mopt > 0.0) {
    return risk_mhat / risk_mopt;
  }
  return risk_mhat == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
}

ReplicateResult
run_replicate(const ExperimentConfig& config, std::size_t n, std::size_t replicate)
{
  const std::uint64_t seed = derive_seed(config.base_seed, n, replicate);
  try {
    const auto start = std::chrono::steady_clock::now();
    const JumpChain chain = simulate_chain(config.model, config.z0, n, seed);
    const DensityFit fit =
      select_model(chain, TrigBasis(config.window_max), config.penalty);
    const JumpRate& rate = config.model.rate;
    const OracleResult oracle = oracle_dimension(
      fit,
      chain,
      config.model.flow,
      config.model.map,
      [&rate](double y) { return rate.rate(y); },
      config.interval,
      config.grid_points);
    const auto stop = std::chrono::steady_clock::now();
    return { n,
             replicate,
             seed,
             fit.selected_dimension(),
             TrigBasis::dimension(oracle.m_opt),
             oracle.risks[fit.selected()],
             oracle.risk_opt,
             std::chrono::duration<double>(stop - start).count() };
  } catch (const Error& err) {
    throw NumericalError(fmt::format(
      "replicate {} (n={}, seed={}): {}", replicate, n, seed, err.what()));
  }
}

ReplicateBatch
run_replicates(const ExperimentConfig& config, const RunOptions& options)
{
  validate(config);
  struct Task
  {
    std::size_t n;
    std::size_t replicate;
  };
  std::vector<Task> tasks;
  for (std::size_t n : config.n_values) {
    for (std::size_t r = 0; r < config.replicates; ++r) {
      tasks.push_back({ n, r });
    }
  }
  ReplicateBatch batch;
  batch.results.resize(tasks.size());
  batch.errors.resize(tasks.size());

  std::atomic<std::size_t> next{ 0 };
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) {
        return;
      }
      try {
        batch.results[i] = run_replicate(config, tasks[i].n, tasks[i].replicate);
      } catch (const std::exception& err) {
        batch.results[i] = ReplicateResult{ tasks[i].n,
                                            tasks[i].replicate,
                                            derive_seed(config.base_seed,
                                                        tasks[i].n,
                                                        tasks[i].replicate),
                                            0,
                                            0,
                                            0.0,
                                            0.0,
                                            0.0 };
        batch.errors[i] = err.what();
      }
    }
  };

  std::size_t threads = options.threads;
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min(threads, tasks.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  return batch;
}

std::vector<ExperimentRow>
aggregate(const ExperimentConfig& config, const ReplicateBatch& batch)
{
  std::vector<ExperimentRow> rows;
  std::size_t i = 0;
  for (std::size_t n : config.n_values) {
    ExperimentRow row{ n, 0.0, 0.0, 0.0, 0.0, 0.0, 0, 0, "" };
    for (std::size_t r = 0; r < config.replicates; ++r, ++i) {
      if (batch.errors[i]) {
        if (row.failed == 0) {
          row.first_error = *batch.errors[i];
        }
        ++row.failed;
        continue;
      }
      const ReplicateResult& res = batch.results[i];
      row.mean_d_mhat += static_cast<double>(res.d_mhat);
      row.mean_d_mopt += static_cast<double>(res.d_mopt);
      row.mean_risk += res.risk_mhat;
      row.oracle_ratio += res.oracle_ratio();
      row.mean_time_seconds += res.seconds;
      ++row.completed;
    }
    if (row.completed > 0) {
      const double k = static_cast<double>(row.completed);
      row.mean_d_mhat /= k;
      row.mean_d_mopt /= k;
      row.mean_risk /= k;
      row.oracle_ratio /= k;
      row.mean_time_seconds /= k;
    } else {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.mean_d_mhat = row.mean_d_mopt = row.mean_risk = row.oracle_ratio =
        row.mean_time_seconds = nan;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ExperimentRow>
run_experiment(const ExperimentConfig& config, const RunOptions& options)
{
  return aggregate(config, run_replicates(config, options));
}

void
write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, bool with_timing)
{
  out << "n,mean_D_mhat,mean_D_mopt,mean_risk,oracle,mean_time_s\n";
  for (const auto& row : rows) {
    out << fmt::format("{},{:.10g},{:.10g},{:.10g},{:.10g},{:.6g}\n",
                       row.n,
                       row.mean_d_mhat,
                       row.mean_d_mopt,
                       row.mean_risk,
                       row.oracle_ratio,
                       with_timing ? row.mean_time_seconds : 0.0);
  }
}

} // namespace pdmp
