#pragma once

#include "pdmp/density.hpp"
#include "pdmp/jumprate.hpp"
#include "pdmp/model.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pdmp {

//! One Monte Carlo study: a model, its estimation interval, and the chain
//! lengths to sweep.
struct ExperimentConfig
{
  ModelSpec model;
  Interval interval;
  double window_max = 6.0;
  std::vector<std::size_t> n_values;
  std::size_t replicates = 50;
  PenaltySpec penalty;
  std::uint64_t base_seed = 1;
  double z0 = 1.0;
  std::size_t grid_points = 513;
};

//! Throws DomainError when the configuration is unusable.
void validate(const ExperimentConfig& config);

struct ReplicateResult
{
  std::size_t n;
  std::size_t replicate;
  std::uint64_t seed;
  std::size_t d_mhat;
  std::size_t d_mopt;
  double risk_mhat;
  double risk_mopt;
  double seconds;

  //! risk_mhat / risk_mopt (1 when both vanish).
  double oracle_ratio() const;
};

//! Simulates the replicate's chain from derive_seed(base_seed, n, replicate),
//! fits the density, and evaluates the selected and the oracle risks.
//! Failures are rethrown with the replicate's provenance.
ReplicateResult run_replicate(const ExperimentConfig& config,
                              std::size_t n,
                              std::size_t replicate);

struct ExperimentRow
{
  std::size_t n;
  double mean_d_mhat;
  double mean_d_mopt;
  double mean_risk;
  double oracle_ratio; //!< mean of per-replicate ratios
  double mean_time_seconds;
  std::size_t completed;
  std::size_t failed;
  std::string first_error;
};

struct RunOptions
{
  std::size_t threads = 1; //!< 0 picks std::thread::hardware_concurrency()
};

//! Every replicate of every n, then one row per n. Replicates may run
//! concurrently; results are aggregated in replicate order.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config,
                                          const RunOptions& options = {});

//! Raw per-replicate results, in (n, replicate) order. Failed replicates are
//! reported through `errors` (same indexing) and carry zeroed fields.
struct ReplicateBatch
{
  std::vector<ReplicateResult> results;
  std::vector<std::optional<std::string>> errors;
};
ReplicateBatch run_replicates(const ExperimentConfig& config,
                              const RunOptions& options = {});
std::vector<ExperimentRow> aggregate(const ExperimentConfig& config,
                                     const ReplicateBatch& batch);

//! Header n,mean_D_mhat,mean_D_mopt,mean_risk,oracle,mean_time_s. With
//! `with_timing` false the time column is written as 0 so files compare
//! byte for byte.
void write_csv(std::ostream& out,
               const std::vector<ExperimentRow>& rows,
               bool with_timing = true);

//! A named model with its default estimation interval.
struct ModelPreset
{
  std::string name;
  ModelSpec model;
  Interval interval;
};

//! The ten reference configurations: six additive-flow (TCP) models and four
//! exponential-flow (bacterial growth) models.
const std::vector<ModelPreset>& model_presets();
std::optional<ModelPreset> find_preset(const std::string& name);
//! Preset whose model matches `model` parameter for parameter.
std::optional<ModelPreset> match_preset(const ModelSpec& model);

//! Tail-growth condition on the jump rate needed for the uniform ergodicity
//! bounds. For power rates lam x^delta it holds iff delta > 0 (additive flow)
//! or delta > 1 (exponential flow); rates exactly at the boundary behave well
//! in practice, rates strictly below it give biased estimates.
struct TailCondition
{
  bool satisfied;
  bool boundary;
  bool violated; //!< strictly below the boundary
  std::string message;
};
TailCondition check_tail_condition(const ModelSpec& model);

struct DiagnosticOptions
{
  std::size_t chain_length = 100000;       //!< stationarity check chain
  std::vector<std::size_t> rate_n_values;  //!< empty: n_values >= 1000
  std::size_t rate_replicates = 0;         //!< 0: config.replicates
  std::size_t reference_factor = 100;      //!< reference chain = factor * max n
  std::optional<double> probe;             //!< y_0; default interval midpoint
  std::size_t threads = 1;
};

struct DiagnosticReport
{
  // Stationarity: coefficients of the two chain halves at the selected model.
  std::size_t half_dimension = 0;
  double half_distance = 0.0;      //!< ||nu_first - nu_second||_{L2(A)}
  double half_iid_reference = 0.0; //!< sqrt(E||.||^2) if the draws were i.i.d.
  double half_ratio = 0.0;

  // Denominator rate: RMSE of D_n(y_0) against a long reference chain.
  double probe = 0.0;
  double reference_d = 0.0;
  std::vector<std::size_t> rate_n_values;
  std::vector<double> rmse;
  double rmse_slope = 0.0;

  TailCondition tail;
  std::vector<std::string> warnings;
};

//! Half-sample distance of projection coefficients. Works on any sample.
struct HalfSplit
{
  std::size_t dimension;
  double distance;
  double iid_reference;
};
HalfSplit half_split_distance(std::span<const double> sample,
                              const TrigBasis& basis,
                              std::size_t m);

//! Least-squares slope of log(y) on log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

DiagnosticReport convergence_diagnostics(const ExperimentConfig& config,
                                         const DiagnosticOptions& options = {});

void write_report(std::ostream& out, const DiagnosticReport& report);

} // namespace pdmp
