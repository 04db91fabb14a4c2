#include "pdmp/bench.hpp"

#include "pdmp/error.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/core.h>

namespace pdmp {

namespace {

// Replicate indices reserved for the diagnostic chains; far away from the
// indices used by experiment replicates.
constexpr std::uint64_t kStationarityStream = 0xd1a9'0000'0000'0001ULL;
constexpr std::uint64_t kReferenceStream = 0xd1a9'0000'0000'0002ULL;

// D_n(y) of a chain streamed from `seed`, without storing it.
double
streamed_d_hat(const ModelSpec& model,
               double z0,
               std::size_t n,
               std::uint64_t seed,
               double y)
{
  ExponentialStream stream(seed);
  const double fy = model.map.apply(y);
  std::size_t count = 0;
  double z = z0;
  for (std::size_t k = 0; k < n; ++k) {
    const double next = sample_next(model, z, stream.next());
    if (next >= fy && y >= z) {
      ++count;
    }
    z = next;
  }
  if (count == 0) {
    return 0.0;
  }
  return g_eval(model.flow, model.map, 0.0, fy) * static_cast<double>(count) /
         static_cast<double>(n);
}

} // namespace

HalfSplit
half_split_distance(std::span<const double> sample,
                    const TrigBasis& basis,
                    std::size_t m)
{
  const std::size_t n = sample.size();
  const std::size_t half = n / 2;
  if (half < 1) {
    throw DomainError("half-split needs at least two observations");
  }
  const std::size_t d = TrigBasis::dimension(m);
  const auto first = sample.first(half);
  const auto second = sample.subspan(half, half);

  std::vector<double> s1(d, 0.0), s2(d, 0.0), sq(d, 0.0), phi(d);
  auto accumulate = [&](std::span<const double> part, std::vector<double>& sum) {
    for (double x : part) {
      basis.eval_all(x, phi);
      for (std::size_t l = 0; l < d; ++l) {
        sum[l] += phi[l];
        sq[l] += phi[l] * phi[l];
      }
    }
  };
  accumulate(first, s1);
  accumulate(second, s2);

  const double h = static_cast<double>(half);
  double dist2 = 0.0;
  double ref2 = 0.0;
  for (std::size_t l = 0; l < d; ++l) {
    const double a1 = s1[l] / h;
    const double a2 = s2[l] / h;
    dist2 += (a1 - a2) * (a1 - a2);
    const double mean = 0.5 * (a1 + a2);
    const double var = std::max(0.0, sq[l] / (2.0 * h) - mean * mean);
    ref2 += 2.0 * var / h;
  }
  return { d, std::sqrt(dist2), std::sqrt(ref2) };
}

double
loglog_slope(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("log-log regression needs two or more paired points");
  }
  const double k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw DomainError("log-log regression needs positive values");
    }
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

DiagnosticReport
convergence_diagnostics(const ExperimentConfig& config,
                        const DiagnosticOptions& options)
{
  validate(config);
  if (options.chain_length < 1000) {
    throw DomainError(fmt::format(
      "diagnostics need a chain of at least 1000 transitions, got {}",
      options.chain_length));
  }
  DiagnosticReport report;
  const TrigBasis basis(config.window_max);

  {
    const std::uint64_t seed =
      derive_seed(config.base_seed, options.chain_length, kStationarityStream);
    const JumpChain chain =
      simulate_chain(config.model, config.z0, options.chain_length, seed);
    // Select on one half so that both halves admit the model.
    const auto sample = chain.post_jump();
    const DensityFit fit =
      select_model(sample.first(sample.size() / 2), basis, config.penalty);
    const HalfSplit split = half_split_distance(sample, basis, fit.selected());
    report.half_dimension = split.dimension;
    report.half_distance = split.distance;
    report.half_iid_reference = split.iid_reference;
    report.half_ratio =
      split.iid_reference > 0.0 ? split.distance / split.iid_reference : 0.0;
  }

  report.rate_n_values = options.rate_n_values;
  if (report.rate_n_values.empty()) {
    for (std::size_t n : config.n_values) {
      if (n >= 1000) {
        report.rate_n_values.push_back(n);
      }
    }
  }
  report.probe = options.probe.value_or(config.interval.mid());
  if (report.rate_n_values.size() >= 2) {
    const std::size_t reps =
      options.rate_replicates ? options.rate_replicates : config.replicates;
    const std::size_t n_max =
      *std::max_element(report.rate_n_values.begin(), report.rate_n_values.end());
    const std::size_t n_ref = options.reference_factor * n_max;
    report.reference_d =
      streamed_d_hat(config.model,
                     config.z0,
                     n_ref,
                     derive_seed(config.base_seed, n_ref, kReferenceStream),
                     report.probe);
    std::vector<double> ns;
    for (std::size_t n : report.rate_n_values) {
      double mse = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const double d = streamed_d_hat(config.model,
                                        config.z0,
                                        n,
                                        derive_seed(config.base_seed, n, r),
                                        report.probe);
        mse += (d - report.reference_d) * (d - report.reference_d);
      }
      report.rmse.push_back(std::sqrt(mse / static_cast<double>(reps)));
      ns.push_back(static_cast<double>(n));
    }
    report.rmse_slope = loglog_slope(ns, report.rmse);
    if (report.rmse_slope > -0.35 || report.rmse_slope < -0.65) {
      report.warnings.push_back(fmt::format(
        "RMSE of D_n decays with slope {:.3f}, outside the expected -0.5 +/- 0.15",
        report.rmse_slope));
    }
  } else {
    report.warnings.push_back(
      "fewer than two chain lengths >= 1000: denominator rate check skipped");
  }

  report.tail = check_tail_condition(config.model);
  if (report.tail.violated) {
    report.warnings.push_back(report.tail.message);
  }
  return report;
}

void
write_report(std::ostream& out, const DiagnosticReport& report)
{
  out << fmt::format("half_dimension {}\n", report.half_dimension);
  out << fmt::format("half_distance {:.10g}\n", report.half_distance);
  out << fmt::format("half_iid_reference {:.10g}\n", report.half_iid_reference);
  out << fmt::format("half_ratio {:.6g}\n", report.half_ratio);
  out << fmt::format("probe {:.10g}\n", report.probe);
  out << fmt::format("reference_d {:.10g}\n", report.reference_d);
  for (std::size_t i = 0; i < report.rmse.size(); ++i) {
    out << fmt::format("rmse n={} {:.10g}\n", report.rate_n_values[i], report.rmse[i]);
  }
  out << fmt::format("rmse_slope {:.6g}\n", report.rmse_slope);
  out << fmt::format("tail_condition {}\n",
                     report.tail.violated   ? "violated"
                     : report.tail.boundary ? "boundary"
                     : report.tail.satisfied ? "satisfied"
                                             : "unknown");
  for (const auto& w : report.warnings) {
    out << "warning " << w << '\n';
  }
}

} // namespace pdmp
