#include "pdmp/jumprate.hpp"

#include "pdmp/density.hpp"
#include "pdmp/error.hpp"
#include "pdmp/quadrature.hpp"
#include "pdmp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/core.h>

namespace pdmp {

void
validate_interval(const Interval& interval)
{
  if (!(interval.lo > 0.0 && interval.hi > interval.lo) ||
      !std::isfinite(interval.hi)) {
    throw DomainError(fmt::format("estimation interval must satisfy 0 < lo < hi, "
                                  "got [{}, {}]",
                                  interval.lo,
                                  interval.hi));
  }
}

double
rate_threshold(std::size_t n)
{
  if (n < 9) {
    throw NumericalError(fmt::format(
      "n too small for threshold: n={} but the 1/ln(n) threshold needs n >= 9",
      n));
  }
  return 1.0 / std::log(static_cast<double>(n));
}

double
d_hat(const JumpChain& chain, const Flow& flow, const TransitionMap& map, double y)
{
  const std::size_t n = chain.transitions();
  if (n < 1) {
    throw DomainError("D_n needs at least one transition");
  }
  if (!(y > 0.0)) {
    throw DomainError(fmt::format("D_n is evaluated at y > 0, got {}", y));
  }
  const double fy = map.apply(y);
  if (g_is_state_independent(flow)) {
    std::size_t count = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      if (chain.z[k] >= fy && y >= chain.z[k - 1]) {
        ++count;
      }
    }
    if (count == 0) {
      return 0.0;
    }
    return g_eval(flow, map, 0.0, fy) * static_cast<double>(count) /
           static_cast<double>(n);
  }
  double s = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    if (chain.z[k] >= fy && y >= chain.z[k - 1]) {
      s += g_eval(flow, map, chain.z[k - 1], fy);
    }
  }
  return s / static_cast<double>(n);
}

DenominatorEstimator::DenominatorEstimator(const JumpChain& chain,
                                           const Flow& flow,
                                           const TransitionMap& map)
  : flow_(flow)
  , map_(map)
  , n_(chain.transitions())
{
  if (n_ < 1) {
    throw DomainError("D_n needs at least one transition");
  }
  if (!g_is_state_independent(flow)) {
    throw DomainError("order-statistics D_n needs a state-independent g");
  }
  prev_sorted_.assign(chain.z.begin(), chain.z.end() - 1);
  next_sorted_.assign(chain.z.begin() + 1, chain.z.end());
  for (std::size_t k = 0; k < n_; ++k) {
    if (next_sorted_[k] < map.apply(prev_sorted_[k])) {
      throw DomainError(fmt::format(
        "inconsistent chain at transition {}: Z_k < f(Z_(k-1))", k + 1));
    }
  }
  std::sort(prev_sorted_.begin(), prev_sorted_.end());
  std::sort(next_sorted_.begin(), next_sorted_.end());
}

double
DenominatorEstimator::operator()(double y) const
{
  if (!(y > 0.0)) {
    throw DomainError(fmt::format("D_n is evaluated at y > 0, got {}", y));
  }
  const double fy = map_.apply(y);
  const auto started =
    std::upper_bound(prev_sorted_.begin(), prev_sorted_.end(), y) -
    prev_sorted_.begin();
  const auto landed_below =
    std::lower_bound(next_sorted_.begin(), next_sorted_.end(), fy) -
    next_sorted_.begin();
  const std::size_t count = static_cast<std::size_t>(started - landed_below);
  if (count == 0) {
    return 0.0;
  }
  return g_eval(flow_, map_, 0.0, fy) * static_cast<double>(count) /
         static_cast<double>(n_);
}

double
lambda_quotient(double nu_at_fy, double denominator, double threshold)
{
  if (!(nu_at_fy >= 0.0) || !(denominator >= threshold)) {
    return 0.0;
  }
  return nu_at_fy / denominator;
}

double
lambda_hat(const DensityFit& fit,
           const JumpChain& chain,
           const Flow& flow,
           const TransitionMap& map,
           double y)
{
  const double threshold = rate_threshold(chain.transitions());
  return lambda_quotient(
    fit.eval(map.apply(y)), d_hat(chain, flow, map, y), threshold);
}

std::vector<double>
uniform_grid(const Interval& interval, std::size_t points)
{
  if (points < 2) {
    throw DomainError("a grid needs at least two points");
  }
  std::vector<double> grid(points);
  const double h = interval.length() / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = interval.lo + static_cast<double>(i) * h;
  }
  grid.back() = interval.hi;
  return grid;
}

namespace {

double
check_risk_grid(std::span<const double> grid, const Interval& interval)
{
  const std::size_t g = grid.size();
  if (g < 257 || g % 2 == 0) {
    throw DomainError(fmt::format(
      "risk grid needs an odd number of points >= 257, got {}", g));
  }
  const double len = interval.length();
  const double slack = 1e-9 * len;
  if (std::abs(grid.front() - interval.lo) > slack ||
      std::abs(grid.back() - interval.hi) > slack) {
    throw DomainError(fmt::format("risk grid [{}, {}] does not cover [{}, {}]",
                                  grid.front(),
                                  grid.back(),
                                  interval.lo,
                                  interval.hi));
  }
  const double h = len / static_cast<double>(g - 1);
  for (std::size_t i = 1; i < g; ++i) {
    if (std::abs(grid[i] - grid[i - 1] - h) > 1e-6 * h) {
      throw DomainError("risk grid is not equispaced");
    }
  }
  return h;
}

double
risk_from_values(std::span<const double> grid,
                 std::span<const double> estimate,
                 std::span<const double> truth,
                 double h)
{
  std::vector<double> sq(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = estimate[i] - truth[i];
    sq[i] = d * d;
  }
  return composite_simpson(sq, h);
}

} // namespace

double
l2_risk(std::span<const double> grid,
        std::span<const double> estimate,
        const std::function<double(double)>& truth,
        const Interval& interval)
{
  validate_interval(interval);
  if (estimate.size() != grid.size()) {
    throw DomainError("estimate and grid sizes differ");
  }
  const double h = check_risk_grid(grid, interval);
  std::vector<double> t(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t[i] = truth(grid[i]);
  }
  return risk_from_values(grid, estimate, t, h);
}

RateEstimate
estimate_rate(const DensityFit& fit,
              const JumpChain& chain,
              const Flow& flow,
              const TransitionMap& map,
              const Interval& interval,
              std::size_t grid_points,
              const std::function<double(double)>& truth,
              std::optional<std::size_t> m)
{
  validate_interval(interval);
  const std::size_t model = m.value_or(fit.selected());
  RateEstimate out{ interval,
                    model,
                    rate_threshold(chain.transitions()),
                    uniform_grid(interval, grid_points),
                    {},
                    {},
                    {},
                    std::nullopt };
  const DenominatorEstimator denom(chain, flow, map);
  const std::size_t g = out.grid.size();
  out.lambda_hat.resize(g);
  out.nu_hat_of_f.resize(g);
  out.d_hat.resize(g);
  if (truth) {
    out.lambda_true.emplace(g);
  }
  for (std::size_t i = 0; i < g; ++i) {
    const double y = out.grid[i];
    out.nu_hat_of_f[i] = fit.eval(model, map.apply(y));
    out.d_hat[i] = denom(y);
    out.lambda_hat[i] =
      lambda_quotient(out.nu_hat_of_f[i], out.d_hat[i], out.threshold);
    if (truth) {
      (*out.lambda_true)[i] = truth(y);
    }
  }
  return out;
}

void
write_grid_tsv(std::ostream& out, const RateEstimate& estimate)
{
  const bool with_truth = estimate.lambda_true.has_value();
  out << (with_truth ? "y\tlambda_hat\tlambda_true\tnu_hat_of_f\td_hat\n"
                     : "y\tlambda_hat\tnu_hat_of_f\td_hat\n");
  for (std::size_t i = 0; i < estimate.grid.size(); ++i) {
    if (with_truth) {
      out << fmt::format("{:.17g}\t{:.17g}\t{:.17g}\t{:.17g}\t{:.17g}\n",
                         estimate.grid[i],
                         estimate.lambda_hat[i],
                         (*estimate.lambda_true)[i],
                         estimate.nu_hat_of_f[i],
                         estimate.d_hat[i]);
    } else {
      out << fmt::format("{:.17g}\t{:.17g}\t{:.17g}\t{:.17g}\n",
                         estimate.grid[i],
                         estimate.lambda_hat[i],
                         estimate.nu_hat_of_f[i],
                         estimate.d_hat[i]);
    }
  }
}

OracleResult
oracle_dimension(const DensityFit& fit,
                 const JumpChain& chain,
                 const Flow& flow,
                 const TransitionMap& map,
                 const std::function<double(double)>& truth,
                 const Interval& interval,
                 std::size_t grid_points)
{
  validate_interval(interval);
  if (!truth) {
    throw DomainError("the oracle sweep needs the true jump rate");
  }
  const double threshold = rate_threshold(chain.transitions());
  const std::vector<double> grid = uniform_grid(interval, grid_points);
  const double h = check_risk_grid(grid, interval);
  const std::size_t g = grid.size();
  const auto coeffs = fit.coefficients();
  const std::size_t d_max = coeffs.size();

  const DenominatorEstimator denom(chain, flow, map);
  std::vector<double> d(g), t(g), x(g);
  std::vector<double> phi(g * d_max);
  for (std::size_t i = 0; i < g; ++i) {
    d[i] = denom(grid[i]);
    t[i] = truth(grid[i]);
    x[i] = map.apply(grid[i]);
    fit.basis().eval_all(x[i], std::span<double>(phi).subspan(i * d_max, d_max));
  }

  // nu_m(f(y_i)) accumulated over l in the same order as DensityFit::eval.
  std::vector<double> nu(g, 0.0), lam(g);
  OracleResult out{ 0, 0.0, {} };
  out.risks.reserve(fit.max_model_index() + 1);
  std::size_t l = 0;
  for (std::size_t m = 0; m <= fit.max_model_index(); ++m) {
    const std::size_t dm = TrigBasis::dimension(m);
    for (std::size_t i = 0; i < g; ++i) {
      const double* p = &phi[i * d_max];
      double s = nu[i];
      for (std::size_t k = l; k < dm; ++k) {
        s += coeffs[k] * p[k];
      }
      nu[i] = fit.basis().in_window(x[i]) ? s : 0.0;
      lam[i] = lambda_quotient(nu[i], d[i], threshold);
    }
    l = dm;
    out.risks.push_back(risk_from_values(grid, lam, t, h));
  }
  for (std::size_t m = 1; m < out.risks.size(); ++m) {
    if (out.risks[m] < out.risks[out.m_opt]) {
      out.m_opt = m;
    }
  }
  out.risk_opt = out.risks[out.m_opt];
  return out;
}

OracleResult
oracle_dimension(const JumpChain& chain,
                 const ModelSpec& model,
                 const TrigBasis& basis,
                 const Interval& interval,
                 std::size_t grid_points)
{
  const DensityFit fit = select_model(chain, basis);
  const JumpRate& rate = model.rate;
  return oracle_dimension(
    fit,
    chain,
    model.flow,
    model.map,
    [&rate](double y) { return rate.rate(y); },
    interval,
    grid_points);
}

} // namespace pdmp
