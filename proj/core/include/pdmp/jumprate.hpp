#pragma once

#include "pdmp/model.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace pdmp {

struct JumpChain;
class DensityFit;
class TrigBasis;

//! Closed interval [lo, hi] with 0 < lo < hi.
struct Interval
{
  double lo;
  double hi;

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

void validate_interval(const Interval& interval);

//! Threshold 1/ln(n) below which the denominator is declared unreliable.
//! Requires n >= 9 so that the threshold is below 1 (NumericalError otherwise).
double rate_threshold(std::size_t n);

//! D_n(y) = (1/n) sum_k g_{Z_{k-1}}(f(y)) 1{Z_k >= f(y), y >= Z_{k-1}},
//! evaluated by a direct O(n) pass over the transitions.
double d_hat(const JumpChain& chain,
             const Flow& flow,
             const TransitionMap& map,
             double y);
inline double
d_hat(const JumpChain& chain, const ModelSpec& model, double y)
{
  return d_hat(chain, model.flow, model.map, y);
}

//! Order-statistics evaluation of D_n for flows whose g_x(y) does not depend
//! on x. Uses #{Z_{k-1} <= y} - #{Z_k < f(y)}, valid because every transition
//! satisfies Z_k >= f(Z_{k-1}). O(n log n) setup, O(log n) per query, and
//! bit-identical to d_hat.
class DenominatorEstimator
{
public:
  DenominatorEstimator(const JumpChain& chain,
                       const Flow& flow,
                       const TransitionMap& map);

  double operator()(double y) const;
  std::size_t sample_size() const { return n_; }

private:
  Flow flow_;
  TransitionMap map_;
  std::size_t n_;
  std::vector<double> prev_sorted_;
  std::vector<double> next_sorted_;
};

//! nu_f / d when nu_f >= 0 and d >= threshold, else 0.
double lambda_quotient(double nu_at_fy, double denominator, double threshold);

//! Thresholded quotient estimator at y, using the fit's selected model.
double lambda_hat(const DensityFit& fit,
                  const JumpChain& chain,
                  const Flow& flow,
                  const TransitionMap& map,
                  double y);

//! `points` equispaced abscissae covering the interval, endpoints included.
std::vector<double> uniform_grid(const Interval& interval, std::size_t points);

//! int_I (estimate - truth)^2 by composite Simpson on an equispaced grid of at
//! least 257 (odd) points spanning I exactly. Throws DomainError otherwise.
double l2_risk(std::span<const double> grid,
               std::span<const double> estimate,
               const std::function<double(double)>& truth,
               const Interval& interval);

//! The four curves of a fitted jump rate on the evaluation grid.
struct RateEstimate
{
  Interval interval;
  std::size_t model_index;
  double threshold;
  std::vector<double> grid;
  std::vector<double> lambda_hat;
  std::vector<double> nu_hat_of_f;
  std::vector<double> d_hat;
  std::optional<std::vector<double>> lambda_true;
};

//! Evaluates lambda_hat for model `m` (the selected model when empty).
RateEstimate estimate_rate(const DensityFit& fit,
                           const JumpChain& chain,
                           const Flow& flow,
                           const TransitionMap& map,
                           const Interval& interval,
                           std::size_t grid_points = 513,
                           const std::function<double(double)>& truth = {},
                           std::optional<std::size_t> m = std::nullopt);

//! Tab-separated grid: y, lambda_hat, [lambda_true], nu_hat_of_f, d_hat.
void write_grid_tsv(std::ostream& out, const RateEstimate& estimate);

struct OracleResult
{
  std::size_t m_opt;
  double risk_opt;
  std::vector<double> risks; //!< risk of lambda_hat_m for every admissible m
};

//! Exhaustive sweep of ||lambda_hat_m - lambda||^2 over all fitted models;
//! ties go to the smallest m.
OracleResult oracle_dimension(const DensityFit& fit,
                              const JumpChain& chain,
                              const Flow& flow,
                              const TransitionMap& map,
                              const std::function<double(double)>& truth,
                              const Interval& interval,
                              std::size_t grid_points = 513);
OracleResult oracle_dimension(const JumpChain& chain,
                              const ModelSpec& model,
                              const TrigBasis& basis,
                              const Interval& interval,
                              std::size_t grid_points = 513);

} // namespace pdmp
