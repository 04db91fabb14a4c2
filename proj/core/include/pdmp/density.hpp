#pragma once

#include "pdmp/basis.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace pdmp {

struct JumpChain;

//! pen(m) = sigma * D_m / n + sigma_prime / n.
struct PenaltySpec
{
  double sigma = 2.0;
  double sigma_prime = 0.0;
};

//! gamma_n at its minimizer over S_m: -sum_l a_l^2.
double contrast(std::span<const double> coeffs);

//! sigma * dimension / n + sigma_prime / n. Throws DomainError when n == 0.
double penalty(std::size_t dimension,
               std::size_t n,
               double sigma,
               double sigma_prime);

//! Adaptive projection estimate of the stationary density on the window.
//!
//! Coefficients are stored once at the largest admissible model; model m uses
//! the first D_m of them.
class DensityFit
{
public:
  DensityFit(TrigBasis basis,
             std::vector<double> coeffs,
             std::size_t n,
             PenaltySpec penalty);

  const TrigBasis& basis() const { return basis_; }
  std::size_t sample_size() const { return n_; }
  const PenaltySpec& penalty_spec() const { return penalty_; }
  std::size_t max_model_index() const { return m_max_; }
  std::size_t selected() const { return m_hat_; }
  std::size_t selected_dimension() const { return TrigBasis::dimension(m_hat_); }

  std::span<const double> coefficients() const { return coeffs_; }
  std::span<const double> coefficients(std::size_t m) const;

  double contrast(std::size_t m) const { return contrast_.at(m); }
  double penalty(std::size_t m) const { return penalty_values_.at(m); }
  double criterion(std::size_t m) const { return contrast(m) + penalty(m); }

  //! nu_m(x) = sum_{l <= D_m} a_l phi_l(x); zero outside the window.
  double eval(std::size_t m, double x) const;
  double eval(double x) const { return eval(m_hat_, x); }

  //! Same coefficients, selection redone under another penalty.
  DensityFit with_penalty(PenaltySpec penalty) const;

private:
  TrigBasis basis_;
  std::vector<double> coeffs_;
  std::size_t n_;
  PenaltySpec penalty_;
  std::size_t m_max_;
  std::vector<double> contrast_;
  std::vector<double> penalty_values_;
  std::size_t m_hat_;
};

//! Penalized model selection over {m : D_m^2 <= n}; ties go to the smallest m.
//! Requires n >= 9 (NumericalError otherwise).
DensityFit select_model(std::span<const double> sample,
                        const TrigBasis& basis,
                        PenaltySpec penalty = {});
DensityFit select_model(const JumpChain& chain,
                        const TrigBasis& basis,
                        PenaltySpec penalty = {});

//! Selected dimension as a function of the penalty slope, and the jump
//! calibration sigma_jump = 2 * sigma_min where sigma_min is the slope at
//! which the largest drop in selected dimension happens.
struct DimensionJump
{
  std::vector<double> sigmas;
  std::vector<std::size_t> dimensions;
  double sigma_min = 0.0;
  double recommended_sigma = 0.0;
};
DimensionJump dimension_jump(const DensityFit& fit, std::span<const double> sigmas);

//! Text record: window, D_max, coefficients (17 significant digits), m_hat,
//! sigma, sigma_prime, n.
void write_fit(std::ostream& out, const DensityFit& fit);
DensityFit read_fit(std::istream& in);

} // namespace pdmp
