#pragma once

#include "pdmp/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pdmp {

//! Observed jump chain Z_0, ..., Z_n, optionally with the reconstructed jump
//! times T_1, ..., T_n (T_0 = 0 is implicit).
struct JumpChain
{
  std::vector<double> z;
  std::optional<std::vector<double>> times;
  std::optional<std::uint64_t> seed;
  std::string model; // ModelSpec::descriptor() of the generating model

  //! Number of transitions n.
  std::size_t transitions() const { return z.empty() ? 0 : z.size() - 1; }
  //! Z_1, ..., Z_n, the sample every estimator averages over.
  std::span<const double> post_jump() const
  {
    return z.empty() ? std::span<const double>{}
                     : std::span<const double>(z).subspan(1);
  }
};

//! Tuning of the numeric-inversion sampler.
struct SamplerOptions
{
  double cap_factor = 1e3;     //!< state cap = cap_factor * max(z, 1)
  double quad_rel_tol = 1e-10; //!< adaptive Simpson tolerance, relative to max(e, 1)
  double bisect_rel_tol = 1e-12;
};

enum class SamplerKind
{
  tcp_power,         //!< additive flow, power rate
  tcp_quadratic,     //!< additive flow, shifted quadratic rate (Cardan)
  bacterial_power,   //!< exponential flow, power rate with delta > 0
  inverse_primitive, //!< additive flow, custom rate with analytic Lambda^{-1}
  generic            //!< numeric inversion of the cumulative hazard
};

//! The exact sampler used for `model` by sample_next / simulate_chain.
SamplerKind select_sampler(const ModelSpec& model);

//! Z' = kappa (z^{d+1} + (d+1) c e / lam)^{1/(d+1)}.
double sample_next_tcp_power(const ModelSpec& model, double z, double e);

//! Real root of (Z'/kappa - a)^3 + 3b(Z'/kappa - a) = Q with
//! Q = 3ce + (z-a)^3 + 3b(z-a), solved by Cardan's formula.
double sample_next_tcp_quadratic(const ModelSpec& model, double z, double e);

//! Z' = kappa (d c e / lam + z^d)^{1/d}; requires delta > 0.
double sample_next_bacterial_power(const ModelSpec& model, double z, double e);

//! Z' = kappa Lambda^{-1}(Lambda(z) + c e) for additive flows.
double sample_next_inverse_primitive(const ModelSpec& model, double z, double e);

//! Solves int_{f(z)}^{y} lambda(f^{-1}(u)) g_z(u) du = e for y by bracketing
//! and bisection, with adaptive Simpson for the integral. Uses only lambda,
//! never its primitive. Throws NumericalError when the accumulated hazard
//! stays below e up to the state cap.
double sample_next_generic(const ModelSpec& model,
                           double z,
                           double e,
                           const SamplerOptions& options = {});

//! Dispatches to the sampler chosen by select_sampler.
double sample_next(const ModelSpec& model,
                   double z,
                   double e,
                   const SamplerOptions& options = {});

//! Runs the chain from z0 with the given unit exponential draws, one per
//! transition. Sampler failures are rethrown with the failing index.
JumpChain chain_from_draws(const ModelSpec& model,
                           double z0,
                           std::span<const double> draws,
                           const SamplerOptions& options = {});

//! n transitions from z0 driven by ExponentialStream(seed).
JumpChain simulate_chain(const ModelSpec& model,
                         double z0,
                         std::size_t n,
                         std::uint64_t seed,
                         const SamplerOptions& options = {});

//! T_1, ..., T_n from T_k - T_{k-1} = time_to(Z_{k-1}, f^{-1}(Z_k)).
//! Throws DomainError when f^{-1}(Z_k) < Z_{k-1} (inconsistent chain).
std::vector<double> reconstruct_times(const JumpChain& chain,
                                      const Flow& flow,
                                      const TransitionMap& map);
inline std::vector<double>
reconstruct_times(const JumpChain& chain, const ModelSpec& model)
{
  return reconstruct_times(chain, model.flow, model.map);
}

} // namespace pdmp
