#include "pdmp/simulate.hpp"

#include "pdmp/error.hpp"
#include "pdmp/quadrature.hpp"
#include "pdmp/rng.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace pdmp {

namespace {

void
check_draw(double z, double e)
{
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError(fmt::format("sampler state must be > 0, got {}", z));
  }
  if (!(e >= 0.0) || !std::isfinite(e)) {
    throw DomainError(fmt::format("exponential draw must be >= 0, got {}", e));
  }
}

[[noreturn]] void
family_mismatch(const ModelSpec& model, const char* sampler)
{
  throw DomainError(fmt::format(
    "{} sampler does not apply to model '{}'", sampler, model.descriptor()));
}

} // namespace

SamplerKind
select_sampler(const ModelSpec& model)
{
  const bool additive = model.flow.kind() == Flow::Kind::additive;
  if (additive && model.rate.as_power()) {
    return SamplerKind::tcp_power;
  }
  if (additive && model.rate.as_shifted_quadratic()) {
    return SamplerKind::tcp_quadratic;
  }
  if (!additive && model.rate.as_power() && model.rate.as_power()->delta > 0.0) {
    return SamplerKind::bacterial_power;
  }
  if (additive && model.rate.has_inverse_primitive()) {
    return SamplerKind::inverse_primitive;
  }
  return SamplerKind::generic;
}

double
sample_next_tcp_power(const ModelSpec& model, double z, double e)
{
  const PowerRate* p = model.rate.as_power();
  if (model.flow.kind() != Flow::Kind::additive || p == nullptr) {
    family_mismatch(model, "additive/power");
  }
  check_draw(z, e);
  const double k = p->delta + 1.0;
  const double c = model.flow.rate();
  if (k == 1.0) {
    return model.map.kappa() * (z + c * e / p->lam);
  }
  const double next =
    model.map.kappa() * std::pow(std::pow(z, k) + k * c * e / p->lam, 1.0 / k);
  return std::max(next, model.map.apply(z));
}

double
sample_next_tcp_quadratic(const ModelSpec& model, double z, double e)
{
  const ShiftedQuadraticRate* q = model.rate.as_shifted_quadratic();
  if (model.flow.kind() != Flow::Kind::additive || q == nullptr) {
    family_mismatch(model, "additive/shifted-quadratic");
  }
  check_draw(z, e);
  if (e == 0.0) {
    return model.map.apply(z);
  }
  const double a = q->a;
  const double b = q->b;
  const double d = z - a;
  const double rhs = 3.0 * model.flow.rate() * e + d * d * d + 3.0 * b * d;
  // w = cbrt((Q+s)/2) + cbrt((Q-s)/2); the product of the two cube roots is
  // -b, so the cancelling term is recovered as -b/u.
  const double s = std::sqrt(rhs * rhs + 4.0 * b * b * b);
  const double u = std::cbrt(0.5 * (rhs + std::copysign(s, rhs)));
  double w = u == 0.0 ? 0.0 : u - b / u;
  const double slope = 3.0 * (w * w + b);
  if (slope > 0.0) {
    w -= (w * w * w + 3.0 * b * w - rhs) / slope;
  }
  return std::max(model.map.kappa() * (a + w), model.map.apply(z));
}

double
sample_next_bacterial_power(const ModelSpec& model, double z, double e)
{
  const PowerRate* p = model.rate.as_power();
  if (model.flow.kind() != Flow::Kind::exponential || p == nullptr) {
    family_mismatch(model, "exponential/power");
  }
  if (!(p->delta > 0.0)) {
    throw DomainError(fmt::format(
      "exponential/power sampler needs delta > 0, got {}", p->delta));
  }
  check_draw(z, e);
  const double d = p->delta;
  const double c = model.flow.rate();
  if (d == 1.0) {
    return model.map.kappa() * (c * e / p->lam + z);
  }
  const double next =
    model.map.kappa() * std::pow(d * c * e / p->lam + std::pow(z, d), 1.0 / d);
  return std::max(next, model.map.apply(z));
}

double
sample_next_inverse_primitive(const ModelSpec& model, double z, double e)
{
  if (model.flow.kind() != Flow::Kind::additive ||
      !model.rate.has_inverse_primitive()) {
    family_mismatch(model, "inverse-primitive");
  }
  check_draw(z, e);
  const double target = model.rate.primitive(z) + model.flow.rate() * e;
  return std::max(model.map.apply(*model.rate.inverse_primitive(target)),
                  model.map.apply(z));
}

double
sample_next_generic(const ModelSpec& model,
                    double z,
                    double e,
                    const SamplerOptions& options)
{
  check_draw(z, e);
  const double start = model.map.apply(z);
  if (e == 0.0) {
    return start;
  }
  const auto integrand = [&](double u) {
    return model.rate.rate(model.map.inverse(u)) *
           g_eval(model.flow, model.map, z, u);
  };
  const double tol = options.quad_rel_tol * std::max(e, 1.0);
  const double cap = options.cap_factor * std::max(z, 1.0);

  // Bracket: grow [lo, hi] geometrically until the hazard reaches e.
  double lo = start;
  double h_lo = 0.0;
  double width = std::max(start, 1e-3);
  double hi = lo + width;
  double h_hi = 0.0;
  for (;;) {
    if (hi > cap) {
      hi = cap;
    }
    h_hi = h_lo + adaptive_simpson(integrand, lo, hi, tol);
    if (h_hi >= e) {
      break;
    }
    if (hi >= cap) {
      throw NumericalError(fmt::format(
        "accumulated hazard {} stays below draw {} up to the state cap {} "
        "(from z={})",
        h_hi,
        e,
        cap,
        z));
    }
    lo = hi;
    h_lo = h_hi;
    width *= 2.0;
    hi = lo + width;
  }

  while (hi - lo > options.bisect_rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    const double h_mid = h_lo + adaptive_simpson(integrand, lo, mid, tol);
    if (h_mid < e) {
      lo = mid;
      h_lo = h_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double
sample_next(const ModelSpec& model,
            double z,
            double e,
            const SamplerOptions& options)
{
  switch (select_sampler(model)) {
    case SamplerKind::tcp_power:
      return sample_next_tcp_power(model, z, e);
    case SamplerKind::tcp_quadratic:
      return sample_next_tcp_quadratic(model, z, e);
    case SamplerKind::bacterial_power:
      return sample_next_bacterial_power(model, z, e);
    case SamplerKind::inverse_primitive:
      return sample_next_inverse_primitive(model, z, e);
    case SamplerKind::generic:
      break;
  }
  return sample_next_generic(model, z, e, options);
}

JumpChain
chain_from_draws(const ModelSpec& model,
                 double z0,
                 std::span<const double> draws,
                 const SamplerOptions& options)
{
  if (!(z0 > 0.0) || !std::isfinite(z0)) {
    throw DomainError(fmt::format("initial state must be > 0, got {}", z0));
  }
  if (draws.empty()) {
    throw DomainError("a chain needs at least one transition");
  }
  JumpChain chain;
  chain.model = model.descriptor();
  chain.z.reserve(draws.size() + 1);
  chain.z.push_back(z0);
  const SamplerKind kind = select_sampler(model);
  double z = z0;
  for (std::size_t k = 0; k < draws.size(); ++k) {
    try {
      switch (kind) {
        case SamplerKind::tcp_power:
          z = sample_next_tcp_power(model, z, draws[k]);
          break;
        case SamplerKind::tcp_quadratic:
          z = sample_next_tcp_quadratic(model, z, draws[k]);
          break;
        case SamplerKind::bacterial_power:
          z = sample_next_bacterial_power(model, z, draws[k]);
          break;
        case SamplerKind::inverse_primitive:
          z = sample_next_inverse_primitive(model, z, draws[k]);
          break;
        case SamplerKind::generic:
          z = sample_next_generic(model, z, draws[k], options);
          break;
      }
    } catch (const NumericalError& err) {
      throw NumericalError(
        fmt::format("transition {} of {}: {}", k + 1, draws.size(), err.what()));
    } catch (const DomainError& err) {
      throw DomainError(
        fmt::format("transition {} of {}: {}", k + 1, draws.size(), err.what()));
    }
    if (!(z > 0.0) || !std::isfinite(z)) {
      throw NumericalError(fmt::format(
        "transition {} of {} produced invalid state {}", k + 1, draws.size(), z));
    }
    chain.z.push_back(z);
  }
  return chain;
}

JumpChain
simulate_chain(const ModelSpec& model,
               double z0,
               std::size_t n,
               std::uint64_t seed,
               const SamplerOptions& options)
{
  if (n < 1) {
    throw DomainError("a chain needs at least one transition");
  }
  ExponentialStream stream(seed);
  std::vector<double> draws(n);
  for (double& e : draws) {
    e = stream.next();
  }
  JumpChain chain = chain_from_draws(model, z0, draws, options);
  chain.seed = seed;
  return chain;
}

std::vector<double>
reconstruct_times(const JumpChain& chain,
                  const Flow& flow,
                  const TransitionMap& map)
{
  const std::size_t n = chain.transitions();
  if (n < 1) {
    throw DomainError("time reconstruction needs at least one transition");
  }
  std::vector<double> times(n);
  double t = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double from = chain.z[k - 1];
    double to = map.inverse(chain.z[k]);
    if (to < from && from - to <= 8.0 * 0x1.0p-52 * from) {
      to = from; // f^-1(f(x)) rounding
    }
    if (to < from) {
      throw DomainError(fmt::format(
        "inconsistent chain at transition {}: f^-1(Z_k)={} < Z_(k-1)={}",
        k,
        to,
        from));
    }
    t += flow.time_to(from, to);
    times[k - 1] = t;
  }
  return times;
}

} // namespace pdmp
