#include "pdmp/basis.hpp"

#include "pdmp/error.hpp"
#include "pdmp/simulate.hpp"

#include <cmath>
#include <numbers>

#include <fmt/core.h>

namespace pdmp {

TrigBasis::TrigBasis(double a_max)
  : a_max_(a_max)
{
  if (!(a_max > 0.0) || !std::isfinite(a_max)) {
    throw DomainError(fmt::format("window upper bound must be > 0, got {}", a_max));
  }
  c0_ = 1.0 / std::sqrt(a_max);
  c1_ = std::sqrt(2.0 / a_max);
  freq_ = 2.0 * std::numbers::pi / a_max;
}

std::size_t
TrigBasis::max_model_index(std::size_t n)
{
  if (n == 0) {
    throw NumericalError("empty model collection: no m satisfies D_m^2 <= 0");
  }
  std::size_t m = 0;
  while (dimension(m + 1) * dimension(m + 1) <= n) {
    ++m;
  }
  return m;
}

double
TrigBasis::eval(std::size_t l, double x) const
{
  if (l == 0) {
    throw DomainError("basis indices start at 1");
  }
  if (!in_window(x)) {
    return 0.0;
  }
  if (l == 1) {
    return c0_;
  }
  const double j = static_cast<double>(l / 2);
  const double arg = freq_ * j * x;
  return l % 2 == 0 ? c1_ * std::cos(arg) : c1_ * std::sin(arg);
}

void
TrigBasis::eval_all(double x, std::span<double> out) const
{
  if (out.empty()) {
    return;
  }
  if (!in_window(x)) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  out[0] = c0_;
  const double step_c = std::cos(freq_ * x);
  const double step_s = std::sin(freq_ * x);
  double cj = step_c;
  double sj = step_s;
  for (std::size_t l = 1; l < out.size(); l += 2) {
    out[l] = c1_ * cj;
    if (l + 1 < out.size()) {
      out[l + 1] = c1_ * sj;
    }
    const double next_c = cj * step_c - sj * step_s;
    sj = sj * step_c + cj * step_s;
    cj = next_c;
  }
}

std::vector<double>
coefficients(std::span<const double> sample,
             const TrigBasis& basis,
             std::size_t m)
{
  const std::size_t n = sample.size();
  const std::size_t d = TrigBasis::dimension(m);
  if (n == 0 || d * d > n) {
    throw NumericalError(fmt::format(
      "model m={} (D_m={}) is outside the admissible collection for n={}",
      m,
      d,
      n));
  }
  // Neumaier-compensated sums, one per basis index, in sample order.
  std::vector<double> sum(d, 0.0);
  std::vector<double> comp(d, 0.0);
  std::vector<double> values(d);
  for (double x : sample) {
    if (!basis.in_window(x)) {
      continue;
    }
    basis.eval_all(x, values);
    for (std::size_t l = 0; l < d; ++l) {
      const double v = values[l];
      const double t = sum[l] + v;
      if (std::abs(sum[l]) >= std::abs(v)) {
        comp[l] += (sum[l] - t) + v;
      } else {
        comp[l] += (v - t) + sum[l];
      }
      sum[l] = t;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t l = 0; l < d; ++l) {
    sum[l] = (sum[l] + comp[l]) * inv_n;
  }
  return sum;
}

std::vector<double>
coefficients(const JumpChain& chain, const TrigBasis& basis, std::size_t m)
{
  return coefficients(chain.post_jump(), basis, m);
}

} // namespace pdmp
