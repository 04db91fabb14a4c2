#include "pdmp/quadrature.hpp"

#include "pdmp/error.hpp"

#include <cmath>

#include <fmt/core.h>

namespace pdmp {

double
composite_simpson(std::span<const double> values, double h)
{
  const std::size_t m = values.size();
  if (m < 3 || m % 2 == 0) {
    throw DomainError(fmt::format(
      "composite Simpson needs an odd number (>= 3) of samples, got {}", m));
  }
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    (i % 2 == 1 ? odd : even) += values[i];
  }
  return h / 3.0 * (values.front() + 4.0 * odd + 2.0 * even + values.back());
}

double
composite_simpson(const std::function<double(double)>& f,
                  double a,
                  double b,
                  std::size_t intervals)
{
  if (intervals < 2 || intervals % 2 != 0) {
    throw DomainError(fmt::format(
      "composite Simpson needs an even panel count, got {}", intervals));
  }
  const double h = (b - a) / static_cast<double>(intervals);
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i < intervals; ++i) {
    const double v = f(a + static_cast<double>(i) * h);
    (i % 2 == 1 ? odd : even) += v;
  }
  return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

namespace {

double
adaptive_step(const std::function<double(double)>& f,
              double a,
              double b,
              double fa,
              double fm,
              double fb,
              double whole,
              double tol,
              int depth)
{
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double
adaptive_simpson(const std::function<double(double)>& f,
                 double a,
                 double b,
                 double abs_tol,
                 int max_depth)
{
  if (a == b) {
    return 0.0;
  }
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

} // namespace pdmp
