#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace pdmp {

//! Composite Simpson rule over equispaced samples f(x_0), ..., f(x_{2k}) with
//! spacing h. Throws DomainError unless the sample count is odd and >= 3.
double composite_simpson(std::span<const double> values, double h);

//! Composite Simpson rule for f on [a, b] with `intervals` (even) panels.
double composite_simpson(const std::function<double(double)>& f,
                         double a,
                         double b,
                         std::size_t intervals);

//! Adaptive Simpson quadrature with Richardson correction. Recursion stops
//! once the local error estimate is below `abs_tol` or `max_depth` is hit.
double adaptive_simpson(const std::function<double(double)>& f,
                        double a,
                        double b,
                        double abs_tol,
                        int max_depth = 50);

} // namespace pdmp
