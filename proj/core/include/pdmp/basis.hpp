#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pdmp {

struct JumpChain;

//! Trigonometric orthonormal system on the window A = [0, a_max].
//!
//! phi_1 = 1/sqrt(a_max); for j >= 1, phi_{2j} = sqrt(2/a_max) cos(2 pi j x/a_max)
//! and phi_{2j+1} = sqrt(2/a_max) sin(2 pi j x/a_max). Model m spans the first
//! D_m = 2m + 1 functions, so the subspaces are nested. Every function vanishes
//! outside A.
class TrigBasis
{
public:
  explicit TrigBasis(double a_max = 6.0);

  double window_max() const { return a_max_; }
  bool in_window(double x) const { return x >= 0.0 && x <= a_max_; }

  static constexpr std::size_t dimension(std::size_t m) { return 2 * m + 1; }
  //! Largest m with D_m^2 <= n. Throws NumericalError when n == 0.
  static std::size_t max_model_index(std::size_t n);

  //! sup_x sum_{l <= D} phi_l(x)^2 <= psi1 * D.
  double psi1() const { return 2.0 / a_max_; }

  //! phi_l(x), l >= 1, from the direct trigonometric formula.
  double eval(std::size_t l, double x) const;

  //! phi_1(x), ..., phi_D(x) with D = out.size(), using an angle-addition
  //! recurrence. The value written for index l depends only on (l, x), never
  //! on D, which keeps coefficient prefixes exact.
  void eval_all(double x, std::span<double> out) const;

private:
  double a_max_;
  double c0_;   // 1/sqrt(a_max)
  double c1_;   // sqrt(2/a_max)
  double freq_; // 2 pi / a_max
};

//! Empirical coefficients a_l = (1/n) sum_k phi_l(Z_k), l = 1..D_m, over the
//! sample Z_1..Z_n. Throws NumericalError when D_m^2 > n.
std::vector<double> coefficients(std::span<const double> sample,
                                 const TrigBasis& basis,
                                 std::size_t m);
std::vector<double> coefficients(const JumpChain& chain,
                                 const TrigBasis& basis,
                                 std::size_t m);

} // namespace pdmp
