#include "pdmp/density.hpp"

#include "pdmp/error.hpp"
#include "pdmp/simulate.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/core.h>

namespace pdmp {

double
contrast(std::span<const double> coeffs)
{
  double s = 0.0;
  for (double a : coeffs) {
    s += a * a;
  }
  return -s;
}

double
penalty(std::size_t dimension, std::size_t n, double sigma, double sigma_prime)
{
  if (n == 0) {
    throw DomainError("penalty needs n >= 1");
  }
  const double nn = static_cast<double>(n);
  return sigma * static_cast<double>(dimension) / nn + sigma_prime / nn;
}

DensityFit::DensityFit(TrigBasis basis,
                       std::vector<double> coeffs,
                       std::size_t n,
                       PenaltySpec penalty)
  : basis_(basis)
  , coeffs_(std::move(coeffs))
  , n_(n)
  , penalty_(penalty)
{
  if (coeffs_.empty() || coeffs_.size() % 2 == 0) {
    throw DomainError(fmt::format(
      "coefficient count must be an odd dimension D_m, got {}", coeffs_.size()));
  }
  if (n_ == 0) {
    throw DomainError("density fit needs n >= 1");
  }
  m_max_ = (coeffs_.size() - 1) / 2;
  contrast_.resize(m_max_ + 1);
  penalty_values_.resize(m_max_ + 1);
  // Running sum over l, so contrast(m+1) <= contrast(m) holds exactly.
  double sq = 0.0;
  std::size_t l = 0;
  for (std::size_t m = 0; m <= m_max_; ++m) {
    const std::size_t d = TrigBasis::dimension(m);
    for (; l < d; ++l) {
      sq += coeffs_[l] * coeffs_[l];
    }
    contrast_[m] = -sq;
    penalty_values_[m] = pdmp::penalty(d, n_, penalty_.sigma, penalty_.sigma_prime);
  }
  m_hat_ = 0;
  for (std::size_t m = 1; m <= m_max_; ++m) {
    if (criterion(m) < criterion(m_hat_)) {
      m_hat_ = m;
    }
  }
}

std::span<const double>
DensityFit::coefficients(std::size_t m) const
{
  if (m > m_max_) {
    throw DomainError(
      fmt::format("model {} exceeds the largest fitted model {}", m, m_max_));
  }
  return std::span<const double>(coeffs_).first(TrigBasis::dimension(m));
}

double
DensityFit::eval(std::size_t m, double x) const
{
  const auto a = coefficients(m);
  if (!basis_.in_window(x)) {
    return 0.0;
  }
  thread_local std::vector<double> phi;
  phi.resize(a.size());
  basis_.eval_all(x, phi);
  double s = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    s += a[l] * phi[l];
  }
  return s;
}

DensityFit
DensityFit::with_penalty(PenaltySpec penalty) const
{
  return DensityFit(basis_, coeffs_, n_, penalty);
}

DensityFit
select_model(std::span<const double> sample,
             const TrigBasis& basis,
             PenaltySpec penalty)
{
  const std::size_t n = sample.size();
  if (n < 9) {
    throw NumericalError(fmt::format(
      "n too small for threshold: n={} but at least 9 observations are needed",
      n));
  }
  const std::size_t m_max = TrigBasis::max_model_index(n);
  return DensityFit(basis, coefficients(sample, basis, m_max), n, penalty);
}

DensityFit
select_model(const JumpChain& chain, const TrigBasis& basis, PenaltySpec penalty)
{
  return select_model(chain.post_jump(), basis, penalty);
}

DimensionJump
dimension_jump(const DensityFit& fit, std::span<const double> sigmas)
{
  DimensionJump out;
  out.sigmas.assign(sigmas.begin(), sigmas.end());
  for (std::size_t i = 1; i < out.sigmas.size(); ++i) {
    if (!(out.sigmas[i] > out.sigmas[i - 1])) {
      throw DomainError("dimension jump needs a strictly increasing sigma grid");
    }
  }
  for (double s : out.sigmas) {
    out.dimensions.push_back(
      fit.with_penalty({ s, fit.penalty_spec().sigma_prime }).selected_dimension());
  }
  std::size_t best_drop = 0;
  for (std::size_t i = 1; i < out.dimensions.size(); ++i) {
    const std::size_t drop = out.dimensions[i - 1] > out.dimensions[i]
                               ? out.dimensions[i - 1] - out.dimensions[i]
                               : 0;
    if (drop > best_drop) {
      best_drop = drop;
      out.sigma_min = out.sigmas[i];
    }
  }
  out.recommended_sigma = 2.0 * out.sigma_min;
  return out;
}

void
write_fit(std::ostream& out, const DensityFit& fit)
{
  out << "# pdmp-density-fit v1\n";
  out << fmt::format("window 0 {:.17g}\n", fit.basis().window_max());
  out << fmt::format("n {}\n", fit.sample_size());
  out << fmt::format("d_max {}\n", fit.coefficients().size());
  out << fmt::format("m_hat {}\n", fit.selected());
  out << fmt::format("d_hat {}\n", fit.selected_dimension());
  out << fmt::format("sigma {:.17g}\n", fit.penalty_spec().sigma);
  out << fmt::format("sigma_prime {:.17g}\n", fit.penalty_spec().sigma_prime);
  out << "coefficients\n";
  for (double a : fit.coefficients()) {
    out << fmt::format("{:.17g}\n", a);
  }
}

DensityFit
read_fit(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line) || line != "# pdmp-density-fit v1") {
    throw FormatError("not a pdmp density fit record");
  }
  std::string key;
  double a_lo = 0.0, a_max = 0.0, sigma = 0.0, sigma_prime = 0.0;
  std::size_t n = 0, d_max = 0, m_hat = 0, d_hat = 0;
  auto expect = [&](const char* k) {
    if (!(in >> key) || key != k) {
      throw FormatError(fmt::format("fit record: expected '{}'", k));
    }
  };
  expect("window");
  in >> a_lo >> a_max;
  expect("n");
  in >> n;
  expect("d_max");
  in >> d_max;
  expect("m_hat");
  in >> m_hat;
  expect("d_hat");
  in >> d_hat;
  expect("sigma");
  in >> sigma;
  expect("sigma_prime");
  in >> sigma_prime;
  expect("coefficients");
  if (!in || a_lo != 0.0) {
    throw FormatError("fit record: malformed header");
  }
  std::vector<double> coeffs(d_max);
  for (double& a : coeffs) {
    std::string tok;
    if (!(in >> tok)) {
      throw FormatError("fit record: truncated coefficient list");
    }
    std::size_t used = 0;
    a = std::stod(tok, &used);
    if (used != tok.size()) {
      throw FormatError(fmt::format("fit record: bad coefficient '{}'", tok));
    }
  }
  DensityFit fit(TrigBasis(a_max), std::move(coeffs), n, { sigma, sigma_prime });
  if (fit.selected() != m_hat || fit.selected_dimension() != d_hat) {
    throw FormatError("fit record: stored selection disagrees with coefficients");
  }
  return fit;
}

} // namespace pdmp
