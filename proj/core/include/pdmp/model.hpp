#pragma once

#include "pdmp/error.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace pdmp {

//! Deterministic motion between jumps.
//!
//! Two families are supported: additive, phi(x, t) = x + c t, and
//! exponential, phi(x, t) = x exp(c t). Both satisfy the semigroup property
//! phi(phi(x, s), t) = phi(x, s + t) and are strictly increasing in t.
class Flow
{
public:
  enum class Kind
  {
    additive,
    exponential
  };

  static Flow additive(double c);
  static Flow exponential(double c);

  Kind kind() const { return kind_; }
  double rate() const { return c_; }

  //! phi(x, t); requires x >= 0 and t >= 0.
  double eval(double x, double t) const;
  //! d/dt phi(x, t).
  double time_derivative(double x, double t) const;
  //! The t >= 0 with phi(x, t) = y. Throws DomainError when y < x.
  double time_to(double x, double y) const;

  std::string descriptor() const;

private:
  Flow(Kind kind, double c)
    : kind_(kind)
    , c_(c)
  {}

  Kind kind_;
  double c_;
};

//! Linear post-jump relocation f(x) = kappa x with kappa in (0, 1).
class TransitionMap
{
public:
  explicit TransitionMap(double kappa);

  double kappa() const { return kappa_; }
  double apply(double x) const { return kappa_ * x; }
  double inverse(double y) const { return y / kappa_; }
  double derivative(double /*x*/) const { return kappa_; }

private:
  double kappa_;
};

//! lambda(x) = lam * x^delta, delta > -1.
struct PowerRate
{
  double lam;
  double delta;
};

//! lambda(x) = (x - a)^2 + b, a > 0, b >= 0.
struct ShiftedQuadraticRate
{
  double a;
  double b;
};

//! Caller-supplied jump rate with its primitive (normalized so that
//! primitive(0) = 0) and, optionally, the primitive's inverse.
struct CustomRate
{
  std::function<double(double)> rate;
  std::function<double(double)> primitive;
  std::function<double(double)> inverse_primitive; // may be empty
  std::string label = "custom";
};

//! Jump rate lambda together with its primitive Lambda, Lambda(0) = 0.
class JumpRate
{
public:
  using Variant = std::variant<PowerRate, ShiftedQuadraticRate, CustomRate>;

  static JumpRate power(double lam, double delta);
  static JumpRate shifted_quadratic(double a, double b);
  static JumpRate custom(CustomRate custom);

  const Variant& variant() const { return variant_; }
  const PowerRate* as_power() const { return std::get_if<PowerRate>(&variant_); }
  const ShiftedQuadraticRate* as_shifted_quadratic() const
  {
    return std::get_if<ShiftedQuadraticRate>(&variant_);
  }

  //! lambda(x); requires x >= 0.
  double rate(double x) const;
  //! Lambda(x) = int_0^x lambda; requires x >= 0.
  double primitive(double x) const;
  //! Analytic Lambda^{-1}(u) when available.
  std::optional<double> inverse_primitive(double u) const;
  bool has_inverse_primitive() const;

  std::string descriptor() const;

private:
  explicit JumpRate(Variant v)
    : variant_(std::move(v))
  {}

  Variant variant_;
};

//! (lambda(x), Lambda(x)).
std::pair<double, double> hazard_eval(const JumpRate& rate, double x);

//! A complete PDMP instance: flow, transition map and jump rate.
struct ModelSpec
{
  std::string name;
  Flow flow;
  TransitionMap map;
  JumpRate rate;

  //! Space-separated key=value descriptor, parseable by parse_model_descriptor.
  std::string descriptor() const;
};

//! Inverse of ModelSpec::descriptor for the named rate families.
//! Throws FormatError on malformed input and DomainError on invalid values.
ModelSpec parse_model_descriptor(const std::string& text);

//! g_x(y) = [(f o phi_x)^{-1}]'(y), the change-of-variable factor of the
//! transition density. Uses the closed forms 1/(kappa c) (additive flow) and
//! 1/(c y) (exponential flow). Throws DomainError when y < f(x).
double g_eval(const Flow& flow, const TransitionMap& map, double x, double y);
inline double g_eval(const ModelSpec& model, double x, double y)
{
  return g_eval(model.flow, model.map, x, y);
}

//! Generic route for g_x(y): 1 / (f'(phi_x(t)) * d/dt phi(x, t)) evaluated at
//! t = time_to(x, f^{-1}(y)). Agrees with g_eval on every supported family.
double g_eval_generic(const Flow& flow,
                      const TransitionMap& map,
                      double x,
                      double y);

//! True when g_x(y) does not depend on x (both built-in flow families).
bool g_is_state_independent(const Flow& flow);

} // namespace pdmp
