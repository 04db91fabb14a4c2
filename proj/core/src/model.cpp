#include "pdmp/model.hpp"

#include "pdmp/error.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include <fmt/core.h>

namespace pdmp {

namespace {

void
require_finite_nonneg(double v, const char* what)
{
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(fmt::format("{} must be finite and >= 0, got {}", what, v));
  }
}

std::string
num(double v)
{
  return fmt::format("{:.17g}", v);
}

std::string
sanitized_name(const std::string& name)
{
  if (name.empty()) {
    return "unnamed";
  }
  std::string out = name;
  for (char& ch : out) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == '=') {
      ch = '_';
    }
  }
  return out;
}

} // namespace

Flow
Flow::additive(double c)
{
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DomainError(fmt::format("flow rate c must be > 0, got {}", c));
  }
  return Flow(Kind::additive, c);
}

Flow
Flow::exponential(double c)
{
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DomainError(fmt::format("flow rate c must be > 0, got {}", c));
  }
  return Flow(Kind::exponential, c);
}

double
Flow::eval(double x, double t) const
{
  require_finite_nonneg(x, "flow state x");
  require_finite_nonneg(t, "flow time t");
  switch (kind_) {
    case Kind::additive:
      return x + c_ * t;
    case Kind::exponential:
      return x * std::exp(c_ * t);
  }
  return x;
}

double
Flow::time_derivative(double x, double t) const
{
  switch (kind_) {
    case Kind::additive:
      return c_;
    case Kind::exponential:
      return c_ * x * std::exp(c_ * t);
  }
  return 0.0;
}

double
Flow::time_to(double x, double y) const
{
  require_finite_nonneg(x, "flow start x");
  if (!(y >= x) || !std::isfinite(y)) {
    throw DomainError(
      fmt::format("state {} is unreachable from {} along the flow", y, x));
  }
  switch (kind_) {
    case Kind::additive:
      return (y - x) / c_;
    case Kind::exponential:
      if (!(x > 0.0)) {
        throw DomainError("exponential flow cannot leave the origin");
      }
      return std::log(y / x) / c_;
  }
  return 0.0;
}

std::string
Flow::descriptor() const
{
  return fmt::format("flow={} c={}",
                     kind_ == Kind::additive ? "additive" : "exponential",
                     num(c_));
}

TransitionMap::TransitionMap(double kappa)
  : kappa_(kappa)
{
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw DomainError(fmt::format("kappa must lie in (0, 1), got {}", kappa));
  }
}

JumpRate
JumpRate::power(double lam, double delta)
{
  if (!(lam > 0.0) || !std::isfinite(lam)) {
    throw DomainError(fmt::format("power rate scale must be > 0, got {}", lam));
  }
  if (!(delta > -1.0) || !std::isfinite(delta)) {
    throw DomainError(
      fmt::format("power rate exponent must be > -1, got {}", delta));
  }
  return JumpRate(PowerRate{ lam, delta });
}

JumpRate
JumpRate::shifted_quadratic(double a, double b)
{
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError(fmt::format("quadratic rate center must be > 0, got {}", a));
  }
  if (!(b >= 0.0) || !std::isfinite(b)) {
    throw DomainError(fmt::format("quadratic rate offset must be >= 0, got {}", b));
  }
  return JumpRate(ShiftedQuadraticRate{ a, b });
}

JumpRate
JumpRate::custom(CustomRate custom)
{
  if (!custom.rate || !custom.primitive) {
    throw DomainError("custom rate needs both the rate and its primitive");
  }
  return JumpRate(std::move(custom));
}

double
JumpRate::rate(double x) const
{
  require_finite_nonneg(x, "rate argument");
  if (auto p = as_power()) {
    if (p->delta == 0.0) {
      return p->lam;
    }
    return p->lam * std::pow(x, p->delta);
  }
  if (auto q = as_shifted_quadratic()) {
    const double d = x - q->a;
    return d * d + q->b;
  }
  return std::get<CustomRate>(variant_).rate(x);
}

double
JumpRate::primitive(double x) const
{
  require_finite_nonneg(x, "primitive argument");
  if (auto p = as_power()) {
    const double e = p->delta + 1.0;
    return p->lam * std::pow(x, e) / e;
  }
  if (auto q = as_shifted_quadratic()) {
    const double d = x - q->a;
    return (d * d * d + q->a * q->a * q->a) / 3.0 + q->b * x;
  }
  return std::get<CustomRate>(variant_).primitive(x);
}

std::optional<double>
JumpRate::inverse_primitive(double u) const
{
  if (!(u >= 0.0)) {
    throw DomainError(fmt::format("primitive value must be >= 0, got {}", u));
  }
  if (auto p = as_power()) {
    const double e = p->delta + 1.0;
    return std::pow(e * u / p->lam, 1.0 / e);
  }
  if (auto q = as_shifted_quadratic()) {
    // (x-a)^3 + 3b(x-a) = 3u - a^3 - 3ab, a depressed cubic in w = x - a.
    const double a = q->a;
    const double b = q->b;
    const double rhs = 3.0 * u - a * a * a - 3.0 * a * b;
    const double s = std::sqrt(rhs * rhs + 4.0 * b * b * b);
    const double big = std::cbrt(0.5 * (rhs + std::copysign(s, rhs)));
    double w = big == 0.0 ? 0.0 : big - b / big;
    const double d = 3.0 * w * w + 3.0 * b;
    if (d > 0.0) {
      w -= (w * w * w + 3.0 * b * w - rhs) / d;
    }
    return a + w;
  }
  const auto& c = std::get<CustomRate>(variant_);
  if (!c.inverse_primitive) {
    return std::nullopt;
  }
  return c.inverse_primitive(u);
}

bool
JumpRate::has_inverse_primitive() const
{
  if (auto c = std::get_if<CustomRate>(&variant_)) {
    return static_cast<bool>(c->inverse_primitive);
  }
  return true;
}

std::string
JumpRate::descriptor() const
{
  if (auto p = as_power()) {
    return fmt::format("rate=power lam={} delta={}", num(p->lam), num(p->delta));
  }
  if (auto q = as_shifted_quadratic()) {
    return fmt::format("rate=shifted_quadratic a={} b={}", num(q->a), num(q->b));
  }
  return fmt::format("rate=custom label={}", std::get<CustomRate>(variant_).label);
}

std::pair<double, double>
hazard_eval(const JumpRate& rate, double x)
{
  return { rate.rate(x), rate.primitive(x) };
}

std::string
ModelSpec::descriptor() const
{
  return fmt::format("name={} {} kappa={} {}",
                     sanitized_name(name),
                     flow.descriptor(),
                     num(map.kappa()),
                     rate.descriptor());
}

ModelSpec
parse_model_descriptor(const std::string& text)
{
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw FormatError(fmt::format("bad model descriptor token '{}'", token));
    }
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw FormatError(fmt::format("model descriptor lacks '{}'", key));
    }
    return it->second;
  };
  auto getd = [&](const std::string& key) {
    const std::string& s = get(key);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size()) {
      throw FormatError(fmt::format("model descriptor: '{}' is not a number", s));
    }
    return v;
  };

  const std::string& flow_kind = get("flow");
  Flow flow = flow_kind == "additive" ? Flow::additive(getd("c"))
            : flow_kind == "exponential"
              ? Flow::exponential(getd("c"))
              : throw FormatError(fmt::format("unknown flow '{}'", flow_kind));
  const std::string& rate_kind = get("rate");
  JumpRate rate =
    rate_kind == "power" ? JumpRate::power(getd("lam"), getd("delta"))
    : rate_kind == "shifted_quadratic"
      ? JumpRate::shifted_quadratic(getd("a"), getd("b"))
      : throw FormatError(fmt::format("rate '{}' cannot be parsed", rate_kind));
  std::string name = kv.count("name") ? kv["name"] : "";
  return ModelSpec{ name, flow, TransitionMap(getd("kappa")), std::move(rate) };
}

double
g_eval(const Flow& flow, const TransitionMap& map, double x, double y)
{
  require_finite_nonneg(x, "g_eval state x");
  if (!(y >= map.apply(x))) {
    throw DomainError(
      fmt::format("g_x(y) queried outside its support: y={} < f(x)={}",
                  y,
                  map.apply(x)));
  }
  switch (flow.kind()) {
    case Flow::Kind::additive:
      return 1.0 / (map.kappa() * flow.rate());
    case Flow::Kind::exponential:
      return 1.0 / (flow.rate() * y);
  }
  return 0.0;
}

double
g_eval_generic(const Flow& flow, const TransitionMap& map, double x, double y)
{
  require_finite_nonneg(x, "g_eval state x");
  if (!(y >= map.apply(x))) {
    throw DomainError(
      fmt::format("g_x(y) queried outside its support: y={} < f(x)={}",
                  y,
                  map.apply(x)));
  }
  const double target = std::max(map.inverse(y), x);
  const double t = flow.time_to(x, target);
  const double pos = flow.eval(x, t);
  return 1.0 / (map.derivative(pos) * flow.time_derivative(x, t));
}

bool
g_is_state_independent(const Flow& flow)
{
  return flow.kind() == Flow::Kind::additive ||
         flow.kind() == Flow::Kind::exponential;
}

} // namespace pdmp
