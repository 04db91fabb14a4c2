#include "pdmp/bench.hpp"

#include <fmt/core.h>

namespace pdmp {

namespace {

ModelPreset
tcp(std::string name, double kappa, JumpRate rate, Interval interval)
{
  return { name,
           ModelSpec{ name, Flow::additive(1.0), TransitionMap(kappa), std::move(rate) },
           interval };
}

ModelPreset
bacterial(std::string name, double c, double delta, Interval interval)
{
  return { name,
           ModelSpec{ name,
                      Flow::exponential(c),
                      TransitionMap(0.5),
                      JumpRate::power(1.0, delta) },
           interval };
}

bool
same_rate(const JumpRate& a, const JumpRate& b)
{
  if (auto p = a.as_power()) {
    auto q = b.as_power();
    return q && p->lam == q->lam && p->delta == q->delta;
  }
  if (auto p = a.as_shifted_quadratic()) {
    auto q = b.as_shifted_quadratic();
    return q && p->a == q->a && p->b == q->b;
  }
  return false;
}

} // namespace

const std::vector<ModelPreset>&
model_presets()
{
  static const std::vector<ModelPreset> presets = {
    tcp("tcp-k0.5-const", 0.5, JumpRate::power(1.0, 0.0), { 0.2, 4.0 }),
    tcp("tcp-k0.5-sqrt", 0.5, JumpRate::power(1.0, 0.5), { 0.2, 3.0 }),
    tcp("tcp-k0.5-linear", 0.5, JumpRate::power(1.0, 1.0), { 0.5, 2.5 }),
    tcp("tcp-k0.2-linear", 0.2, JumpRate::power(1.0, 1.0), { 0.1, 2.5 }),
    tcp("tcp-k0.5-square", 0.5, JumpRate::power(1.0, 2.0), { 0.5, 2.0 }),
    tcp("tcp-k0.2-quadratic",
        0.2,
        JumpRate::shifted_quadratic(1.0, 0.5),
        { 0.1, 2.8 }),
    bacterial("bacterial-c1-sqrt", 1.0, 0.5, { 0.5, 3.0 }),
    bacterial("bacterial-c1-linear", 1.0, 1.0, { 0.5, 2.5 }),
    bacterial("bacterial-c1-square", 1.0, 2.0, { 0.5, 2.0 }),
    bacterial("bacterial-c3-square", 3.0, 2.0, { 1.0, 2.5 }),
  };
  return presets;
}

std::optional<ModelPreset>
find_preset(const std::string& name)
{
  for (const auto& p : model_presets()) {
    if (p.name == name) {
      return p;
    }
  }
  return std::nullopt;
}

std::optional<ModelPreset>
match_preset(const ModelSpec& model)
{
  for (const auto& p : model_presets()) {
    if (p.model.flow.kind() == model.flow.kind() &&
        p.model.flow.rate() == model.flow.rate() &&
        p.model.map.kappa() == model.map.kappa() &&
        same_rate(p.model.rate, model.rate)) {
      return p;
    }
  }
  return std::nullopt;
}

TailCondition
check_tail_condition(const ModelSpec& model)
{
  const bool additive = model.flow.kind() == Flow::Kind::additive;
  // Needed growth: lambda(x) >= const * x^(b + 1 - additive) for some b > 0,
  // since g is constant for the additive flow and 1/(c y) for the exponential.
  const double edge = additive ? 0.0 : 1.0;
  if (auto p = model.rate.as_power()) {
    TailCondition t{ p->delta > edge, p->delta == edge, p->delta < edge, "" };
    if (t.violated) {
      t.message = fmt::format(
        "jump rate x^{} grows too slowly for this flow (needs exponent > {}): "
        "the stationary regime is not controlled and the estimator is expected "
        "to be biased, with a risk that does not vanish as n grows",
        p->delta,
        edge);
    } else if (t.boundary) {
      t.message = fmt::format(
        "jump rate exponent {} sits exactly on the tail-growth boundary", edge);
    }
    return t;
  }
  if (model.rate.as_shifted_quadratic()) {
    return { true, false, false, "" };
  }
  return { false,
           false,
           false,
           "tail-growth condition cannot be checked for a custom rate" };
}

} // namespace pdmp
