#include "support/oracles.hpp"

#include "pdmp/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace pdmp;

namespace {

double
rel_err(double got, double want)
{
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

} // namespace

TEST(Flow, Examples)
{
  EXPECT_DOUBLE_EQ(Flow::additive(1).eval(2, 3), 5.0);
  EXPECT_DOUBLE_EQ(Flow::exponential(1).eval(1, 0), 1.0);
  EXPECT_NEAR(Flow::exponential(1).eval(2, std::log(2.0)), 4.0, 1e-15);

  EXPECT_DOUBLE_EQ(Flow::additive(2).time_to(1, 5), 2.0);
  EXPECT_NEAR(Flow::exponential(1).time_to(1, std::numbers::e), 1.0, 1e-15);
  EXPECT_EQ(Flow::additive(3).time_to(1.7, 1.7), 0.0);
  EXPECT_EQ(Flow::exponential(0.4).time_to(1.7, 1.7), 0.0);
}

TEST(Flow, RejectsBackwardTime)
{
  EXPECT_THROW(Flow::additive(1).time_to(2, 1), DomainError);
  EXPECT_THROW(Flow::additive(0), DomainError);
  EXPECT_THROW(Flow::exponential(-1), DomainError);
}

TEST(Flow, SemigroupAndInverse)
{
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> pos(0.01, 10.0), tim(0.0, 3.0);
  for (const Flow& flow : { Flow::additive(1.3), Flow::exponential(0.7) }) {
    for (int i = 0; i < 1000; ++i) {
      const double x = pos(gen), s = tim(gen), t = tim(gen);
      EXPECT_LT(rel_err(flow.eval(flow.eval(x, s), t), flow.eval(x, s + t)), 1e-12);
      const double y = x + pos(gen);
      EXPECT_LT(rel_err(flow.eval(x, flow.time_to(x, y)), y), 1e-12);
    }
  }
}

TEST(TransitionMap, Validation)
{
  EXPECT_THROW(TransitionMap(1.0), DomainError);
  EXPECT_THROW(TransitionMap(0.0), DomainError);
  EXPECT_THROW(TransitionMap(1.5), DomainError);
  const TransitionMap f(0.25);
  EXPECT_DOUBLE_EQ(f.inverse(f.apply(3.0)), 3.0);
}

TEST(Hazard, Examples)
{
  auto [l0, L0] = hazard_eval(JumpRate::power(1, 0), 3);
  EXPECT_DOUBLE_EQ(l0, 1.0);
  EXPECT_DOUBLE_EQ(L0, 3.0);

  auto [l1, L1] = hazard_eval(JumpRate::power(1, 1), 2);
  EXPECT_DOUBLE_EQ(l1, 2.0);
  EXPECT_DOUBLE_EQ(L1, 2.0);

  const auto q = JumpRate::shifted_quadratic(1, 0.5);
  auto [lq, Lq] = hazard_eval(q, 1);
  EXPECT_DOUBLE_EQ(lq, 0.5);
  const double want = double(oracle::integrate(
    [](oracle::real x) { return (x - 1) * (x - 1) + 0.5L; }, 0.0L, 1.0L));
  EXPECT_NEAR(Lq, want, 1e-12);
  EXPECT_NEAR(Lq, 5.0 / 6.0, 1e-12);
}

TEST(Hazard, PrimitiveMatchesQuadrature)
{
  const std::vector<JumpRate> rates = { JumpRate::power(1, 0),   JumpRate::power(2, 0.5),
                                        JumpRate::power(1, 1),   JumpRate::power(0.7, 2),
                                        JumpRate::power(1, -0.5), JumpRate::shifted_quadratic(1, 0.5),
                                        JumpRate::shifted_quadratic(2, 0) };
  for (const auto& rate : rates) {
    for (int i = 1; i <= 40; ++i) {
      const double x = 0.25 * i;
      // u = s^2 removes the x^{-1/2} endpoint singularity.
      const double want = double(oracle::integrate(
        [&](oracle::real s) { return 2 * s * oracle::real(rate.rate(double(s * s))); },
        0.0L,
        std::sqrt(oracle::real(x))));
      EXPECT_NEAR(rate.primitive(x), want, 1e-8) << rate.descriptor() << " x=" << x;
    }
  }
}

TEST(Hazard, InversePrimitive)
{
  const auto p = JumpRate::power(2, 1.5);
  ASSERT_TRUE(p.has_inverse_primitive());
  for (double x : { 0.1, 1.0, 4.0 }) {
    EXPECT_NEAR(*p.inverse_primitive(p.primitive(x)), x, 1e-12 * x);
  }
  EXPECT_THROW(JumpRate::power(1, -1), DomainError);
  EXPECT_THROW(JumpRate::shifted_quadratic(0, 1), DomainError);
  EXPECT_THROW(JumpRate::shifted_quadratic(1, -1), DomainError);
}

TEST(G, ClosedForms)
{
  const Flow add = Flow::additive(1);
  const Flow ex = Flow::exponential(1);
  const TransitionMap half(0.5);
  EXPECT_DOUBLE_EQ(g_eval(add, half, 1.0, 3.0), 2.0);
  EXPECT_DOUBLE_EQ(g_eval(add, half, 0.2, 0.1), 2.0);
  EXPECT_DOUBLE_EQ(g_eval(ex, half, 3.0, 2.0), 0.5);
  EXPECT_THROW(g_eval(add, half, 2.0, 0.5), DomainError);
  EXPECT_TRUE(g_is_state_independent(add));
  EXPECT_TRUE(g_is_state_independent(ex));
}

TEST(G, GenericMatchesFiniteDifferenceOracle)
{
  const Flow add = Flow::additive(1);
  const TransitionMap half(0.5);
  const oracle::real x = 1.0L;
  // (f o phi_x)^{-1}(y) = (y / kappa - x) / c, so g_x(y) is its derivative.
  auto inv = [&](oracle::real y) { return y / 0.5L - x; };
  for (double y : { 0.6, 1.0, 2.5 }) {
    EXPECT_NEAR(g_eval_generic(add, half, 1.0, y), 2.0, 1e-10);
    EXPECT_NEAR(double(oracle::derivative(inv, y)), g_eval_generic(add, half, 1.0, y), 1e-8);
  }
}

TEST(G, GenericMatchesClosedFormsOnRandomPoints)
{
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> pos(0.05, 8.0), gap(0.0, 5.0);
  for (const Flow& flow : { Flow::additive(1.7), Flow::exponential(0.6) }) {
    const TransitionMap f(0.3);
    for (int i = 0; i < 1000; ++i) {
      const double x = pos(gen);
      const double y = f.apply(x) + gap(gen);
      const double closed = g_eval(flow, f, x, y);
      EXPECT_NEAR(g_eval_generic(flow, f, x, y), closed, 1e-8 * std::max(1.0, closed));
    }
  }
}

TEST(ModelSpec, DescriptorRoundTrip)
{
  const ModelSpec a{ "tcp test", Flow::additive(1.25), TransitionMap(0.2),
                     JumpRate::shifted_quadratic(1, 0.5) };
  const ModelSpec b = parse_model_descriptor(a.descriptor());
  EXPECT_EQ(b.descriptor(), a.descriptor());
  EXPECT_EQ(b.flow.rate(), 1.25);
  ASSERT_NE(b.rate.as_shifted_quadratic(), nullptr);
  EXPECT_EQ(b.rate.as_shifted_quadratic()->b, 0.5);

  const ModelSpec c{ "bact", Flow::exponential(1.0 / 3.0), TransitionMap(0.5),
                     JumpRate::power(1, 0.5) };
  EXPECT_EQ(parse_model_descriptor(c.descriptor()).flow.rate(), 1.0 / 3.0);
  EXPECT_THROW(parse_model_descriptor("flow=sideways c=1"), FormatError);
}
