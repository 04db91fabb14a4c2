// Acceptance run: one line per criterion, nonzero exit if any criterion fails.

#include "support/oracles.hpp"

#include "pdmp/pdmp.hpp"

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace pdmp;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome
{
  bool pass;
  std::string detail;
};

double
seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool
within_factor(double got, double want, double factor)
{
  return got >= want / factor && got <= want * factor;
}

oracle::Model
restate(const ModelSpec& m)
{
  oracle::Model o{ m.flow.kind() == Flow::Kind::exponential, m.flow.rate(), m.map.kappa(), {} };
  if (auto p = m.rate.as_power()) {
    const oracle::real lam = p->lam, d = p->delta;
    o.lambda = [lam, d](oracle::real x) { return lam * std::pow(x, d); };
  } else {
    const auto q = *m.rate.as_shifted_quadratic();
    const oracle::real a = q.a, b = q.b;
    o.lambda = [a, b](oracle::real x) { return (x - a) * (x - a) + b; };
  }
  return o;
}

ExperimentConfig
experiment(const std::string& preset, std::vector<std::size_t> ns, std::size_t reps = 50)
{
  const auto p = find_preset(preset);
  ExperimentConfig cfg{ p->model, p->interval };
  cfg.n_values = std::move(ns);
  cfg.replicates = reps;
  cfg.base_seed = 1;
  return cfg;
}

// 1. Empirical survival of Z_1 | Z_0 = 1 against the change-of-variable formula.
Outcome
survival_identity()
{
  const std::size_t draws = 100000;
  const double x = 1.0;
  std::string worst;
  bool pass = true;
  double slowest = 0;
  for (const auto& p : model_presets()) {
    const auto t0 = Clock::now();
    const auto o = restate(p.model);
    ExponentialStream stream(derive_seed(1, draws, 0));
    std::vector<double> z(draws);
    for (auto& v : z) {
      v = sample_next(p.model, x, stream.next());
    }
    std::sort(z.begin(), z.end());
    const double lo = p.model.map.apply(x);
    const double hi = double(oracle::survival_quantile(o, x, 0.005L));
    double max_z = 0;
    for (int i = 1; i <= 20; ++i) {
      const double y = lo + (hi - lo) * i / 20.0;
      const double prob = double(oracle::survival(o, x, y));
      const double emp =
        double(z.end() - std::lower_bound(z.begin(), z.end(), y)) / double(draws);
      const double score = std::abs(emp - prob) / oracle::binomial_se(prob, draws);
      max_z = std::max(max_z, score);
    }
    const double secs = seconds_since(t0);
    slowest = std::max(slowest, secs);
    if (max_z > 3.0 || secs >= 10.0) {
      pass = false;
      worst += fmt::format(" {}(max |z|={:.2f}, {:.2f}s)", p.name, max_z, secs);
    }
  }
  return { pass, pass ? fmt::format("{} families, 20 points each, all within 3 SE; slowest {:.2f}s",
                                    model_presets().size(), slowest)
                      : "failed:" + worst };
}

// 2. Two-sample KS between the generic and closed-form samplers.
Outcome
ks_equivalence()
{
  const std::size_t n = 10000;
  const auto t0 = Clock::now();
  double worst = 0;
  std::string worst_name;
  std::size_t checked = 0;
  for (const auto& p : model_presets()) {
    if (select_sampler(p.model) == SamplerKind::generic) {
      continue;
    }
    // Shared starting states from the stationary regime, independent draws.
    const JumpChain start = simulate_chain(p.model, 1.0, n, derive_seed(2, n, 0));
    ExponentialStream ea(derive_seed(2, n, 1)), eb(derive_seed(2, n, 2));
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = sample_next(p.model, start.z[i], ea.next());
      b[i] = sample_next_generic(p.model, start.z[i], eb.next());
    }
    const double d = oracle::ks_statistic(a, b);
    if (d > worst) {
      worst = d;
      worst_name = p.name;
    }
    ++checked;
  }
  const double secs = seconds_since(t0);
  const bool pass = worst < 0.03 && secs < 60.0 && checked == model_presets().size();
  return { pass, fmt::format("{} configurations, max KS {:.4f} ({}), {:.1f}s", checked, worst,
                             worst_name, secs) };
}

// 3. Stationary mean of the constant-rate TCP chain.
Outcome
stationary_mean()
{
  const auto t0 = Clock::now();
  const std::size_t n = 100000;
  const oracle::ConstantRateChain law{ 1.0L, 0.5L };
  const JumpChain c = simulate_chain(find_preset("tcp-k0.5-const")->model, 1.0, n, 3);
  const double mean = double(oracle::sum(c.post_jump()) / n);
  const double se = double(std::sqrt(law.mean_asymptotic_variance() / n));
  const double secs = seconds_since(t0);
  const double dev = std::abs(mean - double(law.mean())) / se;
  return { dev <= 3.0 && secs < 5.0,
           fmt::format("mean {:.5f} vs {:.0f}, {:.2f} SE, {:.2f}s", mean, double(law.mean()), dev,
                       secs) };
}

std::string
risks(const std::vector<ExperimentRow>& rows)
{
  std::string s;
  for (const auto& r : rows) {
    s += fmt::format("{}{:.4g}", s.empty() ? "" : "/", r.mean_risk);
  }
  return s;
}

struct Tables
{
  std::vector<ExperimentRow> tcp;
  std::vector<ReplicateResult> tcp_reps;
  double tcp_secs;
  std::vector<ExperimentRow> bact;
  std::vector<ReplicateResult> bact_reps;
  double bact_secs;
};

Tables
run_tables()
{
  Tables t;
  auto t0 = Clock::now();
  const auto tcp = experiment("tcp-k0.5-const", { 1000, 10000, 100000 });
  const ReplicateBatch a = run_replicates(tcp);
  t.tcp = aggregate(tcp, a);
  t.tcp_reps = a.results;
  t.tcp_secs = seconds_since(t0);

  t0 = Clock::now();
  const auto bact = experiment("bacterial-c1-linear", { 10000, 100000 });
  const ReplicateBatch b = run_replicates(bact);
  t.bact = aggregate(bact, b);
  t.bact_reps = b.results;
  t.bact_secs = seconds_since(t0);
  return t;
}

bool
all_completed(const std::vector<ExperimentRow>& rows)
{
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.failed == 0; });
}

// 4. TCP lambda = 1 risk decay.
Outcome
tcp_risk(const Tables& t)
{
  const double want[] = { 0.42, 0.15, 0.12 };
  bool pass = all_completed(t.tcp) && t.tcp.size() == 3;
  for (std::size_t i = 0; pass && i < 3; ++i) {
    pass = within_factor(t.tcp[i].mean_risk, want[i], 2.0);
  }
  pass = pass && t.tcp[0].mean_risk > t.tcp[1].mean_risk && t.tcp[1].mean_risk > t.tcp[2].mean_risk;
  return { pass, fmt::format("risks {} (target 0.42/0.15/0.12, x2), 50 reps in {:.1f}s",
                             risks(t.tcp), t.tcp_secs) };
}

// 5. Bacterial lambda = x.
Outcome
bacterial_risk(const Tables& t)
{
  const bool pass = all_completed(t.bact) && within_factor(t.bact[0].mean_risk, 0.0036, 3.0) &&
                    t.bact[1].mean_risk < 0.005;
  return { pass, fmt::format("risks {} at n=1e4/1e5 (target 0.0036 x3, < 0.005), {:.1f}s",
                             risks(t.bact), t.bact_secs) };
}

// 6. Oracle ratios on the rows of criteria 4 and 5.
Outcome
oracle_ratio(const Tables& t)
{
  bool pass = true;
  std::string s;
  for (const auto* rows : { &t.tcp, &t.bact }) {
    for (const auto& r : *rows) {
      pass = pass && r.oracle_ratio >= 1.0 && r.oracle_ratio <= 2.5;
      s += fmt::format("{}{:.3f}", s.empty() ? "" : "/", r.oracle_ratio);
    }
  }
  double min_ratio = INFINITY;
  for (const auto* reps : { &t.tcp_reps, &t.bact_reps }) {
    for (const auto& r : *reps) {
      min_ratio = std::min(min_ratio, r.risk_mhat / r.risk_mopt);
    }
  }
  pass = pass && min_ratio >= 1.0;
  return { pass, fmt::format("mean ratios {} in [1, 2.5]; min per-replicate ratio {:.6f}", s,
                             min_ratio) };
}

// 7. Selected dimension growth for TCP lambda = 1.
Outcome
dimension_growth(const Tables& t)
{
  const double want[] = { 12.6, 19.8, 28.5 };
  bool pass = t.tcp.size() == 3;
  std::string s;
  for (std::size_t i = 0; i < t.tcp.size(); ++i) {
    const double d = t.tcp[i].mean_d_mhat;
    pass = pass && std::abs(d - want[i]) <= 0.35 * want[i];
    if (i > 0) {
      pass = pass && d > t.tcp[i - 1].mean_d_mhat;
    }
    s += fmt::format("{}{:.2f}", s.empty() ? "" : "/", d);
  }
  return { pass, fmt::format("mean D_mhat {} (target 12.6/19.8/28.5, +-35%)", s) };
}

// 8. RMSE decay of the empirical denominator against its population value.
Outcome
denominator_rate()
{
  const auto p = *find_preset("tcp-k0.5-const");
  const double y0 = p.interval.mid();
  const oracle::ConstantRateChain law{ 1.0L, 0.5L };
  const double truth = double(oracle::denominator(law, y0));
  std::vector<double> ns{ 1e3, 1e4, 1e5 }, rmse;
  for (double nd : ns) {
    const auto n = static_cast<std::size_t>(nd);
    oracle::real se = 0;
    for (std::size_t r = 0; r < 50; ++r) {
      const JumpChain c = simulate_chain(p.model, 1.0, n, derive_seed(8, n, r));
      const double err = d_hat(c, p.model, y0) - truth;
      se += oracle::real(err) * err;
    }
    rmse.push_back(double(std::sqrt(se / 50)));
  }
  const double slope = oracle::loglog_slope(ns, rmse);
  return { slope >= -0.65 && slope <= -0.35,
           fmt::format("y0={:.2f}, D(y0)={:.5f}, RMSE {:.3g}/{:.3g}/{:.3g}, slope {:.3f}", y0,
                       truth, rmse[0], rmse[1], rmse[2], slope) };
}

// 9. Invariant suite.
Outcome
invariants()
{
  std::vector<std::string> failed;
  auto check = [&](bool ok, const char* what) {
    if (!ok) {
      failed.emplace_back(what);
    }
  };

  const TrigBasis basis(6);
  {
    const std::size_t d = 63, panels = 2048;
    const double h = 6.0 / panels;
    std::vector<std::vector<double>> table(panels + 1, std::vector<double>(d));
    for (std::size_t k = 0; k <= panels; ++k) {
      basis.eval_all(k * h, table[k]);
    }
    double worst = 0;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) {
        oracle::real s = 0;
        for (std::size_t k = 0; k <= panels; ++k) {
          const int w = (k == 0 || k == panels) ? 1 : (k % 2 ? 4 : 2);
          s += w * oracle::real(table[k][i]) * table[k][j];
        }
        worst = std::max(worst, std::abs(double(s * h / 3) - (i == j ? 1.0 : 0.0)));
      }
    }
    check(worst < 1e-8, "gram");
  }

  for (const auto& p : model_presets()) {
    const JumpChain c = simulate_chain(p.model, 1.0, 20000, derive_seed(9, 20000, 0));
    const DensityFit fit = select_model(c, basis);
    const auto full = fit.coefficients();
    for (std::size_t m = 0; m <= fit.max_model_index(); ++m) {
      double sq = 0;
      for (std::size_t l = 0; l < TrigBasis::dimension(m); ++l) {
        sq += full[l] * full[l];
      }
      check(fit.contrast(m) == -sq, "contrast = -sum a^2");
      check(m == 0 || fit.contrast(m) <= fit.contrast(m - 1), "contrast monotone");
      const auto prefix = coefficients(c, basis, m);
      check(std::equal(prefix.begin(), prefix.end(), full.begin()), "prefix nesting");
    }
    const RateEstimate est = estimate_rate(fit, c, p.model.flow, p.model.map, p.interval);
    for (std::size_t i = 0; i < est.grid.size(); ++i) {
      check(est.lambda_hat[i] >= 0.0, "lambda_hat >= 0");
      if (est.nu_hat_of_f[i] >= 0 && est.d_hat[i] >= est.threshold) {
        check(std::abs(est.lambda_hat[i] * est.d_hat[i] - est.nu_hat_of_f[i]) <=
                2 * std::numeric_limits<double>::epsilon() * est.nu_hat_of_f[i],
              "lambda_hat * D_hat = nu_hat o f");
      }
    }
  }

  {
    ExponentialStream s(99);
    double worst = 0;
    for (int i = 0; i < 100000; ++i) {
      const double a = 0.1 + 3 * s.uniform(), b = 2 * s.uniform(), kappa = 0.05 + 0.9 * s.uniform();
      const double z = 0.01 + 5 * s.uniform(), e = s.next();
      const ModelSpec m{ "q", Flow::additive(1), TransitionMap(kappa), JumpRate::shifted_quadratic(a, b) };
      const double next = sample_next_tcp_quadratic(m, z, e);
      if (next > kappa * z) {
        const oracle::real w = oracle::real(next) / kappa - a, d = z - a;
        const oracle::real q = 3.0L * e + d * d * d + 3.0L * b * d;
        worst = std::max(worst, double(std::abs(w * w * w + 3 * b * w - q)));
      }
    }
    check(worst < 1e-9, "cardan residual");
  }

  {
    const auto cfg = experiment("tcp-k0.2-quadratic", { 100, 1000 }, 5);
    std::ostringstream a, b;
    write_csv(a, run_experiment(cfg, { 1 }), false);
    write_csv(b, run_experiment(cfg, { 4 }), false);
    check(a.str() == b.str(), "bench csv determinism");
  }

  std::string s;
  for (const auto& f : failed) {
    if (s.find(f) == std::string::npos) {
      s += " " + f;
    }
  }
  return { failed.empty(), failed.empty() ? "gram, contrast, monotonicity, nesting, lambda_hat >= 0, "
                                            "quotient, cardan residual, csv determinism"
                                          : "failed:" + s };
}

// 10. Tail-violation warning and the reported risk plateau for lambda = sqrt(x).
Outcome
known_failure()
{
  auto cfg = experiment("bacterial-c1-sqrt", { 1000, 10000, 100000 });
  DiagnosticOptions opt;
  opt.chain_length = 20000;
  opt.rate_n_values = { 1000, 10000 };
  opt.rate_replicates = 10;
  opt.reference_factor = 10;
  const DiagnosticReport report = convergence_diagnostics(cfg, opt);
  bool warned = false;
  for (const auto& w : report.warnings) {
    warned |= w.find("biased") != std::string::npos;
  }
  const auto rows = run_experiment(cfg);
  const double want[] = { 0.43, 0.41, 0.40 };
  bool plateau = all_completed(rows);
  for (std::size_t i = 0; plateau && i < 3; ++i) {
    plateau = within_factor(rows[i].mean_risk, want[i], 2.0);
  }
  return { warned && plateau,
           fmt::format("warning {}; risks {} (target plateau 0.43/0.41/0.40, x2) {}",
                       warned ? "raised" : "missing", risks(rows),
                       plateau ? "plateau present" : "plateau absent") };
}

} // namespace

int
main()
{
  const auto t0 = Clock::now();
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
  Tables tables;
  bool have_tables = false;
  auto tables_once = [&]() -> const Tables& {
    if (!have_tables) {
      tables = run_tables();
      have_tables = true;
    }
    return tables;
  };
  criteria.emplace_back("sampler survival identity", survival_identity);
  criteria.emplace_back("generic/analytic KS equivalence", ks_equivalence);
  criteria.emplace_back("stationary mean", stationary_mean);
  criteria.emplace_back("TCP lambda=1 risk decay", [&] { return tcp_risk(tables_once()); });
  criteria.emplace_back("bacterial lambda=x risk", [&] { return bacterial_risk(tables_once()); });
  criteria.emplace_back("oracle ratio", [&] { return oracle_ratio(tables_once()); });
  criteria.emplace_back("selected dimension growth", [&] { return dimension_growth(tables_once()); });
  criteria.emplace_back("denominator RMSE rate", denominator_rate);
  criteria.emplace_back("invariant suite", invariants);
  criteria.emplace_back("tail-violation warning and plateau", known_failure);

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = { false, std::string("exception: ") + e.what() };
    }
    failures += o.pass ? 0 : 1;
    fmt::print("[{}] {:>2} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed in {:.1f}s\n", criteria.size() - failures, criteria.size(),
             seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
