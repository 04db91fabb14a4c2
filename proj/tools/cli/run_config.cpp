#include "cli/run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>

#include <fmt/core.h>

namespace pdmp::cli {

using nlohmann::json;

namespace {

// A JSON object plus the dotted path that leads to it, for error messages.
class Node
{
public:
  Node(const json* value, std::string path)
    : value_(value)
    , path_(std::move(path))
  {
    if (value_ && !value_->is_object()) {
      fail(path_.empty() ? "<root>" : path_, "must be an object");
    }
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what)
  {
    throw ConfigError(fmt::format("{}: {}", path, what));
  }

  std::string key_path(const std::string& key) const
  {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool present() const { return value_ != nullptr; }
  bool has(const std::string& key) const
  {
    return value_ && value_->contains(key) && !(*value_)[key].is_null();
  }

  void allow(std::initializer_list<const char*> keys) const
  {
    if (!value_) {
      return;
    }
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : value_->items()) {
      if (!ok.count(k)) {
        fail(key_path(k), "unknown key");
      }
    }
  }

  Node child(const std::string& key) const
  {
    return Node(has(key) ? &(*value_)[key] : nullptr, key_path(key));
  }

  const json& raw(const std::string& key) const { return (*value_)[key]; }

  double number(const std::string& key, double fallback) const
  {
    if (!has(key)) {
      return fallback;
    }
    const json& v = raw(key);
    if (!v.is_number()) {
      fail(key_path(key), fmt::format("must be a number, got {}", v.dump()));
    }
    return v.get<double>();
  }

  double required_number(const std::string& key) const
  {
    if (!has(key)) {
      fail(key_path(key), "is required");
    }
    return number(key, 0.0);
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) const
  {
    if (!has(key)) {
      return fallback;
    }
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(key_path(key),
           fmt::format("must be a non-negative integer, got {}", v.dump()));
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) const
  {
    if (!has(key)) {
      return fallback;
    }
    const json& v = raw(key);
    if (!v.is_boolean()) {
      fail(key_path(key), fmt::format("must be true or false, got {}", v.dump()));
    }
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) const
  {
    if (!has(key)) {
      return fallback;
    }
    const json& v = raw(key);
    if (!v.is_string()) {
      fail(key_path(key), fmt::format("must be a string, got {}", v.dump()));
    }
    return v.get<std::string>();
  }

private:
  const json* value_;
  std::string path_;
};

template<class F>
auto
guarded(const std::string& path, F&& make)
{
  try {
    return make();
  } catch (const DomainError& err) {
    Node::fail(path, err.what());
  }
}

void
parse_model(const Node& node, ModelSection& out)
{
  if (!node.present()) {
    return;
  }
  if (node.has("preset")) {
    node.allow({ "preset" });
    const std::string name = node.string("preset", "");
    auto preset = find_preset(name);
    if (!preset) {
      std::string known;
      for (const auto& p : model_presets()) {
        known += (known.empty() ? "" : ", ") + p.name;
      }
      Node::fail(node.key_path("preset"),
                 fmt::format("unknown preset '{}' (known: {})", name, known));
    }
    out.name = preset->name;
    out.flow = preset->model.flow;
    out.map = preset->model.map;
    out.rate = preset->model.rate;
    return;
  }
  node.allow({ "name", "flow", "f", "rate" });
  out.name = node.string("name", "");

  const Node flow = node.child("flow");
  if (!flow.present()) {
    Node::fail(node.key_path("flow"), "is required");
  }
  flow.allow({ "variant", "c" });
  const std::string variant = flow.string("variant", "");
  const double c = flow.required_number("c");
  if (variant == "additive") {
    out.flow = guarded(flow.key_path("c"), [&] { return Flow::additive(c); });
  } else if (variant == "exponential") {
    out.flow = guarded(flow.key_path("c"), [&] { return Flow::exponential(c); });
  } else {
    Node::fail(flow.key_path("variant"),
               fmt::format("must be 'additive' or 'exponential', got '{}'", variant));
  }

  const Node f = node.child("f");
  if (!f.present()) {
    Node::fail(node.key_path("f"), "is required");
  }
  f.allow({ "kappa" });
  const double kappa = f.required_number("kappa");
  out.map = guarded(f.key_path("kappa"), [&] { return TransitionMap(kappa); });

  const Node rate = node.child("rate");
  if (!rate.present()) {
    return;
  }
  const std::string kind = rate.string("variant", "");
  if (kind == "power") {
    rate.allow({ "variant", "lam", "delta" });
    const double lam = rate.number("lam", 1.0);
    const double delta = rate.required_number("delta");
    out.rate = guarded(rate.key_path("delta"),
                       [&] { return JumpRate::power(lam, delta); });
  } else if (kind == "shifted_quadratic") {
    rate.allow({ "variant", "a", "b" });
    const double a = rate.required_number("a");
    const double b = rate.required_number("b");
    out.rate = guarded(rate.key_path("a"),
                       [&] { return JumpRate::shifted_quadratic(a, b); });
  } else {
    Node::fail(rate.key_path("variant"),
               fmt::format("must be 'power' or 'shifted_quadratic', got '{}'", kind));
  }
}

std::size_t
odd_grid(const Node& node, const std::string& key, std::size_t fallback)
{
  const auto g = node.unsigned_int(key, fallback);
  if (g < 257 || g % 2 == 0) {
    Node::fail(node.key_path(key), fmt::format("must be odd and >= 257, got {}", g));
  }
  return static_cast<std::size_t>(g);
}

} // namespace

ModelSpec
RunConfig::model_spec() const
{
  if (!model.flow) {
    Node::fail("model.flow", "is required");
  }
  if (!model.map) {
    Node::fail("model.f", "is required");
  }
  if (!model.rate) {
    Node::fail("model.rate", "is required for this command");
  }
  return ModelSpec{ model.name, *model.flow, *model.map, *model.rate };
}

Interval
RunConfig::interval() const
{
  if (estimation.interval) {
    return *estimation.interval;
  }
  if (model.flow && model.map && model.rate) {
    if (auto p = match_preset(model_spec())) {
      return p->interval;
    }
  }
  Node::fail("estimation.I", "is required (no default interval for this model)");
}

ExperimentConfig
RunConfig::experiment_config() const
{
  ExperimentConfig cfg{ model_spec(),
                        interval(),
                        estimation.a_max,
                        experiment.n_values,
                        experiment.replicates,
                        estimation.penalty,
                        experiment.base_seed,
                        simulation.z0,
                        io.grid_points };
  if (cfg.model.name.empty()) {
    cfg.model.name = "experiment";
  }
  return cfg;
}

RunConfig
parse_config(const json& doc)
{
  const Node root(&doc, "");
  root.allow({ "model", "simulation", "estimation", "experiment", "io" });
  RunConfig cfg;

  parse_model(root.child("model"), cfg.model);

  const Node sim = root.child("simulation");
  sim.allow({ "z0", "n", "seed" });
  cfg.simulation.z0 = sim.number("z0", cfg.simulation.z0);
  if (!(cfg.simulation.z0 > 0.0)) {
    Node::fail("simulation.z0", fmt::format("must be > 0, got {}", cfg.simulation.z0));
  }
  cfg.simulation.n = sim.unsigned_int("n", cfg.simulation.n);
  if (cfg.simulation.n < 1) {
    Node::fail("simulation.n", "must be >= 1");
  }
  cfg.simulation.seed = sim.unsigned_int("seed", cfg.simulation.seed);

  const Node est = root.child("estimation");
  est.allow({ "A_max", "I", "sigma", "sigma_prime" });
  cfg.estimation.a_max = est.number("A_max", cfg.estimation.a_max);
  if (!(cfg.estimation.a_max > 0.0)) {
    Node::fail("estimation.A_max", fmt::format("must be > 0, got {}", cfg.estimation.a_max));
  }
  if (est.has("I")) {
    const json& i = est.raw("I");
    if (!i.is_array() || i.size() != 2 || !i[0].is_number() || !i[1].is_number()) {
      Node::fail("estimation.I", fmt::format("must be [lo, hi], got {}", i.dump()));
    }
    const Interval iv{ i[0].get<double>(), i[1].get<double>() };
    guarded("estimation.I", [&] {
      validate_interval(iv);
      return 0;
    });
    cfg.estimation.interval = iv;
  }
  cfg.estimation.penalty.sigma = est.number("sigma", cfg.estimation.penalty.sigma);
  cfg.estimation.penalty.sigma_prime =
    est.number("sigma_prime", cfg.estimation.penalty.sigma_prime);
  if (!(cfg.estimation.penalty.sigma >= 0.0)) {
    Node::fail("estimation.sigma", "must be >= 0");
  }
  if (!(cfg.estimation.penalty.sigma_prime >= 0.0)) {
    Node::fail("estimation.sigma_prime", "must be >= 0");
  }

  const Node exp = root.child("experiment");
  exp.allow({ "n_values", "replicates", "base_seed", "threads" });
  if (exp.has("n_values")) {
    const json& ns = exp.raw("n_values");
    if (!ns.is_array() || ns.empty()) {
      Node::fail("experiment.n_values", "must be a non-empty array of integers");
    }
    cfg.experiment.n_values.clear();
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const std::string path = fmt::format("experiment.n_values[{}]", i);
      if (!ns[i].is_number_integer() || ns[i].get<std::int64_t>() < 0) {
        Node::fail(path, fmt::format("must be a positive integer, got {}", ns[i].dump()));
      }
      const auto n = ns[i].get<std::size_t>();
      if (n < 9) {
        Node::fail(path, fmt::format("must be >= 9, got {}", n));
      }
      if (!cfg.experiment.n_values.empty() && n <= cfg.experiment.n_values.back()) {
        Node::fail(path, "n_values must be strictly increasing");
      }
      cfg.experiment.n_values.push_back(n);
    }
  }
  cfg.experiment.replicates = exp.unsigned_int("replicates", cfg.experiment.replicates);
  if (cfg.experiment.replicates < 1) {
    Node::fail("experiment.replicates", "must be >= 1");
  }
  cfg.experiment.base_seed = exp.unsigned_int("base_seed", cfg.experiment.base_seed);
  cfg.experiment.threads = exp.unsigned_int("threads", cfg.experiment.threads);

  const Node io = root.child("io");
  io.allow({ "out_dir", "grid_points", "write_grids", "record_timing" });
  cfg.io.out_dir = io.string("out_dir", cfg.io.out_dir);
  if (cfg.io.out_dir.empty()) {
    Node::fail("io.out_dir", "must not be empty");
  }
  cfg.io.grid_points = odd_grid(io, "grid_points", cfg.io.grid_points);
  cfg.io.write_grids = io.boolean("write_grids", cfg.io.write_grids);
  cfg.io.record_timing = io.boolean("record_timing", cfg.io.record_timing);
  return cfg;
}

RunConfig
load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError(fmt::format("cannot open config '{}'", path.string()));
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError(fmt::format("{}: invalid JSON: {}", path.string(), err.what()));
  }
  return parse_config(doc);
}

json
to_json(const RunConfig& config)
{
  json doc;
  if (config.model.flow || config.model.map || config.model.rate) {
    json m;
    m["name"] = config.model.name;
    if (config.model.flow) {
      m["flow"] = { { "variant",
                      config.model.flow->kind() == Flow::Kind::additive
                        ? "additive"
                        : "exponential" },
                    { "c", config.model.flow->rate() } };
    }
    if (config.model.map) {
      m["f"] = { { "kappa", config.model.map->kappa() } };
    }
    if (config.model.rate) {
      if (auto p = config.model.rate->as_power()) {
        m["rate"] = { { "variant", "power" }, { "lam", p->lam }, { "delta", p->delta } };
      } else if (auto q = config.model.rate->as_shifted_quadratic()) {
        m["rate"] = { { "variant", "shifted_quadratic" }, { "a", q->a }, { "b", q->b } };
      }
    }
    doc["model"] = m;
  }
  doc["simulation"] = { { "z0", config.simulation.z0 },
                        { "n", config.simulation.n },
                        { "seed", config.simulation.seed } };
  json est = { { "A_max", config.estimation.a_max },
               { "sigma", config.estimation.penalty.sigma },
               { "sigma_prime", config.estimation.penalty.sigma_prime } };
  std::optional<Interval> iv = config.estimation.interval;
  if (!iv) {
    try {
      iv = config.interval();
    } catch (const ConfigError&) {
    }
  }
  if (iv) {
    est["I"] = { iv->lo, iv->hi };
  }
  doc["estimation"] = est;
  doc["experiment"] = { { "n_values", config.experiment.n_values },
                        { "replicates", config.experiment.replicates },
                        { "base_seed", config.experiment.base_seed },
                        { "threads", config.experiment.threads } };
  doc["io"] = { { "out_dir", config.io.out_dir },
                { "grid_points", config.io.grid_points },
                { "write_grids", config.io.write_grids },
                { "record_timing", config.io.record_timing } };
  return doc;
}

} // namespace pdmp::cli
