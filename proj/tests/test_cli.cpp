#include "cli/commands.hpp"
#include "cli/run_config.hpp"

#include "pdmp/chain_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pdmp;

namespace {

struct Result
{
  int code;
  std::string out;
  std::string err;
};

Result
run(std::vector<std::string> args)
{
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return { code, out.str(), err.str() };
}

fs::path
scratch(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / ("pdmp_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string
slurp(const fs::path& p)
{
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path
write_json(const fs::path& dir, const json& doc)
{
  const fs::path p = dir / "config.json";
  std::ofstream(p) << doc.dump(2);
  return p;
}

} // namespace

TEST(Cli, SimulateWritesReplayableChain)
{
  const fs::path dir = scratch("simulate");
  auto a = run({ "simulate", "--preset", "tcp-k0.5-const", "--n", "100", "--seed", "7", "--out",
                 (dir / "a").string() });
  ASSERT_EQ(a.code, 0) << a.err;
  const JumpChain chain = load_chain(dir / "a" / "chain.txt");
  EXPECT_EQ(chain.z.size(), 101u);
  EXPECT_EQ(chain.seed, 7u);
  ASSERT_TRUE(chain.times.has_value());
  EXPECT_EQ(chain.z, simulate_chain(parse_model_descriptor(chain.model), 1.0, 100, 7).z);

  auto b = run({ "simulate", "--preset", "tcp-k0.5-const", "--n", "100", "--seed", "7", "--out",
                 (dir / "b").string() });
  EXPECT_EQ(slurp(dir / "a" / "chain.txt"), slurp(dir / "b" / "chain.txt"));
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("n=100 ", 0), 0u);
  EXPECT_TRUE(fs::exists(dir / "a" / "effective_config.json"));
}

TEST(Cli, InvalidKappaNamesTheField)
{
  const fs::path dir = scratch("kappa");
  const json doc = { { "model",
                       { { "flow", { { "variant", "additive" }, { "c", 1 } } },
                         { "f", { { "kappa", 1.5 } } },
                         { "rate", { { "variant", "power" }, { "lam", 1 }, { "delta", 0 } } } } } };
  auto r = run({ "simulate", "--config", write_json(dir, doc).string(), "--out", dir.string() });
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("model.f.kappa"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, BacterialSummaryHasFiniteTime)
{
  const fs::path dir = scratch("bact");
  auto r = run({ "simulate", "--preset", "bacterial-c1-square", "--n", "10000", "--out",
                 dir.string() });
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pos = r.out.find("T_n=");
  ASSERT_NE(pos, std::string::npos);
  const double tn = std::stod(r.out.substr(pos + 4));
  EXPECT_GT(tn, 0.0);
  EXPECT_TRUE(std::isfinite(tn));
}

TEST(Cli, EstimateTooShortChain)
{
  const fs::path dir = scratch("short");
  ASSERT_EQ(run({ "simulate", "--preset", "tcp-k0.5-const", "--n", "8", "--out", dir.string() }).code, 0);
  auto r = run({ "estimate", "--chain", (dir / "chain.txt").string(), "--out", dir.string() });
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("n too small for threshold"), std::string::npos) << r.err;
}

TEST(Cli, EstimateIsPureAndCarriesTruth)
{
  const fs::path dir = scratch("estimate");
  ASSERT_EQ(run({ "simulate", "--preset", "bacterial-c1-linear", "--n", "2000", "--out",
                  dir.string() }).code, 0);
  const std::string chain = (dir / "chain.txt").string();
  auto a = run({ "estimate", "--chain", chain, "--out", (dir / "e1").string() });
  auto b = run({ "estimate", "--chain", chain, "--out", (dir / "e2").string() });
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  const std::string grid = slurp(dir / "e1" / "grid.tsv");
  EXPECT_EQ(grid.substr(0, grid.find('\n')), "y\tlambda_hat\tlambda_true\tnu_hat_of_f\td_hat");
  EXPECT_EQ(grid, slurp(dir / "e2" / "grid.tsv"));
  EXPECT_EQ(slurp(dir / "e1" / "fit.txt"), slurp(dir / "e2" / "fit.txt"));
  EXPECT_EQ(a.out, b.out);
  // The chain header selects the bacterial preset and its interval.
  const json eff = json::parse(slurp(dir / "e1" / "effective_config.json"));
  EXPECT_EQ(eff["estimation"]["I"][0].get<double>(), 0.5);
}

TEST(Cli, EstimateWithoutRateHasNoTruthColumn)
{
  const fs::path dir = scratch("notruth");
  ASSERT_EQ(run({ "simulate", "--preset", "tcp-k0.5-const", "--n", "500", "--out",
                  dir.string() }).code, 0);
  const json doc = { { "model",
                       { { "flow", { { "variant", "additive" }, { "c", 1 } } },
                         { "f", { { "kappa", 0.5 } } } } },
                     { "estimation", { { "I", { 0.2, 4 } } } } };
  auto r = run({ "estimate", "--config", write_json(dir, doc).string(), "--chain",
                 (dir / "chain.txt").string(), "--out", (dir / "e").string() });
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string grid = slurp(dir / "e" / "grid.tsv");
  EXPECT_EQ(grid.substr(0, grid.find('\n')), "y\tlambda_hat\tnu_hat_of_f\td_hat");
}

TEST(Cli, BenchSmokeAndDeterminism)
{
  const fs::path dir = scratch("bench");
  const json doc = { { "model", { { "preset", "tcp-k0.5-const" } } },
                     { "experiment", { { "n_values", { 100 } }, { "replicates", 2 } } } };
  const std::string cfg = write_json(dir, doc).string();
  auto a = run({ "bench", "--config", cfg, "--out", (dir / "a").string() });
  auto b = run({ "bench", "--config", cfg, "--out", (dir / "b").string(), "--threads", "2" });
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  const std::string csv = slurp(dir / "a" / "tcp-k0.5-const.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_EQ(csv, slurp(dir / "b" / "tcp-k0.5-const.csv"));

  auto g = run({ "bench", "--config", cfg, "--out", (dir / "g").string(), "--write-grids" });
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_TRUE(fs::exists(dir / "g" / "grids" / "tcp-k0.5-const_n100_r1.tsv"));
}

TEST(Cli, DiagnoseWarnsOnTailViolation)
{
  const fs::path dir = scratch("diagnose");
  const json doc = { { "model", { { "preset", "bacterial-c1-sqrt" } } },
                     { "experiment", { { "n_values", { 1000, 2000 } }, { "replicates", 3 } } } };
  auto r = run({ "diagnose", "--config", write_json(dir, doc).string(), "--out", dir.string() });
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("warning:"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "diagnostics.txt"));
}

TEST(Cli, ExitCodes)
{
  const fs::path dir = scratch("codes");
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({ "simulate", "--config", (dir / "missing.json").string() }).code, 4);
  EXPECT_EQ(run({ "estimate", "--chain", (dir / "missing.txt").string(), "--preset",
                  "tcp-k0.5-const", "--out", dir.string() }).code, 4);
  EXPECT_EQ(run({ "simulate", "--preset", "tcp-k0.5-const", "--grid-points", "512", "--out",
                  dir.string() }).code, 2);
  EXPECT_EQ(run({ "simulate", "--preset", "unknown", "--out", dir.string() }).code, 2);
  EXPECT_EQ(run({ "simulate", "--out", dir.string() }).code, 2); // no model
  std::ofstream(dir / "broken.json") << "{ not json";
  EXPECT_EQ(run({ "simulate", "--config", (dir / "broken.json").string() }).code, 2);
}

TEST(Config, RoundTripIsIdempotent)
{
  const json doc = { { "model",
                       { { "name", "q" },
                         { "flow", { { "variant", "additive" }, { "c", 1 } } },
                         { "f", { { "kappa", 0.2 } } },
                         { "rate", { { "variant", "shifted_quadratic" }, { "a", 1 }, { "b", 0.5 } } } } },
                     { "experiment", { { "replicates", 7 } } } };
  const json once = cli::to_json(cli::parse_config(doc));
  const json twice = cli::to_json(cli::parse_config(once));
  EXPECT_EQ(once, twice);
  EXPECT_EQ(once["experiment"]["replicates"], 7);
  EXPECT_EQ(once["io"]["grid_points"], 513);
  EXPECT_EQ(once["estimation"]["sigma"], 2.0);
  EXPECT_EQ(once["estimation"]["I"][1], 2.8); // preset interval materialized
  EXPECT_EQ(cli::to_json(cli::parse_config(json::object())),
            cli::to_json(cli::parse_config(cli::to_json(cli::parse_config(json::object())))));
}

TEST(Config, RejectsBadInput)
{
  auto message = [](const json& doc) {
    try {
      cli::parse_config(doc);
    } catch (const cli::ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_EQ(message({ { "simulation", { { "nn", 3 } } } }).rfind("simulation.nn", 0), 0u);
  EXPECT_EQ(message({ { "io", { { "grid_points", 514 } } } }).rfind("io.grid_points", 0), 0u);
  EXPECT_EQ(message({ { "estimation", { { "I", { 2, 1 } } } } }).rfind("estimation.I", 0), 0u);
  EXPECT_EQ(message({ { "experiment", { { "n_values", { 100, 10 } } } } })
              .rfind("experiment.n_values[1]", 0), 0u);
  EXPECT_EQ(message({ { "model", { { "preset", "x" } } } }).rfind("model.preset", 0), 0u);
  EXPECT_EQ(message({ { "simulation", { { "n", -4 } } } }).rfind("simulation.n", 0), 0u);
  EXPECT_EQ(message({ { "extra", 1 } }).rfind("extra", 0), 0u);
}
