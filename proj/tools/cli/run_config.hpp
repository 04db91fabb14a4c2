#pragma once

#include "pdmp/bench.hpp"
#include "pdmp/error.hpp"
#include "pdmp/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pdmp::cli {

//! Invalid configuration; the message starts with the offending key path.
class ConfigError : public Error
{
public:
  using Error::Error;
};

struct ModelSection
{
  std::string name;
  std::optional<Flow> flow;
  std::optional<TransitionMap> map;
  std::optional<JumpRate> rate; // absent: truth unknown (estimate only)
};

struct SimulationSection
{
  double z0 = 1.0;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
};

struct EstimationSection
{
  double a_max = 6.0;
  std::optional<Interval> interval;
  PenaltySpec penalty;
};

struct ExperimentSection
{
  std::vector<std::size_t> n_values{ 100, 1000, 10000, 100000 };
  std::size_t replicates = 50;
  std::uint64_t base_seed = 1;
  std::size_t threads = 1;
};

struct IoSection
{
  std::string out_dir = "out";
  std::size_t grid_points = 513;
  bool write_grids = false;
  bool record_timing = false; // true: mean_time_s is measured, else 0
};

struct RunConfig
{
  ModelSection model;
  SimulationSection simulation;
  EstimationSection estimation;
  ExperimentSection experiment;
  IoSection io;

  bool has_model() const { return model.flow && model.map; }
  //! Full model; ConfigError naming the missing key otherwise.
  ModelSpec model_spec() const;
  //! estimation.I, else the matching preset's interval, else ConfigError.
  Interval interval() const;
  ExperimentConfig experiment_config() const;
};

//! Parses and validates a config document. Unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

//! Effective config with every default materialized; parse_config of the
//! result yields the same RunConfig.
nlohmann::json to_json(const RunConfig& config);

} // namespace pdmp::cli
