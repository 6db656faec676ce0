#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sjfa/aging.hpp"
#include "sjfa/arrival.hpp"
#include "sjfa/examples.hpp"
#include "sjfa/grid.hpp"
#include "sjfa/measures.hpp"
#include "sjfa/service.hpp"
#include "sjfa/simulator.hpp"

namespace sjfa {

enum class Mode { fluid, simulate, compare };

struct ArrivalSpec {
  enum class Kind { example, table, none } kind = Kind::none;
  std::string example;
  ExampleParams params;
  std::vector<double> table_x;
  std::vector<double> table_mass;
};

struct AgingSpec {
  bool given = false;
  std::string kind = "linear";
  double c = 1.0;
  double lambda = 0.1;
};

/// Parsed run configuration. The file is JSON; every error names the
/// offending key as a JSON pointer (or the parse position).
struct RunConfig {
  Mode mode = Mode::fluid;
  ArrivalSpec arrival;
  AgingSpec aging;
  std::vector<double> service_starts{0.0};
  std::vector<double> service_rates{1.0};
  double horizon = 1.0;
  Grid tgrid;
  Grid xgrid;
  std::vector<double> levels;
  double fluid_step = 0.0;
  int n_scale = 1;
  std::uint64_t seed = 1;
  std::string trace;  ///< CSV path of explicit jobs, relative to the config file
  std::vector<int> n_list;
  int replications = 1;
  std::string fluid_ref;  ///< "solve" or a fluid CSV path
  unsigned threads = 1;

  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);
  /// Fully resolved form; loading it back yields an identical run.
  nlohmann::json to_json() const;
};

/// Model objects built from a configuration.
struct Model {
  std::optional<InstantaneousArrival> arrival;
  AgingRule rule;
  ServiceProfile service;
  MeasurePath alpha;
  bool closed_form = false;
};

Model build_model(const RunConfig& cfg);
SimConfig sim_config(const RunConfig& cfg, const Model& model);

std::string mode_name(Mode m);

}  // namespace sjfa
