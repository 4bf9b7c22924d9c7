#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "boolperc/graph.hpp"
#include "boolperc/ppp.hpp"
#include "boolperc/radius_law.hpp"

// JSON run configuration. Parsing is strict: unknown keys, wrong types, and
// out-of-range values are rejected with the offending key path in the message
// (for example "law.pmf[2]"), so a typo never silently falls back to a
// default.

namespace boolperc {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GraphConfig {
  std::string family;  ///< z_window | tree | edge_list
  std::uint32_t dim = 1;
  std::uint32_t half_width = 0;
  std::uint32_t halo = 0;
  std::uint32_t branching = 2;
  std::uint32_t depth = 1;
  std::string path;
  bool directed = false;
};

struct LawConfig {
  std::string kind;  ///< deterministic | geometric | zeta | table
  std::uint32_t value = 1;
  double a = 0.5;
  double s = 3.0;
  std::vector<double> pmf;
  std::uint32_t cap = 0;  ///< 0 means uncapped
};

struct ModelConfig {
  double p = 0.0;
  double t = 0.0;
  bool has_t = false;
};

struct ExperimentConfig {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  bool has_seed = false;
  unsigned threads = 1;
  std::vector<std::uint32_t> grid;
  std::vector<double> p_grid;
  std::uint32_t radius_cap = 0;
  std::uint32_t fit_lo = 0;
  std::uint32_t fit_hi = 0;
  bool has_fit_window = false;
  std::uint32_t resamples = 1000;
  ExploreBudget explore_budget;
  GwBudget gw_budget;
};

struct Config {
  GraphConfig graph;
  LawConfig law;
  ModelConfig model;
  ExperimentConfig experiment;
};

/// Parses and validates a JSON document. Sections graph, law, and model are
/// required; experiment is optional.
Config parse_config(const std::string& json_text);

/// Reads the file and parses it.
Config load_config(const std::string& path);

/// Builds the configured graph (window families embed their halo).
GraphView build_graph_from_config(const GraphConfig& cfg);

/// Builds the configured radius law, applying the cap when one is set.
RadiusLaw build_law_from_config(const LawConfig& cfg);

/// Canonical JSON echo of a configuration, suitable for a run manifest.
std::string config_to_json(const Config& cfg);

}  // namespace boolperc
