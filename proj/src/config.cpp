#include "boolperc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace boolperc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void check_keys(const json& obj, const std::string& prefix,
                const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("unknown key " + (prefix.empty() ? item.key()
                                                         : prefix + "." + item.key()));
    }
  }
}

const json& require_object(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw ConfigError("missing section " + key);
  const json& section = doc.at(key);
  if (!section.is_object()) fail(key, "expected an object");
  return section;
}

std::string require_string(const json& obj, const std::string& path) {
  if (!obj.is_string()) fail(path, "expected a string");
  return obj.get<std::string>();
}

std::uint64_t require_uint(const json& obj, const std::string& path,
                           std::uint64_t lo = 0,
                           std::uint64_t hi = std::uint64_t(-1)) {
  if (!obj.is_number_unsigned()) fail(path, "expected a nonnegative integer");
  std::uint64_t v = obj.get<std::uint64_t>();
  if (v < lo || v > hi) {
    std::ostringstream msg;
    msg << "must lie in [" << lo << ", " << hi << "]";
    fail(path, msg.str());
  }
  return v;
}

double require_number(const json& obj, const std::string& path) {
  if (!obj.is_number()) fail(path, "expected a number");
  return obj.get<double>();
}

double require_prob(const json& obj, const std::string& path) {
  double v = require_number(obj, path);
  if (!(v >= 0.0 && v <= 1.0)) fail(path, "must lie in [0, 1]");
  return v;
}

bool require_bool(const json& obj, const std::string& path) {
  if (!obj.is_boolean()) fail(path, "expected a boolean");
  return obj.get<bool>();
}

GraphConfig parse_graph(const json& section) {
  GraphConfig cfg;
  if (!section.contains("family")) throw ConfigError("missing key graph.family");
  cfg.family = require_string(section.at("family"), "graph.family");
  if (cfg.family == "z_window") {
    check_keys(section, "graph", {"family", "dim", "half_width", "halo"});
    if (!section.contains("half_width")) throw ConfigError("missing key graph.half_width");
    cfg.dim = section.contains("dim")
                  ? static_cast<std::uint32_t>(require_uint(section.at("dim"), "graph.dim", 1, 3))
                  : 1;
    cfg.half_width = static_cast<std::uint32_t>(
        require_uint(section.at("half_width"), "graph.half_width", 1, 1u << 20));
    if (section.contains("halo")) {
      cfg.halo = static_cast<std::uint32_t>(
          require_uint(section.at("halo"), "graph.halo", 0, 1u << 20));
    }
  } else if (cfg.family == "tree") {
    check_keys(section, "graph", {"family", "branching", "depth", "halo"});
    if (section.contains("branching")) {
      cfg.branching = static_cast<std::uint32_t>(
          require_uint(section.at("branching"), "graph.branching", 1, 64));
    }
    if (!section.contains("depth")) throw ConfigError("missing key graph.depth");
    cfg.depth = static_cast<std::uint32_t>(
        require_uint(section.at("depth"), "graph.depth", 0, 30));
    if (section.contains("halo")) {
      cfg.halo = static_cast<std::uint32_t>(
          require_uint(section.at("halo"), "graph.halo", 0, 1u << 20));
    }
  } else if (cfg.family == "edge_list") {
    check_keys(section, "graph", {"family", "path", "directed"});
    if (!section.contains("path")) throw ConfigError("missing key graph.path");
    cfg.path = require_string(section.at("path"), "graph.path");
    if (section.contains("directed")) {
      cfg.directed = require_bool(section.at("directed"), "graph.directed");
    }
  } else {
    fail("graph.family", "must be one of z_window, tree, edge_list");
  }
  return cfg;
}

LawConfig parse_law(const json& section) {
  LawConfig cfg;
  if (!section.contains("kind")) throw ConfigError("missing key law.kind");
  cfg.kind = require_string(section.at("kind"), "law.kind");
  if (cfg.kind == "deterministic") {
    check_keys(section, "law", {"kind", "value", "cap"});
    if (!section.contains("value")) throw ConfigError("missing key law.value");
    cfg.value = static_cast<std::uint32_t>(
        require_uint(section.at("value"), "law.value", 1, 1u << 20));
  } else if (cfg.kind == "geometric") {
    check_keys(section, "law", {"kind", "a", "cap"});
    if (!section.contains("a")) throw ConfigError("missing key law.a");
    cfg.a = require_number(section.at("a"), "law.a");
    if (!(cfg.a > 0.0 && cfg.a < 1.0)) fail("law.a", "must lie in (0, 1)");
  } else if (cfg.kind == "zeta") {
    check_keys(section, "law", {"kind", "s", "cap"});
    if (!section.contains("s")) throw ConfigError("missing key law.s");
    cfg.s = require_number(section.at("s"), "law.s");
    if (!(cfg.s > 1.0)) fail("law.s", "must be greater than 1");
  } else if (cfg.kind == "table") {
    check_keys(section, "law", {"kind", "pmf", "cap"});
    if (!section.contains("pmf")) throw ConfigError("missing key law.pmf");
    const json& pmf = section.at("pmf");
    if (!pmf.is_array() || pmf.empty()) fail("law.pmf", "expected a nonempty array");
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      std::ostringstream path;
      path << "law.pmf[" << i << "]";
      double v = require_number(pmf.at(i), path.str());
      if (!(v >= 0.0 && v <= 1.0)) fail(path.str(), "must lie in [0, 1]");
      cfg.pmf.push_back(v);
    }
  } else {
    fail("law.kind", "must be one of deterministic, geometric, zeta, table");
  }
  if (section.contains("cap")) {
    cfg.cap = static_cast<std::uint32_t>(require_uint(section.at("cap"), "law.cap", 1, 63));
  }
  return cfg;
}

ModelConfig parse_model(const json& section) {
  ModelConfig cfg;
  check_keys(section, "model", {"p", "t"});
  if (!section.contains("p")) throw ConfigError("missing key model.p");
  cfg.p = require_prob(section.at("p"), "model.p");
  if (section.contains("t")) {
    cfg.t = require_number(section.at("t"), "model.t");
    if (!(cfg.t > 0.0)) fail("model.t", "must be positive");
    cfg.has_t = true;
  }
  return cfg;
}

ExperimentConfig parse_experiment(const json& section) {
  ExperimentConfig cfg;
  check_keys(section, "experiment",
             {"trials", "seed", "threads", "grid", "p_grid", "radius_cap", "fit_window",
              "resamples", "max_vertices", "max_layers", "max_generations",
              "max_population"});
  if (section.contains("trials")) {
    cfg.trials = require_uint(section.at("trials"), "experiment.trials", 1);
  }
  if (section.contains("seed")) {
    cfg.seed = require_uint(section.at("seed"), "experiment.seed");
    cfg.has_seed = true;
  }
  if (section.contains("threads")) {
    cfg.threads = static_cast<unsigned>(
        require_uint(section.at("threads"), "experiment.threads", 1, 4096));
  }
  if (section.contains("grid")) {
    const json& grid = section.at("grid");
    if (!grid.is_array() || grid.empty()) {
      fail("experiment.grid", "expected a nonempty array");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::ostringstream path;
      path << "experiment.grid[" << i << "]";
      cfg.grid.push_back(
          static_cast<std::uint32_t>(require_uint(grid.at(i), path.str(), 0, 1u << 30)));
    }
  }
  if (section.contains("p_grid")) {
    const json& grid = section.at("p_grid");
    if (!grid.is_array() || grid.empty()) {
      fail("experiment.p_grid", "expected a nonempty array");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::ostringstream path;
      path << "experiment.p_grid[" << i << "]";
      cfg.p_grid.push_back(require_prob(grid.at(i), path.str()));
    }
  }
  if (section.contains("radius_cap")) {
    cfg.radius_cap = static_cast<std::uint32_t>(
        require_uint(section.at("radius_cap"), "experiment.radius_cap", 0, 63));
  }
  if (section.contains("fit_window")) {
    const json& win = section.at("fit_window");
    if (!win.is_array() || win.size() != 2) {
      fail("experiment.fit_window", "expected an array [lo, hi]");
    }
    cfg.fit_lo = static_cast<std::uint32_t>(
        require_uint(win.at(0), "experiment.fit_window[0]", 0, 1u << 30));
    cfg.fit_hi = static_cast<std::uint32_t>(
        require_uint(win.at(1), "experiment.fit_window[1]", 0, 1u << 30));
    if (cfg.fit_lo > cfg.fit_hi) fail("experiment.fit_window", "lo must not exceed hi");
    cfg.has_fit_window = true;
  }
  if (section.contains("resamples")) {
    cfg.resamples = static_cast<std::uint32_t>(
        require_uint(section.at("resamples"), "experiment.resamples", 1, 1000000));
  }
  if (section.contains("max_vertices")) {
    cfg.explore_budget.max_vertices = require_uint(
        section.at("max_vertices"), "experiment.max_vertices", 1);
  }
  if (section.contains("max_layers")) {
    cfg.explore_budget.max_layers = static_cast<std::uint32_t>(
        require_uint(section.at("max_layers"), "experiment.max_layers", 1, 1u << 30));
  }
  if (section.contains("max_generations")) {
    cfg.gw_budget.max_generations = static_cast<std::uint32_t>(
        require_uint(section.at("max_generations"), "experiment.max_generations", 1,
                     1u << 30));
  }
  if (section.contains("max_population")) {
    cfg.gw_budget.max_population = require_uint(
        section.at("max_population"), "experiment.max_population", 1);
  }
  return cfg;
}

}  // namespace

Config parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  check_keys(doc, "", {"graph", "law", "model", "experiment"});

  Config cfg;
  cfg.graph = parse_graph(require_object(doc, "graph"));
  cfg.law = parse_law(require_object(doc, "law"));
  cfg.model = parse_model(require_object(doc, "model"));
  if (doc.contains("experiment")) {
    cfg.experiment = parse_experiment(require_object(doc, "experiment"));
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

GraphView build_graph_from_config(const GraphConfig& cfg) {
  if (cfg.family == "z_window") return z_window(cfg.dim, cfg.half_width, cfg.halo);
  if (cfg.family == "tree") return oriented_tree_ball(cfg.branching, cfg.depth, cfg.halo);
  if (cfg.family == "edge_list") return edge_list(cfg.path);
  throw ConfigError("graph.family: must be one of z_window, tree, edge_list");
}

RadiusLaw build_law_from_config(const LawConfig& cfg) {
  RadiusLaw law = [&] {
    if (cfg.kind == "deterministic") return RadiusLaw::deterministic(cfg.value);
    if (cfg.kind == "geometric") return RadiusLaw::geometric(cfg.a);
    if (cfg.kind == "zeta") return RadiusLaw::zeta(cfg.s);
    if (cfg.kind == "table") return RadiusLaw::table(cfg.pmf);
    throw ConfigError("law.kind: must be one of deterministic, geometric, zeta, table");
  }();
  if (cfg.cap > 0) law = law.capped(cfg.cap);
  return law;
}

std::string config_to_json(const Config& cfg) {
  json doc;
  json& graph = doc["graph"];
  graph["family"] = cfg.graph.family;
  if (cfg.graph.family == "z_window") {
    graph["dim"] = cfg.graph.dim;
    graph["half_width"] = cfg.graph.half_width;
    graph["halo"] = cfg.graph.halo;
  } else if (cfg.graph.family == "tree") {
    graph["branching"] = cfg.graph.branching;
    graph["depth"] = cfg.graph.depth;
    graph["halo"] = cfg.graph.halo;
  } else {
    graph["path"] = cfg.graph.path;
    graph["directed"] = cfg.graph.directed;
  }
  json& law = doc["law"];
  law["kind"] = cfg.law.kind;
  if (cfg.law.kind == "deterministic") law["value"] = cfg.law.value;
  if (cfg.law.kind == "geometric") law["a"] = cfg.law.a;
  if (cfg.law.kind == "zeta") law["s"] = cfg.law.s;
  if (cfg.law.kind == "table") law["pmf"] = cfg.law.pmf;
  if (cfg.law.cap > 0) law["cap"] = cfg.law.cap;
  json& model = doc["model"];
  model["p"] = cfg.model.p;
  if (cfg.model.has_t) model["t"] = cfg.model.t;
  json& exp = doc["experiment"];
  exp["trials"] = cfg.experiment.trials;
  if (cfg.experiment.has_seed) exp["seed"] = cfg.experiment.seed;
  exp["threads"] = cfg.experiment.threads;
  if (!cfg.experiment.grid.empty()) exp["grid"] = cfg.experiment.grid;
  if (!cfg.experiment.p_grid.empty()) exp["p_grid"] = cfg.experiment.p_grid;
  if (cfg.experiment.radius_cap > 0) exp["radius_cap"] = cfg.experiment.radius_cap;
  if (cfg.experiment.has_fit_window) {
    exp["fit_window"] = {cfg.experiment.fit_lo, cfg.experiment.fit_hi};
  }
  exp["resamples"] = cfg.experiment.resamples;
  exp["max_vertices"] = cfg.experiment.explore_budget.max_vertices;
  exp["max_layers"] = cfg.experiment.explore_budget.max_layers;
  exp["max_generations"] = cfg.experiment.gw_budget.max_generations;
  exp["max_population"] = cfg.experiment.gw_budget.max_population;
  return doc.dump(2);
}

}  // namespace boolperc
