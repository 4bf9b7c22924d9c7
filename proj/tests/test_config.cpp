#include <doctest.h>

#include <string>

#include "boolperc/config.hpp"
#include "boolperc/graph.hpp"
#include "boolperc/radius_law.hpp"

using namespace boolperc;

namespace {

const char* kGood = R"({
  "graph": {"family": "z_window", "dim": 1, "half_width": 30, "halo": 5},
  "law": {"kind": "geometric", "a": 0.5, "cap": 5},
  "model": {"p": 0.1, "t": 0.25},
  "experiment": {"trials": 200, "seed": 7, "grid": [0, 1, 2], "fit_window": [1, 2]}
})";

void expect_error(const std::string& text, const std::string& needle) {
  try {
    (void)parse_config(text);
    FAIL("expected a config error containing \"" << needle << "\"");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("a full config parses into typed sections") {
  Config cfg = parse_config(kGood);
  CHECK(cfg.graph.family == "z_window");
  CHECK(cfg.graph.dim == 1);
  CHECK(cfg.graph.half_width == 30);
  CHECK(cfg.graph.halo == 5);
  CHECK(cfg.law.kind == "geometric");
  CHECK(cfg.law.a == 0.5);
  CHECK(cfg.law.cap == 5);
  CHECK(cfg.model.p == 0.1);
  CHECK(cfg.model.has_t);
  CHECK(cfg.model.t == 0.25);
  CHECK(cfg.experiment.trials == 200);
  CHECK(cfg.experiment.has_seed);
  CHECK(cfg.experiment.seed == 7);
  CHECK(cfg.experiment.grid == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(cfg.experiment.has_fit_window);
  CHECK(cfg.experiment.fit_lo == 1);
  CHECK(cfg.experiment.fit_hi == 2);

  GraphView g = build_graph_from_config(cfg.graph);
  CHECK(g.n == 71);
  RadiusLaw law = build_law_from_config(cfg.law);
  CHECK(law.cap() == 5);
  CHECK(law.kind() == RadiusLaw::Kind::Geometric);
}

TEST_CASE("unknown and missing keys are named precisely") {
  expect_error(R"({"graph": {"family": "z_window", "half_width": 5, "bogus": 1},
                   "law": {"kind": "deterministic", "value": 2},
                   "model": {"p": 0.1}})",
               "unknown key graph.bogus");
  expect_error(R"({"graph": {"family": "z_window", "half_width": 5},
                   "law": {"kind": "deterministic", "value": 2},
                   "model": {"p": 0.1}, "extra": {}})",
               "unknown key extra");
  expect_error(R"({"law": {"kind": "deterministic", "value": 2}, "model": {"p": 0.1}})",
               "missing section graph");
  expect_error(R"({"graph": {"family": "z_window", "half_width": 5},
                   "law": {"kind": "deterministic", "value": 2}})",
               "missing section model");
  expect_error(R"({"graph": {"family": "z_window"},
                   "law": {"kind": "deterministic", "value": 2},
                   "model": {"p": 0.1}})",
               "missing key graph.half_width");
  expect_error(R"({"graph": {"family": "tree", "halo": 2},
                   "law": {"kind": "deterministic", "value": 2},
                   "model": {"p": 0.1}})",
               "missing key graph.depth");
  expect_error(R"({"graph": {"family": "z_window", "half_width": 5},
                   "law": {"kind": "geometric"},
                   "model": {"p": 0.1}})",
               "missing key law.a");
}

TEST_CASE("values are range-checked with their full path") {
  expect_error(R"({"graph": {"family": "z_window", "half_width": 5},
                   "law": {"kind": "geometric", "a": 1.5},
                   "model": {"p": 0.1}})",
               "law.a: must lie in (0, 1)");
  expect_error(R"({"graph": {"family": "z_window", "half_width": 5},
                   "law": {"kind": "table", "pmf": [0.5, 2.0]},
                   "model": {"p": 0.1}})",
               "law.pmf[1]: must lie in [0, 1]");
  expect_error(R"({"graph": {"family": "z_window", "half_width": 5},
                   "law": {"kind": "geometric", "a": 0.5, "cap": 64},
                   "model": {"p": 0.1}})",
               "law.cap: must lie in [1, 63]");
  expect_error(R"({"graph": {"family": "z_window", "half_width": 5},
                   "law": {"kind": "geometric", "a": 0.5},
                   "model": {"p": 1.5}})",
               "model.p: must lie in [0, 1]");
  expect_error(R"({"graph": {"family": "z_window", "half_width": 5},
                   "law": {"kind": "geometric", "a": 0.5},
                   "model": {"p": 0.1},
                   "experiment": {"fit_window": [5, 2]}})",
               "fit_window: lo must not exceed hi");
  expect_error(R"({"graph": {"family": "z_window", "half_width": 5},
                   "law": {"kind": "geometric", "a": 0.5},
                   "model": {"p": 0.1},
                   "experiment": {"trials": 0}})",
               "experiment.trials");
  expect_error(R"({"graph": {"family": "wheel"},
                   "law": {"kind": "geometric", "a": 0.5},
                   "model": {"p": 0.1}})",
               "graph.family: must be one of z_window, tree, edge_list");
  expect_error(R"({"graph": {"family": "z_window", "half_width": 5},
                   "law": {"kind": "cauchy"},
                   "model": {"p": 0.1}})",
               "law.kind: must be one of deterministic, geometric, zeta, table");
  expect_error("{not json", "config is not valid JSON");
  expect_error("[1, 2]", "config root must be an object");
}

TEST_CASE("serialization round-trips through the parser") {
  Config cfg = parse_config(kGood);
  std::string text = config_to_json(cfg);
  Config again = parse_config(text);
  CHECK(config_to_json(again) == text);
  CHECK(again.graph.half_width == cfg.graph.half_width);
  CHECK(again.law.a == cfg.law.a);
  CHECK(again.model.t == cfg.model.t);
  CHECK(again.experiment.seed == cfg.experiment.seed);
  CHECK(again.experiment.fit_lo == cfg.experiment.fit_lo);
}

TEST_CASE("tree and table configs build the matching objects") {
  Config cfg = parse_config(R"({
    "graph": {"family": "tree", "branching": 2, "depth": 3, "halo": 2},
    "law": {"kind": "table", "pmf": [0.25, 0.75], "cap": 2},
    "model": {"p": 0.05}
  })");
  GraphView g = build_graph_from_config(cfg.graph);
  CHECK(g.directed);
  RadiusLaw law = build_law_from_config(cfg.law);
  CHECK(law.kind() == RadiusLaw::Kind::Table);
  CHECK(law.cap() == 2);
  CHECK(law.pmf(1) == doctest::Approx(0.25));
  CHECK(law.pmf(2) == doctest::Approx(0.75));
}

TEST_CASE("missing config file is reported through ConfigError") {
  CHECK_THROWS_AS(load_config("/nonexistent/boolperc.json"), ConfigError);
}
