// Command-line front end: configure a graph and radius law from JSON, then
// run one of the bound evaluators, samplers, exploration tools, or
// verification batches. Every run writes one manifest.json plus at least one
// data file into --out.
//
// Exit codes: 0 success, 2 configuration error (the message names the
// offending key or flag), 3 verification failure, 4 a requested bound series
// could not be certified from the available horizon.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "boolperc/bounds.hpp"
#include "boolperc/config.hpp"
#include "boolperc/experiments.hpp"
#include "boolperc/gw.hpp"
#include "boolperc/ppp.hpp"
#include "boolperc/sampler.hpp"

namespace {

using boolperc::Config;
using nlohmann::json;

constexpr const char* kConfigKeyHelp = R"(Config file keys (JSON):
  graph.family           z_window | tree | edge_list
  graph.dim              z_window: lattice dimension (1..3)
  graph.half_width       z_window: interior half-width
  graph.halo             z_window/tree: extra rim kept outside the interior
  graph.branching        tree: children per vertex
  graph.depth            tree: interior radius
  graph.path             edge_list: file to load
  graph.directed         edge_list: orientation flag
  law.kind               deterministic | geometric | zeta | table
  law.value              deterministic: the constant radius
  law.a                  geometric: tail ratio in (0, 1)
  law.s                  zeta: tail exponent (> 1)
  law.pmf                table: pmf[i] = P(R = i + 1)
  law.cap                optional cap; conditions the law on R <= cap
  model.p                activation probability
  model.t                optional exponential-moment rate
  experiment.trials      replicate count
  experiment.seed        master seed (entropy when absent)
  experiment.threads     worker threads
  experiment.grid        size grid for tail / gw
  experiment.p_grid      activation grid for sweep
  experiment.radius_cap  simulation-only radius cap
  experiment.fit_window  [lo, hi] fit range for decay estimation
  experiment.resamples   bootstrap resamples
  experiment.max_vertices / max_layers        exploration budget
  experiment.max_generations / max_population branching budget
)";

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  unsigned threads = 0;
  std::uint32_t cap = 0;
  std::uint32_t half_width = 0;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "JSON config file")->required();
  sub->add_option("--out", args.out_dir, "output directory (default .)");
  sub->add_option("--seed", args.seed, "master seed override");
  sub->add_option("--trials", args.trials, "replicate count override");
  sub->add_option("--threads", args.threads, "worker thread override");
  sub->add_option("--cap", args.cap, "simulation radius cap override");
  sub->add_option("--window-half-width", args.half_width,
                  "z_window half-width override");
}

void apply_overrides(Config& cfg, const CLI::App* sub, const CommonArgs& args) {
  if (sub->count("--seed")) {
    cfg.experiment.seed = args.seed;
    cfg.experiment.has_seed = true;
  }
  if (sub->count("--trials")) cfg.experiment.trials = std::max<std::uint64_t>(1, args.trials);
  if (sub->count("--threads")) cfg.experiment.threads = std::max(1u, args.threads);
  if (sub->count("--cap")) cfg.experiment.radius_cap = args.cap;
  if (sub->count("--window-half-width")) {
    if (cfg.graph.family != "z_window") {
      throw boolperc::ConfigError(
          "--window-half-width only applies to the z_window graph family");
    }
    if (args.half_width == 0) {
      throw boolperc::ConfigError("--window-half-width must be positive");
    }
    cfg.graph.half_width = args.half_width;
  }
}

json series_json(const boolperc::ExtendedReal& x) {
  json j;
  j["state"] = boolperc::to_string(x.state);
  j["value"] = x.value;
  j["terms"] = x.terms;
  if (!x.note.empty()) j["note"] = x.note;
  return j;
}

struct Run {
  Config cfg;
  boolperc::GraphView graph;
  boolperc::RadiusLaw law;
  boolperc::RandomStream stream;
  std::string out_dir;
  std::string seed_source;
  std::chrono::steady_clock::time_point started;

  Run(Config c, std::string out)
      : cfg(std::move(c)),
        graph(boolperc::build_graph_from_config(cfg.graph)),
        law(boolperc::build_law_from_config(cfg.law)),
        stream(0),
        out_dir(std::move(out)),
        started(std::chrono::steady_clock::now()) {
    if (!cfg.experiment.has_seed) {
      std::random_device rd;
      cfg.experiment.seed =
          (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
      cfg.experiment.has_seed = true;
      seed_source = "entropy";
    } else {
      seed_source = "given";
    }
    stream = boolperc::RandomStream(cfg.experiment.seed);
    std::filesystem::create_directories(out_dir);
  }

  std::string path(const std::string& name) const { return out_dir + "/" + name; }

  json manifest(const std::string& command) const {
    json m;
    m["command"] = command;
    m["config"] = json::parse(boolperc::config_to_json(cfg));
    m["seed"] = cfg.experiment.seed;
    m["seed_source"] = seed_source;
    m["trials"] = cfg.experiment.trials;
    m["threads"] = cfg.experiment.threads;
    if (law.has_cap()) m["truncation_mass"] = law.truncation_mass();
    m["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return m;
  }

  void write_manifest(const json& m) const {
    std::ofstream out(path("manifest.json"), std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path("manifest.json"));
    out << m.dump(2) << '\n';
  }
};

int run_bounds(Run& run) {
  const auto& g = run.graph;
  std::uint32_t r_max = run.law.has_cap() ? run.law.cap()
                        : g.has_window()  ? g.halo
                                          : 32;
  boolperc::GrowthProfile profile = boolperc::growth_profile(g, r_max);

  json b;
  b["profile"] = {{"r_max", profile.r_max},
                  {"delta", profile.delta},
                  {"c", profile.c},
                  {"c_top", profile.c_top},
                  {"s", profile.s},
                  {"s_top", profile.s_top}};

  bool inconclusive = false;
  auto note = [&inconclusive](const boolperc::ExtendedReal& x) {
    if (x.state == boolperc::SeriesState::Inconclusive) inconclusive = true;
  };

  boolperc::TailBoundSum mphi = boolperc::mean_phi(profile, run.law);
  b["mean_phi"] = series_json(mphi.sum);
  b["mean_phi"]["exact_levels"] = mphi.exact_levels;
  b["mean_phi"]["used_degree_ceiling"] = mphi.used_degree_ceiling;
  note(mphi.sum);

  boolperc::ExtendedReal pc = boolperc::pc_lower_bound(profile, run.law);
  b["pc_lower"] = series_json(pc);
  note(pc);

  boolperc::SubcriticalCheck sub =
      boolperc::check_subcritical(profile, run.law, run.cfg.model.p);
  b["subcritical"] = {{"p", sub.p},
                      {"sum", series_json(sub.sum.sum)},
                      {"margin", sub.margin},
                      {"holds", sub.holds}};
  note(sub.sum.sum);

  boolperc::ExtendedReal xm = boolperc::xi_mean(profile, run.law, run.cfg.model.p);
  b["xi_mean"] = series_json(xm);
  note(xm);

  if (run.cfg.model.has_t) {
    boolperc::ExpoCheck expo =
        boolperc::check_expo(profile, run.law, run.cfg.model.p, run.cfg.model.t);
    b["expo"] = {{"p", expo.p},
                 {"t", expo.t},
                 {"sum", series_json(expo.sum.sum)},
                 {"holds", expo.holds}};
    note(expo.sum.sum);
    boolperc::ExtendedReal mgf =
        boolperc::xi_log_mgf_bound(profile, run.law, run.cfg.model.p, run.cfg.model.t);
    b["xi_log_mgf_bound"] = series_json(mgf);
    note(mgf);
  }

  {
    std::ofstream out(run.path("bounds.json"), std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + run.path("bounds.json"));
    out << b.dump(2) << '\n';
  }
  json m = run.manifest("bounds");
  m["inconclusive"] = inconclusive;
  run.write_manifest(m);
  if (inconclusive) {
    std::cerr << "a bound series could not be certified within the horizon\n";
    return 4;
  }
  return 0;
}

int run_sample(Run& run) {
  boolperc::SampleOptions opt;
  opt.radius_cap = run.cfg.experiment.radius_cap;
  auto rows = boolperc::sample_experiment(run.graph, run.law, run.cfg.model.p,
                                          run.cfg.experiment.trials, run.stream, opt,
                                          run.cfg.experiment.threads);
  boolperc::write_sample_csv(run.path("sample.csv"), rows);
  std::uint64_t escaped = 0;
  for (const auto& row : rows) escaped += row.escaped ? 1 : 0;
  json m = run.manifest("sample");
  m["escaped_count"] = escaped;
  run.write_manifest(m);
  return 0;
}

int run_explore(Run& run) {
  if (!run.law.has_cap()) {
    throw boolperc::ConfigError("law.cap: exploration requires a capped radius law");
  }
  boolperc::BallTable table(run.graph, run.law.cap());
  boolperc::GrowthProfile profile = boolperc::growth_profile(run.graph, run.law.cap());
  const std::uint64_t trials = run.cfg.experiment.trials;
  json traces = json::array();
  std::uint64_t escaped = 0, budget = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    boolperc::ExplorationTrace trace =
        boolperc::explore(table, run.law, run.cfg.model.p, run.graph.root,
                          run.stream.derive(i), run.cfg.experiment.explore_budget);
    json t;
    t["replicate"] = i;
    t["status"] = boolperc::to_string(trace.status);
    std::vector<std::uint64_t> layer_sizes;
    for (const auto& layer : trace.layers) layer_sizes.push_back(layer.size());
    t["layer_sizes"] = layer_sizes;
    std::vector<std::uint64_t> balls_per_layer(trace.layers.size() + 1, 0);
    for (const auto& ball : trace.balls) {
      if (ball.layer < balls_per_layer.size()) ++balls_per_layer[ball.layer];
    }
    t["balls_per_layer"] = balls_per_layer;
    t["discovered_vertices"] = trace.discovered_vertices;
    t["mark_draws"] = trace.mark_draws;
    t["mark_audit_ok"] = trace.mark_audit_ok;
    if (trials == 1) {
      json balls = json::array();
      for (const auto& ball : trace.balls) {
        json bj;
        bj["center"] = ball.center;
        bj["radius"] = ball.radius;
        bj["dead_end"] = ball.dead_end;
        if (ball.assigned_y != boolperc::kNoVertex) bj["assigned_y"] = ball.assigned_y;
        bj["omega2"] = ball.omega2;
        bj["layer"] = ball.layer;
        balls.push_back(std::move(bj));
      }
      t["balls"] = std::move(balls);
    }
    if (trace.status == boolperc::ExploreStatus::WindowEscaped) {
      ++escaped;
    } else {
      if (trace.status == boolperc::ExploreStatus::BudgetExceeded) ++budget;
      boolperc::GwCoupling gw =
          boolperc::coupled_gw(trace, table, profile, run.law, run.cfg.model.p,
                               run.stream.derive(i), run.cfg.experiment.gw_budget);
      t["gw"] = {{"Z", gw.Z},
                 {"dominated", gw.dominated},
                 {"slot_overflows", gw.slot_overflows},
                 {"budget_hit", gw.budget_hit},
                 {"extinct", gw.extinct}};
    }
    traces.push_back(std::move(t));
  }
  {
    std::ofstream out(run.path("trace.json"), std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + run.path("trace.json"));
    out << json{{"traces", std::move(traces)}}.dump(2) << '\n';
  }
  json m = run.manifest("explore");
  m["escaped_count"] = escaped;
  m["budget_count"] = budget;
  run.write_manifest(m);
  return 0;
}

int run_gw_cmd(Run& run) {
  if (!run.law.has_cap()) {
    throw boolperc::ConfigError(
        "law.cap: the branching simulation requires a capped radius law");
  }
  boolperc::GrowthProfile profile =
      boolperc::growth_profile(run.graph, run.law.cap());
  boolperc::XiLaw xi = boolperc::XiLaw::build(profile, run.law, run.cfg.model.p);
  std::vector<std::uint32_t> grid = run.cfg.experiment.grid;
  if (grid.empty()) {
    for (std::uint32_t n = 0; n <= 40; ++n) grid.push_back(n);
  }
  boolperc::TotalSizeTail tail = boolperc::total_size_tail(
      xi, grid, run.cfg.experiment.trials, run.stream, run.cfg.experiment.gw_budget,
      run.cfg.experiment.threads);
  boolperc::write_gw_csv(run.path("gw.csv"), tail);
  json m = run.manifest("gw");
  m["xi_mean"] = tail.xi_mean;
  m["budget_exceedances"] = tail.budget_exceedances;
  m["fit"] = {{"slope", tail.fit.slope},
              {"intercept", tail.fit.intercept},
              {"slope_se", tail.fit.slope_se},
              {"points", tail.fit.points},
              {"ok", tail.fit.ok}};
  run.write_manifest(m);
  return 0;
}

int run_tail(Run& run) {
  boolperc::SampleOptions opt;
  opt.radius_cap = run.cfg.experiment.radius_cap;
  std::vector<std::uint32_t> grid = run.cfg.experiment.grid;
  if (grid.empty()) {
    for (std::uint32_t n = 0; n <= 31; ++n) grid.push_back(n);
  }
  boolperc::TailCurve curve = boolperc::tail_experiment(
      run.graph, run.law, run.cfg.model.p, grid, run.cfg.experiment.trials, run.stream,
      opt, run.cfg.experiment.threads);
  boolperc::write_tail_csv(run.path("tail.csv"), curve);
  json m = run.manifest("tail");
  m["censored"] = curve.censored;
  m["unreliable"] = curve.unreliable;
  if (run.cfg.experiment.has_fit_window) {
    boolperc::DecayFit fit = boolperc::fit_decay(curve, run.cfg.experiment.fit_lo,
                                                 run.cfg.experiment.fit_hi);
    m["fit"] = {{"lambda", fit.lambda},       {"slope_se", fit.slope_se},
                {"r_squared", fit.r_squared}, {"points_used", fit.points_used},
                {"ok", fit.ok},               {"non_decaying", fit.non_decaying}};
    if (!fit.note.empty()) m["fit"]["note"] = fit.note;
    boolperc::BootstrapSlope boot = boolperc::bootstrap_lambda(
        curve, run.cfg.experiment.fit_lo, run.cfg.experiment.fit_hi,
        run.cfg.experiment.resamples, 0.01, run.stream);
    m["bootstrap"] = {{"lo", boot.lo},
                      {"hi", boot.hi},
                      {"resamples_used", boot.resamples_used},
                      {"alpha", 0.01}};
  }
  run.write_manifest(m);
  return 0;
}

int run_sweep(Run& run) {
  if (run.cfg.experiment.p_grid.empty()) {
    throw boolperc::ConfigError("missing key experiment.p_grid (required by sweep)");
  }
  boolperc::SampleOptions opt;
  opt.radius_cap = run.cfg.experiment.radius_cap;
  boolperc::SweepResult sweep = boolperc::sweep_p(
      run.graph, run.law, run.cfg.experiment.p_grid, run.cfg.experiment.trials,
      run.stream, opt, run.cfg.experiment.threads);
  boolperc::write_sweep_csv(run.path("sweep.csv"), sweep);
  json m = run.manifest("sweep");
  m["pc_lower"] = sweep.pc_lower;
  m["pc_finite"] = sweep.pc_finite;
  run.write_manifest(m);
  return 0;
}

int run_verify(Run& run) {
  boolperc::VerifyReport report = boolperc::verify_couplings(
      run.graph, run.law, run.cfg.model.p, run.cfg.experiment.trials, run.stream,
      run.cfg.experiment.explore_budget, run.cfg.experiment.threads);
  boolperc::write_verify_csv(run.path("verify.csv"), report);
  json m = run.manifest("verify");
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"name", row.name}, {"trials", row.trials}, {"failures", row.failures}});
  }
  m["checks"] = std::move(rows);
  m["escaped"] = report.escaped;
  m["budget_hits"] = report.budget_hits;
  m["all_passed"] = report.all_passed();
  run.write_manifest(m);
  if (!report.all_passed()) {
    std::cerr << "coupling verification failed; see " << run.path("verify.csv") << '\n';
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Boolean percolation: bounds, samplers, and couplings"};
  app.require_subcommand(1);
  app.footer(kConfigKeyHelp);

  CommonArgs args;
  CLI::App* bounds = app.add_subcommand(
      "bounds", "evaluate critical-probability and moment bounds");
  CLI::App* sample = app.add_subcommand(
      "sample", "draw occupied sets and summarize components");
  CLI::App* explore = app.add_subcommand(
      "explore", "run the layered exploration and its coupled branching process");
  CLI::App* gw = app.add_subcommand(
      "gw", "simulate the dominating branching process total size");
  CLI::App* tail = app.add_subcommand(
      "tail", "estimate the root component size tail");
  CLI::App* sweep = app.add_subcommand(
      "sweep", "sweep activation probabilities and report reach frequency");
  CLI::App* verify = app.add_subcommand(
      "verify", "per-replicate certification of the coupling guarantees");
  for (CLI::App* sub : {bounds, sample, explore, gw, tail, sweep, verify}) {
    add_common(sub, args);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    Config cfg = boolperc::load_config(args.config_path);
    apply_overrides(cfg, sub, args);
    Run run(std::move(cfg), args.out_dir);
    if (sub == bounds) return run_bounds(run);
    if (sub == sample) return run_sample(run);
    if (sub == explore) return run_explore(run);
    if (sub == gw) return run_gw_cmd(run);
    if (sub == tail) return run_tail(run);
    if (sub == sweep) return run_sweep(run);
    if (sub == verify) return run_verify(run);
    std::cerr << "unknown subcommand\n";
    return 2;
  } catch (const boolperc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
