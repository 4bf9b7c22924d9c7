// End-to-end checks of the command-line binary: every subcommand runs against
// a small config, writes its manifest plus data files, and uses the documented
// exit codes. CLI_BIN is injected by the build as the path to the binary.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include <sys/wait.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path test_root() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "boolperc_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: " << path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CmdResult run_cli(const std::string& args, const std::string& tag) {
  const fs::path out_file = test_root() / (tag + ".out");
  const fs::path err_file = test_root() / (tag + ".err");
  const std::string cmd = std::string(CLI_BIN) + " " + args + " > " +
                          out_file.string() + " 2> " + err_file.string();
  const int raw = std::system(cmd.c_str());
  CmdResult res;
  res.code = (raw != -1 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
  res.out = slurp(out_file);
  res.err = slurp(err_file);
  return res;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = test_root() / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  return p;
}

fs::path out_dir(const std::string& name) {
  const fs::path p = test_root() / name;
  fs::create_directories(p);
  return p;
}

json parse_file(const fs::path& p) { return json::parse(slurp(p)); }

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char ch : text) n += ch == '\n' ? 1 : 0;
  return n;
}

constexpr const char* kLineCfg = R"({
  "graph": {"family": "z_window", "dim": 1, "half_width": 20, "halo": 6},
  "law": {"kind": "geometric", "a": 0.5, "cap": 5},
  "model": {"p": 0.02, "t": 0.1},
  "experiment": {"trials": 10, "seed": 7, "threads": 1}
})";

}  // namespace

TEST_CASE("help lists every subcommand and the config key reference") {
  CmdResult res = run_cli("--help", "help");
  CHECK(res.code == 0);
  for (const char* name :
       {"bounds", "sample", "explore", "gw", "tail", "sweep", "verify"}) {
    CHECK_MESSAGE(res.out.find(name) != std::string::npos, "missing " << name);
  }
  for (const char* key :
       {"graph.family", "law.kind", "model.p", "experiment.trials"}) {
    CHECK_MESSAGE(res.out.find(key) != std::string::npos, "missing " << key);
  }
}

TEST_CASE("bounds writes the profile, the bound report, and a manifest") {
  fs::path cfg = write_config("bounds.json", kLineCfg);
  fs::path dir = out_dir("bounds_run");
  CmdResult res =
      run_cli("bounds --config " + cfg.string() + " --out " + dir.string(), "bounds");
  REQUIRE(res.code == 0);

  json m = parse_file(dir / "manifest.json");
  CHECK(m["command"] == "bounds");
  CHECK(m["seed"] == 7);
  CHECK(m["seed_source"] == "given");
  CHECK(m["trials"] == 10);
  CHECK(m["inconclusive"] == false);
  CHECK(m.contains("truncation_mass"));
  CHECK(m["wall_seconds"].get<double>() >= 0.0);
  CHECK(m["config"]["graph"]["half_width"] == 20);

  json b = parse_file(dir / "bounds.json");
  CHECK(b["profile"]["r_max"] == 5);
  CHECK(b["profile"]["delta"] == 2);
  CHECK(b["profile"]["c"] == json({0, 1, 3, 5, 7, 9}));
  CHECK(b["profile"]["s"] == json({1, 2, 2, 2, 2, 2}));
  CHECK(b["mean_phi"]["state"] == "finite");
  CHECK(b["mean_phi"]["exact_levels"] == 5);
  const double mean_phi = b["mean_phi"]["value"].get<double>();
  CHECK(mean_phi == doctest::Approx(645.0 / 31.0).epsilon(1e-12));
  CHECK(b["pc_lower"]["state"] == "finite");
  CHECK(b["pc_lower"]["value"].get<double>() ==
        doctest::Approx(1.0 / mean_phi).epsilon(1e-12));
  CHECK(b["subcritical"]["holds"] == true);
  CHECK(b["subcritical"]["sum"]["value"].get<double>() ==
        doctest::Approx(0.02 * mean_phi).epsilon(1e-12));
  CHECK(b["xi_mean"]["state"] == "finite");
  CHECK(b["expo"]["holds"] == true);
  CHECK(b["xi_log_mgf_bound"]["value"].get<double>() > 0.0);
}

TEST_CASE("an uncertifiable bound series exits with code four") {
  // Uncapped geometric tail chosen so the degree ceiling's term ratio is
  // 0.999999: summable, but far too slow to settle within the series horizon.
  fs::path cfg = write_config("bounds_slow.json", R"({
    "graph": {"family": "z_window", "dim": 1, "half_width": 4, "halo": 8},
    "law": {"kind": "geometric", "a": 0.24999975},
    "model": {"p": 0.001},
    "experiment": {"trials": 1, "seed": 1, "threads": 1}
  })");
  fs::path dir = out_dir("bounds_slow_run");
  CmdResult res = run_cli(
      "bounds --config " + cfg.string() + " --out " + dir.string(), "bounds_slow");
  CHECK(res.code == 4);
  CHECK(res.err.find("could not be certified") != std::string::npos);
  json m = parse_file(dir / "manifest.json");
  CHECK(m["inconclusive"] == true);
  json b = parse_file(dir / "bounds.json");
  CHECK(b["mean_phi"]["state"] == "inconclusive");
  CHECK(b["pc_lower"]["state"] == "inconclusive");
}

TEST_CASE("sample writes one row per replicate and sources its seed") {
  fs::path cfg = write_config("sample.json", R"({
    "graph": {"family": "z_window", "dim": 1, "half_width": 10, "halo": 2},
    "law": {"kind": "geometric", "a": 0.5, "cap": 2},
    "model": {"p": 0.2},
    "experiment": {"trials": 25, "threads": 1}
  })");
  fs::path dir = out_dir("sample_run");
  CmdResult res =
      run_cli("sample --config " + cfg.string() + " --out " + dir.string(), "sample");
  REQUIRE(res.code == 0);

  const std::string csv = slurp(dir / "sample.csv");
  CHECK(csv.rfind("seed,replicate,size_w,size_wrho,escaped,n_components\n", 0) == 0);
  CHECK(count_lines(csv) == 26);
  json m = parse_file(dir / "manifest.json");
  CHECK(m["seed_source"] == "entropy");
  CHECK(m["escaped_count"].get<std::uint64_t>() <= 25);

  fs::path dir2 = out_dir("sample_run_seeded");
  CmdResult res2 = run_cli("sample --config " + cfg.string() + " --out " +
                               dir2.string() + " --seed 99",
                           "sample_seeded");
  REQUIRE(res2.code == 0);
  json m2 = parse_file(dir2 / "manifest.json");
  CHECK(m2["seed"] == 99);
  CHECK(m2["seed_source"] == "given");
}

TEST_CASE("tail reruns with the same seed are byte-identical") {
  fs::path cfg = write_config("tail.json", R"({
    "graph": {"family": "z_window", "dim": 1, "half_width": 25, "halo": 4},
    "law": {"kind": "geometric", "a": 0.5, "cap": 4},
    "model": {"p": 0.12},
    "experiment": {"trials": 400, "seed": 4242, "threads": 1,
                   "grid": [0, 1, 2, 3, 4, 6, 8],
                   "fit_window": [0, 6], "resamples": 200}
  })");
  fs::path dir_a = out_dir("tail_a");
  fs::path dir_b = out_dir("tail_b");
  CmdResult ra =
      run_cli("tail --config " + cfg.string() + " --out " + dir_a.string(), "tail_a");
  CmdResult rb =
      run_cli("tail --config " + cfg.string() + " --out " + dir_b.string(), "tail_b");
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);

  const std::string csv_a = slurp(dir_a / "tail.csv");
  CHECK(csv_a == slurp(dir_b / "tail.csv"));
  CHECK(csv_a.rfind("n,estimate,ci_low,ci_high,censored_count\n", 0) == 0);
  CHECK(count_lines(csv_a) == 8);

  json m = parse_file(dir_a / "manifest.json");
  CHECK(m.contains("fit"));
  CHECK(m.contains("bootstrap"));
  CHECK(m["bootstrap"]["resamples_used"].get<std::uint64_t>() >= 1);
  CHECK(m["censored"].get<std::uint64_t>() <= 400);
}

TEST_CASE("explore with one replicate dumps the per-ball trace") {
  fs::path cfg = write_config("explore.json", R"({
    "graph": {"family": "z_window", "dim": 1, "half_width": 15, "halo": 3},
    "law": {"kind": "geometric", "a": 0.5, "cap": 3},
    "model": {"p": 0.5},
    "experiment": {"trials": 1, "seed": 77, "threads": 1}
  })");
  fs::path dir = out_dir("explore_run");
  CmdResult res = run_cli(
      "explore --config " + cfg.string() + " --out " + dir.string(), "explore");
  REQUIRE(res.code == 0);

  json t = parse_file(dir / "trace.json");
  REQUIRE(t["traces"].size() == 1);
  const json& trace = t["traces"][0];
  CHECK(trace["replicate"] == 0);
  const std::string status = trace["status"].get<std::string>();
  CHECK((status == "exhausted" || status == "window_escaped" ||
         status == "budget_exceeded"));
  CHECK(trace["mark_audit_ok"] == true);
  CHECK(trace["layer_sizes"].is_array());
  REQUIRE(trace.contains("balls"));
  CHECK(trace["balls"].is_array());
  for (const json& ball : trace["balls"]) {
    CHECK(ball["radius"].get<std::uint32_t>() >= 1);
    CHECK(ball["radius"].get<std::uint32_t>() <= 3);
    CHECK(ball.contains("omega2"));
  }
  json m = parse_file(dir / "manifest.json");
  CHECK(m["command"] == "explore");
}

TEST_CASE("gw writes the total-size tail curve and the reproduction mean") {
  fs::path cfg = write_config("gw.json", R"({
    "graph": {"family": "z_window", "dim": 1, "half_width": 10, "halo": 2},
    "law": {"kind": "geometric", "a": 0.5, "cap": 2},
    "model": {"p": 0.05},
    "experiment": {"trials": 300, "seed": 5, "threads": 1, "grid": [0, 1, 2, 3, 4, 5]}
  })");
  fs::path dir = out_dir("gw_run");
  CmdResult res =
      run_cli("gw --config " + cfg.string() + " --out " + dir.string(), "gw");
  REQUIRE(res.code == 0);

  const std::string csv = slurp(dir / "gw.csv");
  CHECK(csv.rfind("n,tail_estimate,ci_low,ci_high\n", 0) == 0);
  CHECK(count_lines(csv) == 7);
  json m = parse_file(dir / "manifest.json");
  // c = (1, 3), slots = (2, 4), fire = (0.05, 0.05 / 3).
  CHECK(m["xi_mean"].get<double>() == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(m["budget_exceedances"] == 0);
  CHECK(m.contains("fit"));
}

TEST_CASE("verify certifies the couplings and reports per-check rows") {
  fs::path cfg = write_config("verify.json", R"({
    "graph": {"family": "z_window", "dim": 1, "half_width": 30, "halo": 4},
    "law": {"kind": "geometric", "a": 0.5, "cap": 4},
    "model": {"p": 0.05},
    "experiment": {"trials": 50, "seed": 9, "threads": 1}
  })");
  fs::path dir = out_dir("verify_run");
  CmdResult res =
      run_cli("verify --config " + cfg.string() + " --out " + dir.string(), "verify");
  REQUIRE(res.code == 0);

  const std::string csv = slurp(dir / "verify.csv");
  CHECK(csv.rfind("check_name,trials,failures\n", 0) == 0);
  CHECK(count_lines(csv) == 6);
  CHECK(csv.find("pushforward_identity") != std::string::npos);
  CHECK(csv.find("window_escapes") != std::string::npos);
  json m = parse_file(dir / "manifest.json");
  CHECK(m["all_passed"] == true);
  REQUIRE(m["checks"].size() == 4);
  for (const json& row : m["checks"]) CHECK(row["failures"] == 0);
}

TEST_CASE("config and flag errors exit with code two and name the culprit") {
  fs::path bad_key = write_config("bad_key.json", R"({
    "graph": {"family": "z_window", "dim": 1, "half_width": 5, "halo": 2, "bogus": 1},
    "law": {"kind": "geometric", "a": 0.5, "cap": 2},
    "model": {"p": 0.1},
    "experiment": {"trials": 1, "threads": 1}
  })");
  CmdResult res = run_cli("bounds --config " + bad_key.string(), "bad_key");
  CHECK(res.code == 2);
  CHECK(res.err.find("unknown key graph.bogus") != std::string::npos);

  res = run_cli("bounds", "no_config");
  CHECK(res.code == 2);
  CHECK(res.err.find("--config") != std::string::npos);

  res = run_cli("bounds --config " + (test_root() / "absent.json").string(),
                "absent_config");
  CHECK(res.code == 2);
  CHECK(res.err.find("cannot open") != std::string::npos);

  fs::path no_grid = write_config("no_p_grid.json", R"({
    "graph": {"family": "z_window", "dim": 1, "half_width": 5, "halo": 2},
    "law": {"kind": "geometric", "a": 0.5, "cap": 2},
    "model": {"p": 0.1},
    "experiment": {"trials": 10, "seed": 2, "threads": 1}
  })");
  res = run_cli("sweep --config " + no_grid.string() + " --out " +
                    out_dir("sweep_fail").string(),
                "sweep_fail");
  CHECK(res.code == 2);
  CHECK(res.err.find("experiment.p_grid") != std::string::npos);

  fs::path full_p = write_config("full_p.json", R"({
    "graph": {"family": "z_window", "dim": 1, "half_width": 5, "halo": 2},
    "law": {"kind": "geometric", "a": 0.5, "cap": 2},
    "model": {"p": 1.0},
    "experiment": {"trials": 5, "seed": 3, "threads": 1}
  })");
  res = run_cli("verify --config " + full_p.string() + " --out " +
                    out_dir("verify_fail").string(),
                "verify_full_p");
  CHECK(res.code == 2);
  CHECK(res.err.find("[0, 1)") != std::string::npos);

  fs::path tree = write_config("tree.json", R"({
    "graph": {"family": "tree", "branching": 2, "depth": 3, "halo": 2},
    "law": {"kind": "table", "pmf": [0.5, 0.5], "cap": 2},
    "model": {"p": 0.1},
    "experiment": {"trials": 5, "seed": 4, "threads": 1}
  })");
  res = run_cli("bounds --config " + tree.string() + " --out " +
                    out_dir("tree_bad_flag").string() + " --window-half-width 9",
                "tree_bad_flag");
  CHECK(res.code == 2);
  CHECK(res.err.find("--window-half-width only applies") != std::string::npos);

  res = run_cli("bounds --config " + tree.string() + " --out " +
                    out_dir("tree_bounds").string(),
                "tree_bounds");
  CHECK(res.code == 0);
}

TEST_CASE("sweep reports the reach curve over the activation grid") {
  fs::path cfg = write_config("sweep.json", R"({
    "graph": {"family": "z_window", "dim": 1, "half_width": 10, "halo": 3},
    "law": {"kind": "geometric", "a": 0.5, "cap": 3},
    "model": {"p": 0.1},
    "experiment": {"trials": 100, "seed": 6, "threads": 1,
                   "p_grid": [0.05, 0.2, 0.5]}
  })");
  fs::path dir = out_dir("sweep_run");
  CmdResult res =
      run_cli("sweep --config " + cfg.string() + " --out " + dir.string(), "sweep");
  REQUIRE(res.code == 0);

  const std::string csv = slurp(dir / "sweep.csv");
  CHECK(csv.rfind("p,reach_freq,ci_low,ci_high\n", 0) == 0);
  CHECK(count_lines(csv) == 4);
  json m = parse_file(dir / "manifest.json");
  CHECK(m["pc_lower"].get<double>() > 0.0);
  CHECK(m["pc_finite"].is_boolean());
}
