#include "boolperc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "boolperc/bounds.hpp"
#include "boolperc/util.hpp"

namespace boolperc {

namespace {

void require_positive_trials(std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("need at least one trial");
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

}  // namespace

TailCurve tail_experiment(const GraphView& g, const RadiusLaw& law, double p,
                          const std::vector<std::uint32_t>& grid, std::uint64_t trials,
                          const RandomStream& base, const SampleOptions& opt,
                          unsigned threads) {
  if (grid.empty()) throw std::invalid_argument("tail grid must be nonempty");
  require_positive_trials(trials);

  std::vector<std::uint64_t> sizes(trials, 0);
  std::vector<std::uint8_t> esc(trials, 0);
  parallel_for(trials, threads, [&](std::uint64_t i) {
    WetSample ws = sample_direct(g, law, p, base.derive(i), opt);
    sizes[i] = ws.root_component.size();
    esc[i] = ws.escaped ? 1 : 0;
  });

  TailCurve curve;
  curve.grid = grid;
  curve.trials = trials;
  curve.exceed.assign(grid.size(), 0);
  for (std::uint64_t i = 0; i < trials; ++i) {
    if (esc[i]) {
      ++curve.censored;
      for (auto& e : curve.exceed) ++e;
      continue;
    }
    if (sizes[i] >= curve.size_hist.size()) curve.size_hist.resize(sizes[i] + 1, 0);
    ++curve.size_hist[sizes[i]];
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (sizes[i] > grid[j]) ++curve.exceed[j];
    }
  }
  curve.unreliable = curve.censored * 5 > trials;
  curve.ci.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    curve.ci.push_back(wilson_interval(curve.exceed[j], trials, 0.05));
  }
  return curve;
}

SweepResult sweep_p(const GraphView& g, const RadiusLaw& law,
                    const std::vector<double>& p_grid, std::uint64_t trials,
                    const RandomStream& base, const SampleOptions& opt,
                    unsigned threads) {
  if (p_grid.empty()) throw std::invalid_argument("p grid must be nonempty");
  for (double p : p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("every p in the sweep must lie in [0, 1]");
    }
  }
  require_positive_trials(trials);

  const std::size_t np = p_grid.size();
  std::vector<std::uint8_t> reach(trials * np, 0);
  parallel_for(trials, threads, [&](std::uint64_t i) {
    RandomStream rep = base.derive(i);
    for (std::size_t j = 0; j < np; ++j) {
      // Same replicate stream for every p: activation is a threshold on one
      // uniform per vertex, so reach is monotone in p within a replicate.
      WetSample ws = sample_direct(g, law, p_grid[j], rep, opt);
      reach[i * np + j] = ws.escaped ? 1 : 0;
    }
  });

  SweepResult out;
  out.trials = trials;
  out.points.resize(np);
  for (std::size_t j = 0; j < np; ++j) out.points[j].p = p_grid[j];
  for (std::uint64_t i = 0; i < trials; ++i) {
    for (std::size_t j = 0; j < np; ++j) {
      out.points[j].reached += reach[i * np + j];
    }
  }
  for (std::size_t j = 0; j < np; ++j) {
    out.points[j].ci = wilson_interval(out.points[j].reached, trials, 0.05);
  }

  GrowthProfile profile = growth_profile(g, effective_cap(g, law, opt));
  ExtendedReal pc = pc_lower_bound(profile, law);
  out.pc_finite = pc.finite();
  out.pc_lower = out.pc_finite ? pc.value : 0.0;
  return out;
}

DecayFit fit_decay(const TailCurve& curve, std::uint32_t n_lo, std::uint32_t n_hi) {
  DecayFit fit;
  if (curve.trials == 0) {
    fit.note = "empty curve";
    return fit;
  }
  std::vector<double> xs, ys, ws;
  std::uint32_t nonzero = 0;
  std::uint32_t dropped_censored = 0;
  for (std::size_t j = 0; j < curve.grid.size(); ++j) {
    if (curve.grid[j] < n_lo || curve.grid[j] > n_hi) continue;
    if (curve.exceed[j] == 0) continue;
    ++nonzero;
    if (2 * curve.censored > curve.exceed[j]) {
      // More than half of the exceedances at this n could be censoring
      // artifacts; the bin says nothing reliable about decay.
      ++dropped_censored;
      continue;
    }
    double est = curve.estimate(j);
    xs.push_back(static_cast<double>(curve.grid[j]));
    ys.push_back(std::log(est));
    ws.push_back(static_cast<double>(curve.exceed[j]) /
                 (1.0 - est + 1.0 / static_cast<double>(curve.trials)));
  }
  if (nonzero == 0) {
    fit.note = "every estimate in the fit window is zero";
    return fit;
  }
  if (xs.size() < 5) {
    fit.note = dropped_censored
                   ? "fewer than five usable points after dropping censoring-dominated bins"
                   : "need at least five nonzero estimates to fit";
    return fit;
  }
  LineFit line = weighted_least_squares(xs, ys, ws);
  if (!line.ok) {
    fit.note = "degenerate fit";
    return fit;
  }
  fit.ok = true;
  fit.points_used = static_cast<std::uint32_t>(xs.size());
  fit.slope_se = line.slope_se;
  if (line.slope >= 0.0) {
    fit.non_decaying = true;
    fit.lambda = 0.0;
  } else {
    fit.lambda = -line.slope;
  }
  double sw = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sw += ws[k];
    my += ws[k] * ys[k];
  }
  my /= sw;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    double pred = line.intercept + line.slope * xs[k];
    ss_res += ws[k] * (ys[k] - pred) * (ys[k] - pred);
    ss_tot += ws[k] * (ys[k] - my) * (ys[k] - my);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

namespace {

BootstrapSlope bootstrap_impl(const TailCurve& curve, std::uint32_t n_lo,
                              std::uint32_t n_hi, std::uint32_t resamples,
                              double alpha, const RandomStream& base) {
  // Categorical atoms: every observed size with its count, then one censored
  // atom. Cumulative counts let one uniform pick an atom by binary search.
  std::vector<std::uint64_t> atom_size;
  std::vector<std::uint64_t> cum;
  std::uint64_t running = 0;
  for (std::uint64_t s = 0; s < curve.size_hist.size(); ++s) {
    if (curve.size_hist[s] == 0) continue;
    running += curve.size_hist[s];
    atom_size.push_back(s);
    cum.push_back(running);
  }
  const std::size_t censored_atom = atom_size.size();
  running += curve.censored;
  cum.push_back(running);
  if (running != curve.trials) {
    throw std::logic_error("size histogram does not account for every trial");
  }

  RandomStream res = base.derive(stream_label::resample);
  std::vector<double> lambdas;
  lambdas.reserve(resamples);
  TailCurve boot;
  boot.grid = curve.grid;
  boot.trials = curve.trials;
  for (std::uint32_t r = 0; r < resamples; ++r) {
    RandomStream stream = res.derive(r);
    boot.exceed.assign(curve.grid.size(), 0);
    boot.censored = 0;
    for (std::uint64_t i = 0; i < curve.trials; ++i) {
      double target = stream.uniform_at(i) * static_cast<double>(curve.trials);
      std::size_t a = static_cast<std::size_t>(
          std::upper_bound(cum.begin(), cum.end(), static_cast<std::uint64_t>(target)) -
          cum.begin());
      if (a >= censored_atom) {
        ++boot.censored;
        for (auto& e : boot.exceed) ++e;
        continue;
      }
      for (std::size_t j = 0; j < curve.grid.size(); ++j) {
        if (atom_size[a] > curve.grid[j]) ++boot.exceed[j];
      }
    }
    DecayFit fit = fit_decay(boot, n_lo, n_hi);
    if (fit.ok) lambdas.push_back(fit.non_decaying ? 0.0 : fit.lambda);
  }

  BootstrapSlope out;
  out.resamples_used = static_cast<std::uint32_t>(lambdas.size());
  if (!lambdas.empty()) {
    out.lo = percentile(lambdas, alpha / 2.0);
    out.hi = percentile(lambdas, 1.0 - alpha / 2.0);
  }
  return out;
}

}  // namespace

BootstrapSlope bootstrap_lambda(const TailCurve& curve, std::uint32_t n_lo,
                                std::uint32_t n_hi, std::uint32_t resamples,
                                double alpha, const RandomStream& base) {
  if (resamples == 0) throw std::invalid_argument("need at least one resample");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("bootstrap alpha must lie in (0, 1)");
  }
  return bootstrap_impl(curve, n_lo, n_hi, resamples, alpha, base);
}

bool VerifyReport::all_passed() const {
  for (const auto& row : rows) {
    if (row.failures > 0) return false;
  }
  return true;
}

VerifyReport verify_couplings(const GraphView& g, const RadiusLaw& law, double p,
                              std::uint64_t trials, const RandomStream& base,
                              const ExploreBudget& budget, unsigned threads) {
  require_positive_trials(trials);
  if (!law.has_cap()) {
    throw std::invalid_argument("coupling verification needs a capped radius law");
  }
  if (g.root == kNoVertex) throw std::invalid_argument("graph has no root vertex");

  BallTable table(g, law.cap());
  GrowthProfile profile = growth_profile(g, law.cap());

  enum : std::uint8_t { kPass = 0, kFail = 1, kSkip = 2 };
  std::vector<std::uint8_t> l1(trials, kPass), l2(trials, kSkip), gw(trials, kSkip),
      audit(trials, kPass), escd(trials, 0), bud(trials, 0);

  parallel_for(trials, threads, [&](std::uint64_t i) {
    RandomStream rep = base.derive(i);

    PppRealization real(g, law, p, rep);
    Omega2Field pushed = omega2_from_omega1(real, table);
    l1[i] = (wet_from_omega2(pushed) == wet_from_Y(real, table)) ? kPass : kFail;

    ExplorationTrace trace = explore(table, law, p, g.root, rep, budget);
    audit[i] = trace.mark_audit_ok ? kPass : kFail;
    if (trace.status == ExploreStatus::WindowEscaped) {
      escd[i] = 1;
      return;
    }
    if (trace.status == ExploreStatus::BudgetExceeded) {
      bud[i] = 1;
    } else {
      Omega2Field field = complete_omega2(trace, table, law, p, rep);
      std::vector<Vertex> wet = wet_from_omega2(field);
      std::vector<Vertex> wrho = wet_component(g, wet, g.root);
      std::vector<Vertex> explored = trace.all_layer_vertices();
      l2[i] = std::includes(explored.begin(), explored.end(), wrho.begin(), wrho.end())
                  ? kPass
                  : kFail;
    }
    GwCoupling coupling = coupled_gw(trace, table, profile, law, p, rep);
    gw[i] = coupling.dominated ? kPass : kFail;
  });

  VerifyReport report;
  report.rows = {{"pushforward_identity", 0, 0},
                 {"exploration_inclusion", 0, 0},
                 {"gw_domination", 0, 0},
                 {"mark_uniqueness", 0, 0}};
  for (std::uint64_t i = 0; i < trials; ++i) {
    report.rows[0].trials++;
    if (l1[i] == kFail) report.rows[0].failures++;
    if (l2[i] != kSkip) {
      report.rows[1].trials++;
      if (l2[i] == kFail) report.rows[1].failures++;
    }
    if (gw[i] != kSkip) {
      report.rows[2].trials++;
      if (gw[i] == kFail) report.rows[2].failures++;
    }
    report.rows[3].trials++;
    if (audit[i] == kFail) report.rows[3].failures++;
    report.escaped += escd[i];
    report.budget_hits += bud[i];
  }
  return report;
}

std::vector<SampleRow> sample_experiment(const GraphView& g, const RadiusLaw& law,
                                         double p, std::uint64_t trials,
                                         const RandomStream& base,
                                         const SampleOptions& opt, unsigned threads) {
  require_positive_trials(trials);
  std::vector<SampleRow> rows(trials);
  parallel_for(trials, threads, [&](std::uint64_t i) {
    WetSample ws = sample_direct(g, law, p, base.derive(i), opt);
    rows[i] = {base.seed(),
               i,
               ws.wet.size(),
               ws.root_component.size(),
               ws.escaped,
               ws.components.size()};
  });
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_tail_csv(const std::string& path, const TailCurve& curve) {
  auto out = open_for_write(path);
  out << "n,estimate,ci_low,ci_high,censored_count\n";
  for (std::size_t j = 0; j < curve.grid.size(); ++j) {
    out << curve.grid[j] << ',' << format_double(curve.estimate(j)) << ','
        << format_double(curve.ci[j].lo) << ',' << format_double(curve.ci[j].hi) << ','
        << curve.censored << '\n';
  }
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
  auto out = open_for_write(path);
  out << "p,reach_freq,ci_low,ci_high\n";
  for (const auto& pt : sweep.points) {
    double freq = sweep.trials
                      ? static_cast<double>(pt.reached) / static_cast<double>(sweep.trials)
                      : 0.0;
    out << format_double(pt.p) << ',' << format_double(freq) << ','
        << format_double(pt.ci.lo) << ',' << format_double(pt.ci.hi) << '\n';
  }
}

void write_gw_csv(const std::string& path, const TotalSizeTail& tail) {
  auto out = open_for_write(path);
  out << "n,tail_estimate,ci_low,ci_high\n";
  for (std::size_t j = 0; j < tail.grid.size(); ++j) {
    out << tail.grid[j] << ',' << format_double(tail.estimate(j)) << ','
        << format_double(tail.ci[j].lo) << ',' << format_double(tail.ci[j].hi) << '\n';
  }
}

void write_verify_csv(const std::string& path, const VerifyReport& report) {
  auto out = open_for_write(path);
  out << "check_name,trials,failures\n";
  std::uint64_t total = 0;
  for (const auto& row : report.rows) {
    total = std::max(total, row.trials);
    out << row.name << ',' << row.trials << ',' << row.failures << '\n';
  }
  // Informational: escapes are skips, not failures, but belong in the record.
  out << "window_escapes," << total << ',' << report.escaped << '\n';
}

void write_sample_csv(const std::string& path, const std::vector<SampleRow>& rows) {
  auto out = open_for_write(path);
  out << "seed,replicate,size_w,size_wrho,escaped,n_components\n";
  for (const auto& row : rows) {
    out << row.seed << ',' << row.replicate << ',' << row.size_w << ',' << row.size_wrho
        << ',' << (row.escaped ? 1 : 0) << ',' << row.n_components << '\n';
  }
}

}  // namespace boolperc
