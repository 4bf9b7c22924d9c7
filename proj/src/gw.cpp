#include "boolperc/gw.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "boolperc/util.hpp"

namespace boolperc {

XiLaw XiLaw::build(const GrowthProfile& profile, const RadiusLaw& law, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("activation probability must lie in [0, 1]");
  }
  if (!law.has_cap()) {
    throw std::invalid_argument("the reproduction law needs a capped radius law");
  }
  if (law.cap() > profile.r_max) {
    throw std::invalid_argument(
        "growth profile must cover the radius cap (r_max >= cap)");
  }
  XiLaw xi;
  xi.r_cap = law.cap();
  xi.p = p;
  xi.c.assign(xi.r_cap + 1, 0);
  xi.slots.assign(xi.r_cap + 1, 0);
  xi.fire.assign(xi.r_cap + 1, 0.0);
  for (std::uint32_t r = 1; r <= xi.r_cap; ++r) {
    xi.c[r] = profile.c[r];
    xi.slots[r] = profile.mark_slots(r);
    xi.fire[r] = p * law.tail(r - 1);
    xi.max_value += xi.c[r] * xi.slots[r];
    xi.mean += static_cast<double>(xi.c[r]) * static_cast<double>(xi.slots[r]) * xi.fire[r];
  }
  return xi;
}

std::uint64_t sample_xi(const XiLaw& xi, RandomStream& stream) {
  std::uint64_t value = 0;
  for (std::uint32_t r = 1; r <= xi.r_cap; ++r) {
    std::uint64_t fired = 0;
    for (std::uint64_t j = 0; j < xi.slots[r]; ++j) {
      if (bernoulli_from_uniform(xi.fire[r], stream.next_uniform())) ++fired;
    }
    value += fired * xi.c[r];
  }
  return value;
}

GwRun run_gw(const XiLaw& xi, RandomStream& stream, const GwBudget& budget) {
  GwRun run;
  run.Z.push_back(1);
  run.total = 1;
  while (true) {
    std::uint64_t parents = run.Z.back();
    if (parents == 0) {
      run.extinct = true;
      break;
    }
    if (run.Z.size() > budget.max_generations) {
      run.budget_hit = true;
      break;
    }
    std::uint64_t next = 0;
    for (std::uint64_t k = 0; k < parents; ++k) {
      next += sample_xi(xi, stream);
      if (run.total + next > budget.max_population) {
        run.budget_hit = true;
        break;
      }
    }
    if (run.budget_hit) break;
    run.Z.push_back(next);
    run.total += next;
  }
  return run;
}

TotalSizeTail total_size_tail(const XiLaw& xi, const std::vector<std::uint32_t>& grid,
                              std::uint64_t trials, const RandomStream& base,
                              const GwBudget& budget, unsigned threads) {
  if (xi.mean >= 1.0) {
    std::ostringstream msg;
    msg << "total progeny is not almost surely finite: mean offspring " << xi.mean
        << " is >= 1";
    throw std::invalid_argument(msg.str());
  }
  if (grid.empty()) throw std::invalid_argument("tail grid must be nonempty");
  if (trials == 0) throw std::invalid_argument("need at least one trial");

  std::vector<std::uint64_t> totals(trials, 0);
  std::vector<std::uint8_t> hit(trials, 0);
  parallel_for(trials, threads, [&](std::uint64_t i) {
    RandomStream stream = base.derive(i);
    GwRun run = run_gw(xi, stream, budget);
    totals[i] = run.total;
    hit[i] = run.budget_hit ? 1 : 0;
  });

  TotalSizeTail out;
  out.grid = grid;
  out.trials = trials;
  out.xi_mean = xi.mean;
  out.exceed.assign(grid.size(), 0);
  for (std::uint64_t i = 0; i < trials; ++i) {
    if (hit[i]) ++out.budget_exceedances;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (hit[i] || totals[i] > grid[j]) ++out.exceed[j];
    }
  }
  out.ci.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out.ci.push_back(wilson_interval(out.exceed[j], trials, 0.05));
  }

  std::vector<double> xs, ys, ws;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (out.exceed[j] == 0 || out.exceed[j] == trials) continue;
    double est = out.estimate(j);
    xs.push_back(static_cast<double>(grid[j]));
    ys.push_back(std::log(est));
    // Delta-method weight for log of a binomial proportion.
    ws.push_back(static_cast<double>(trials) * est / (1.0 - est));
  }
  if (xs.size() >= 2) out.fit = weighted_least_squares(xs, ys, ws);
  return out;
}

}  // namespace boolperc
