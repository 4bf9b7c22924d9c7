#include "boolperc/ppp.hpp"

#include <algorithm>
#include <stdexcept>

namespace boolperc {

namespace {

constexpr std::uint32_t kMaxPackedVertices = 1u << 22;
constexpr std::uint32_t kMaxPackedRadius = 63;

}  // namespace

BallTable::BallTable(const GraphView& g, std::uint32_t cap) : g_(&g), cap_(cap) {
  if (cap < 1) throw std::invalid_argument("ball table needs a radius cap >= 1");
  if (cap > kMaxPackedRadius) {
    throw std::invalid_argument("ball table radius cap exceeds the packed key range");
  }
  if (g.n > kMaxPackedVertices) {
    throw std::invalid_argument("graph too large for packed ball keys");
  }
  if (g.has_window() && cap > g.halo) {
    throw std::invalid_argument(
        "radius cap exceeds the window halo; boundaries near the edge would be wrong");
  }

  centers_.resize(g.n);
  attached_.resize(g.n);

  std::vector<std::uint8_t> in_ball(g.n, 0);
  std::vector<Vertex> members, shell, next_shell;
  for (Vertex x = 0; x < g.n; ++x) {
    CenterBalls& cb = centers_[x];
    cb.ball_off.push_back(0);
    cb.bnd_off.push_back(0);

    members.assign(1, x);
    shell.assign(1, x);
    in_ball[x] = 1;
    std::uint32_t r = 1;
    for (;; ++r) {
      // members currently hold B_r (distance < r), shell its outermost ring.
      std::vector<Vertex> sorted_ball = members;
      std::sort(sorted_ball.begin(), sorted_ball.end());
      cb.ball_flat.insert(cb.ball_flat.end(), sorted_ball.begin(), sorted_ball.end());
      cb.ball_off.push_back(static_cast<std::uint32_t>(cb.ball_flat.size()));

      std::vector<Vertex> bnd = boolperc::boundary(g, sorted_ball, BoundaryMode::Both);
      for (Vertex y : bnd) attached_[y].push_back({x, r});
      cb.bnd_flat.insert(cb.bnd_flat.end(), bnd.begin(), bnd.end());
      cb.bnd_off.push_back(static_cast<std::uint32_t>(cb.bnd_flat.size()));

      // Grow one shell; an empty new shell saturates the ball here.
      next_shell.clear();
      for (Vertex u : shell) {
        for (Vertex w : g_->out[u]) {
          if (!in_ball[w]) {
            in_ball[w] = 1;
            next_shell.push_back(w);
          }
        }
      }
      if (next_shell.empty()) {
        cb.saturated = true;
        break;
      }
      if (r == cap_) break;
      members.insert(members.end(), next_shell.begin(), next_shell.end());
      shell.swap(next_shell);
    }
    cb.max_rad = r;
    for (Vertex v : members) in_ball[v] = 0;
    for (Vertex v : next_shell) in_ball[v] = 0;
  }
}

std::pair<const Vertex*, const Vertex*> BallTable::ball(Vertex x, std::uint32_t r) const {
  const CenterBalls& cb = centers_[x];
  if (r < 1 || r > cb.max_rad) throw std::out_of_range("ball radius outside canonical range");
  return {cb.ball_flat.data() + cb.ball_off[r - 1], cb.ball_flat.data() + cb.ball_off[r]};
}

std::pair<const Vertex*, const Vertex*> BallTable::boundary(Vertex x, std::uint32_t r) const {
  const CenterBalls& cb = centers_[x];
  if (r < 1 || r > cb.max_rad) throw std::out_of_range("ball radius outside canonical range");
  return {cb.bnd_flat.data() + cb.bnd_off[r - 1], cb.bnd_flat.data() + cb.bnd_off[r]};
}

std::uint32_t BallTable::ball_size(Vertex x, std::uint32_t r) const {
  const CenterBalls& cb = centers_[x];
  if (r < 1 || r > cb.max_rad) throw std::out_of_range("ball radius outside canonical range");
  return cb.ball_off[r] - cb.ball_off[r - 1];
}

std::vector<std::pair<Vertex, std::uint32_t>> BallTable::covering_keys(Vertex v) const {
  // x at in-distance d from v contributes the canonical keys with radius in
  // [d+1, max_rad(x)].
  std::vector<std::pair<Vertex, std::uint32_t>> keys;
  std::vector<std::uint8_t> seen(g_->n, 0);
  std::vector<Vertex> frontier{v}, next;
  seen[v] = 1;
  for (std::uint32_t d = 0; d < cap_ && !frontier.empty(); ++d) {
    for (Vertex x : frontier) {
      for (std::uint32_t r = d + 1; r <= centers_[x].max_rad; ++r) keys.push_back({x, r});
    }
    next.clear();
    for (Vertex u : frontier) {
      for (Vertex w : g_->in[u]) {
        if (!seen[w]) {
          seen[w] = 1;
          next.push_back(w);
        }
      }
    }
    frontier.swap(next);
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

PppRealization::PppRealization(const GraphView& g, const RadiusLaw& law, double p,
                               RandomStream stream)
    : g_(&g), law_(&law), p_(p) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::invalid_argument("the point-process view needs p in [0, 1)");
  }
  if (!law.has_cap()) {
    throw std::invalid_argument("the point-process view needs a capped radius law");
  }
  cap_ = law.cap();
  RandomStream levels = stream.derive(stream_label::levels);
  level_streams_.reserve(cap_ + 1);
  level_means_.reserve(cap_ + 1);
  level_streams_.push_back(levels);  // index 0 unused
  level_means_.push_back(0.0);
  for (std::uint32_t n = 1; n <= cap_; ++n) {
    level_streams_.push_back(levels.derive(n));
    level_means_.push_back(law.lambda(p, n));
  }
  counts_.assign(static_cast<std::size_t>(g.n) * cap_, 0);
  drawn_.assign(counts_.size(), 0);
}

std::uint32_t PppRealization::omega1(Vertex x, std::uint32_t level) {
  if (level < 1 || level > cap_) throw std::out_of_range("level outside [1, cap]");
  const std::size_t idx = static_cast<std::size_t>(x) * cap_ + (level - 1);
  if (!drawn_[idx]) {
    const double u = level_streams_[level].uniform_at(g_->stable_id[x]);
    counts_[idx] = poisson_from_uniform(level_means_[level], u);
    drawn_[idx] = 1;
  }
  return counts_[idx];
}

std::uint32_t PppRealization::Y(Vertex x) {
  for (std::uint32_t n = cap_; n >= 1; --n) {
    if (omega1(x, n) > 0) return n;
  }
  return 0;
}

Omega2Field omega2_from_omega1(PppRealization& real, const BallTable& table) {
  if (&real.graph() != &table.graph()) {
    throw std::invalid_argument("realization and ball table use different graphs");
  }
  Omega2Field field;
  field.table = &table;
  const GraphView& g = real.graph();
  for (Vertex x = 0; x < g.n; ++x) {
    const std::uint32_t top = table.max_rad(x);
    for (std::uint32_t n = 1; n <= real.cap(); ++n) {
      const std::uint32_t c = real.omega1(x, n);
      if (c > 0) field.counts[BallTable::pack2(x, std::min(n, top))] += c;
    }
  }
  return field;
}

std::vector<Vertex> wet_from_omega2(const Omega2Field& field) {
  std::vector<std::uint8_t> mark(field.table->graph().n, 0);
  for (const auto& [key, count] : field.counts) {
    if (count == 0) continue;
    const Vertex x = static_cast<Vertex>((key >> 23) & (kMaxPackedVertices - 1));
    const std::uint32_t r = static_cast<std::uint32_t>(key >> 45);
    auto [b, e] = field.table->ball(x, r);
    for (; b != e; ++b) mark[*b] = 1;
  }
  std::vector<Vertex> wet;
  for (Vertex v = 0; v < field.table->graph().n; ++v) {
    if (mark[v]) wet.push_back(v);
  }
  return wet;
}

std::vector<Vertex> wet_from_Y(PppRealization& real, const BallTable& table) {
  if (&real.graph() != &table.graph()) {
    throw std::invalid_argument("realization and ball table use different graphs");
  }
  const GraphView& g = real.graph();
  std::vector<std::uint8_t> mark(g.n, 0);
  for (Vertex x = 0; x < g.n; ++x) {
    const std::uint32_t y = real.Y(x);
    if (y == 0) continue;
    auto [b, e] = table.ball(x, std::min(y, table.max_rad(x)));
    for (; b != e; ++b) mark[*b] = 1;
  }
  std::vector<Vertex> wet;
  for (Vertex v = 0; v < g.n; ++v) {
    if (mark[v]) wet.push_back(v);
  }
  return wet;
}

const char* to_string(ExploreStatus s) {
  switch (s) {
    case ExploreStatus::Exhausted: return "exhausted";
    case ExploreStatus::BudgetExceeded: return "budget_exceeded";
    case ExploreStatus::WindowEscaped: return "window_escaped";
  }
  return "unknown";
}

std::vector<Vertex> ExplorationTrace::all_layer_vertices() const {
  std::vector<Vertex> all;
  for (const auto& layer : layers) all.insert(all.end(), layer.begin(), layer.end());
  std::sort(all.begin(), all.end());
  return all;
}

namespace {

// Shared helpers for explore / complete_omega2 so both make bit-identical
// draws for the same mark key.

struct MarkDrawer {
  const GraphView* g;
  const BallTable* table;
  const RadiusLaw* law;
  double p;
  RandomStream marks;
  RandomStream direct;

  MarkDrawer(const BallTable& t, const RadiusLaw& l, double p_,
             const RandomStream& replicate_stream)
      : g(&t.graph()),
        table(&t),
        law(&l),
        p(p_),
        marks(replicate_stream.derive(stream_label::marks)),
        direct(replicate_stream.derive(stream_label::marks_direct)) {}

  double intensity(Vertex x, std::uint32_t r) const {
    return table->dead_end(x, r) ? law->tail_intensity(p, r) : law->lambda(p, r);
  }

  std::uint32_t mark_at(Vertex x, std::uint32_t r, Vertex y) const {
    const double u = marks.derive(r).derive(g->stable_id[x]).uniform_at(g->stable_id[y]);
    return poisson_from_uniform(intensity(x, r), u);
  }

  std::uint32_t direct_count(Vertex x, std::uint32_t r) const {
    const double u = direct.derive(r).uniform_at(g->stable_id[x]);
    return poisson_from_uniform(intensity(x, r), u);
  }
};

void validate_exploration_inputs(const BallTable& table, const RadiusLaw& law, double p,
                                 Vertex root) {
  const GraphView& g = table.graph();
  if (root >= g.n) throw std::invalid_argument("exploration root outside the graph");
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("exploration needs p in [0, 1)");
  if (!law.has_cap()) throw std::invalid_argument("exploration needs a capped radius law");
  if (law.cap() > table.cap()) {
    throw std::invalid_argument("radius law cap exceeds the ball table cap");
  }
  if (g.has_window() && !g.is_interior(root)) {
    throw std::invalid_argument("exploration root must be a window-interior vertex");
  }
}

}  // namespace

ExplorationTrace explore(const BallTable& table, const RadiusLaw& law, double p,
                         Vertex root, const RandomStream& replicate_stream,
                         const ExploreBudget& budget) {
  validate_exploration_inputs(table, law, p, root);
  const GraphView& g = table.graph();
  const MarkDrawer drawer(table, law, p, replicate_stream);

  ExplorationTrace tr;
  tr.root = root;

  // Draws all boundary marks of (x, r), assigns omega2 from assigned_y (the
  // minimal full-boundary vertex when kNoVertex), and records the ball.
  auto draw_ball = [&](Vertex x, std::uint32_t r, std::uint32_t layer, Vertex assigned_y) {
    DiscoveredBall rec;
    rec.center = x;
    rec.radius = r;
    rec.dead_end = table.dead_end(x, r);
    rec.layer = layer;
    auto [bb, be] = table.boundary(x, r);
    if (bb == be) {
      rec.omega2 = drawer.direct_count(x, r);
      ++tr.mark_draws;
    } else {
      for (auto it = bb; it != be; ++it) {
        const std::uint64_t key = BallTable::pack3(x, r, *it);
        if (!tr.omega3.emplace(key, drawer.mark_at(x, r, *it)).second) {
          tr.mark_audit_ok = false;
        }
        ++tr.mark_draws;
      }
      rec.assigned_y = (assigned_y == kNoVertex) ? *bb : assigned_y;
      rec.omega2 = tr.omega3.at(BallTable::pack3(x, r, rec.assigned_y));
    }
    if (!tr.omega2.emplace(BallTable::pack2(x, r), rec.omega2).second) {
      tr.mark_audit_ok = false;
    }
    tr.balls.push_back(rec);
    return rec.omega2;
  };

  std::vector<std::uint8_t> visited(g.n, 0);
  bool escaped = false;

  // Accumulates the union of entering balls minus visited vertices, checking
  // the window-interior condition ball by ball.
  std::vector<Vertex> next_layer;
  auto enter_ball = [&](Vertex x, std::uint32_t r) {
    auto [b, e] = table.ball(x, r);
    for (; b != e; ++b) {
      if (!g.is_interior(*b)) escaped = true;
      if (!visited[*b]) {
        visited[*b] = 1;
        next_layer.push_back(*b);
      }
    }
  };

  // Step 0: every canonical ball containing the root, in key order.
  for (auto [x, r] : table.covering_keys(root)) {
    if (draw_ball(x, r, 0, kNoVertex) > 0) enter_ball(x, r);
  }

  for (std::uint32_t step = 1;; ++step) {
    if (next_layer.empty()) {
      tr.status = ExploreStatus::Exhausted;
      break;
    }
    std::sort(next_layer.begin(), next_layer.end());
    tr.layers.push_back(next_layer);
    tr.discovered_vertices += next_layer.size();
    next_layer.clear();
    if (escaped) {
      tr.status = ExploreStatus::WindowEscaped;
      break;
    }
    if (tr.discovered_vertices > budget.max_vertices ||
        tr.layers.size() >= budget.max_layers) {
      tr.status = ExploreStatus::BudgetExceeded;
      break;
    }

    const std::vector<Vertex>& layer = tr.layers.back();

    // Draw every ball whose boundary meets the layer and is still undrawn,
    // assigning omega2 from the smallest boundary vertex inside the layer.
    std::vector<std::pair<Vertex, std::uint32_t>> candidates;
    for (Vertex v : layer) {
      for (const auto& key : table.attached(v)) {
        if (!tr.omega2.count(BallTable::pack2(key.first, key.second))) {
          candidates.push_back(key);
        }
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (auto [x, r] : candidates) {
      Vertex y = kNoVertex;
      auto [bb, be] = table.boundary(x, r);
      for (auto it = bb; it != be && y == kNoVertex; ++it) {
        if (std::binary_search(layer.begin(), layer.end(), *it)) y = *it;
      }
      draw_ball(x, r, step, y);
    }

    // The next layer collects every ball with a positive memoized mark at a
    // layer vertex, including balls drawn at earlier steps.
    std::vector<std::pair<Vertex, std::uint32_t>> entering;
    for (Vertex v : layer) {
      for (const auto& key : table.attached(v)) {
        auto it = tr.omega3.find(BallTable::pack3(key.first, key.second, v));
        if (it != tr.omega3.end() && it->second > 0) entering.push_back(key);
      }
    }
    std::sort(entering.begin(), entering.end());
    entering.erase(std::unique(entering.begin(), entering.end()), entering.end());
    for (auto [x, r] : entering) enter_ball(x, r);
  }
  return tr;
}

Omega2Field complete_omega2(const ExplorationTrace& trace, const BallTable& table,
                            const RadiusLaw& law, double p,
                            const RandomStream& replicate_stream) {
  validate_exploration_inputs(table, law, p, trace.root);
  const GraphView& g = table.graph();
  const MarkDrawer drawer(table, law, p, replicate_stream);

  Omega2Field field;
  field.table = &table;
  for (Vertex x = 0; x < g.n; ++x) {
    for (std::uint32_t r = 1; r <= table.max_rad(x); ++r) {
      const std::uint64_t key = BallTable::pack2(x, r);
      auto assigned = trace.omega2.find(key);
      if (assigned != trace.omega2.end()) {
        field.counts.emplace(key, assigned->second);
        continue;
      }
      auto [bb, be] = table.boundary(x, r);
      std::uint32_t count;
      if (bb == be) {
        count = drawer.direct_count(x, r);
      } else {
        // Untouched keys take the mark at the minimal boundary vertex; the
        // draw is the same pure function of (stream, key) the exploration
        // would have used, so memoized marks are read back identically.
        auto it = trace.omega3.find(BallTable::pack3(x, r, *bb));
        count = (it != trace.omega3.end()) ? it->second : drawer.mark_at(x, r, *bb);
      }
      field.counts.emplace(key, count);
    }
  }
  return field;
}

GwCoupling coupled_gw(const ExplorationTrace& trace, const BallTable& table,
                      const GrowthProfile& profile, const RadiusLaw& law, double p,
                      const RandomStream& replicate_stream, const GwBudget& budget) {
  if (trace.status == ExploreStatus::WindowEscaped) {
    throw std::invalid_argument("cannot couple a branching process to an escaped trace");
  }
  if (!law.has_cap() || profile.r_max < law.cap()) {
    throw std::invalid_argument("growth profile must cover the radius cap (r_max >= cap)");
  }
  const GraphView& g = table.graph();
  const std::uint32_t cap = law.cap();
  const MarkDrawer drawer(table, law, p, replicate_stream);
  RandomStream lift_first = replicate_stream.derive(stream_label::lift_first);
  RandomStream lift_marks = replicate_stream.derive(stream_label::lift_marks);
  RandomStream branching = replicate_stream.derive(stream_label::branching);

  // Positivity probability of a fresh full-intensity mark: 1 - q_{r-1}.
  std::vector<double> fresh_prob(cap + 1, 0.0);
  std::vector<double> topup_lambda(cap + 1, 0.0);  // full intensity minus lambda_r
  for (std::uint32_t r = 1; r <= cap; ++r) {
    fresh_prob[r] = p * law.tail(r - 1);
    topup_lambda[r] = law.tail_intensity(p, r) - law.lambda(p, r);
  }
  auto topup_mean = [&](Vertex x, std::uint32_t r) {
    return table.dead_end(x, r) ? 0.0 : topup_lambda[r];
  };

  GwCoupling out;
  const std::size_t generations = std::max<std::size_t>(trace.layers.size(), 1);

  // Generation 0: the root individual. Its slots at radius r hold the lifted
  // ball counts of the canonical balls containing the root, padded with
  // fresh indicators up to the per-radius slot budget.
  std::vector<std::vector<std::pair<Vertex, std::uint32_t>>> by_radius(cap + 1);
  for (auto [x, r] : table.covering_keys(trace.root)) {
    if (r <= cap) by_radius[r].push_back({x, r});
  }
  std::uint64_t z = 0;
  {
    RandomStream pad = branching.derive(0).derive(0);
    for (std::uint32_t r = 1; r <= cap; ++r) {
      const std::uint64_t budget_slots = profile.mark_slots(r);
      const std::uint64_t used = by_radius[r].size();
      if (used > budget_slots) out.slot_overflows += used - budget_slots;
      const std::uint64_t slots = std::max(budget_slots, used);
      std::uint64_t fired = 0;
      for (std::uint64_t j = 0; j < slots; ++j) {
        bool positive;
        if (j < used) {
          const Vertex x = by_radius[r][j].first;
          const std::uint32_t base = trace.omega2.at(BallTable::pack2(x, r));
          if (base > 0) {
            positive = true;
          } else {
            const double u = lift_first.derive(r).uniform_at(g.stable_id[x]);
            positive = poisson_from_uniform(topup_mean(x, r), u) > 0;
          }
        } else {
          positive = bernoulli_from_uniform(fresh_prob[r], pad.derive(r).uniform_at(j));
        }
        if (positive) fired += profile.c[r];
      }
      z += fired;
    }
  }
  out.Z.push_back(z);
  out.total += z;

  for (std::size_t gen = 1; gen < generations; ++gen) {
    const std::uint64_t parents = out.Z[gen - 1];
    if (parents == 0) break;
    if (gen >= budget.max_generations || out.total > budget.max_population) {
      out.budget_hit = true;
      break;
    }
    const std::vector<Vertex>& layer = trace.layers[gen - 1];

    std::uint64_t next = 0;
    for (std::uint64_t k = 0; k < parents; ++k) {
      RandomStream pad = branching.derive(gen).derive(k);
      std::uint64_t xi = 0;
      if (k < layer.size()) {
        // Layer individual: slots hold its attached marks, topped up to the
        // full tail intensity, padded with fresh indicators. Attached marks
        // the budget-stopped exploration never drew count as fresh slots.
        const Vertex y = layer[k];
        for (auto& bucket : by_radius) bucket.clear();
        for (const auto& key : table.attached(y)) {
          if (key.second <= cap) by_radius[key.second].push_back(key);
        }
        for (std::uint32_t r = 1; r <= cap; ++r) {
          const std::uint64_t budget_slots = profile.mark_slots(r);
          const std::uint64_t used = by_radius[r].size();
          if (used > budget_slots) out.slot_overflows += used - budget_slots;
          const std::uint64_t slots = std::max(budget_slots, used);
          std::uint64_t fired = 0;
          for (std::uint64_t j = 0; j < slots; ++j) {
            bool positive = false;
            if (j < used) {
              const Vertex x = by_radius[r][j].first;
              auto it = trace.omega3.find(BallTable::pack3(x, r, y));
              if (it != trace.omega3.end()) {
                if (it->second > 0) {
                  positive = true;
                } else {
                  const double u =
                      lift_marks.derive(r).derive(g.stable_id[x]).uniform_at(g.stable_id[y]);
                  positive = poisson_from_uniform(topup_mean(x, r), u) > 0;
                }
              } else {
                positive = bernoulli_from_uniform(fresh_prob[r], pad.derive(r).uniform_at(j));
              }
            } else {
              positive = bernoulli_from_uniform(fresh_prob[r], pad.derive(r).uniform_at(j));
            }
            if (positive) fired += profile.c[r];
          }
          xi += fired;
        }
      } else {
        // Fresh individual: every slot is a fresh indicator.
        for (std::uint32_t r = 1; r <= cap; ++r) {
          const std::uint64_t slots = profile.mark_slots(r);
          std::uint64_t fired = 0;
          for (std::uint64_t j = 0; j < slots; ++j) {
            if (bernoulli_from_uniform(fresh_prob[r], pad.derive(r).uniform_at(j))) ++fired;
          }
          xi += fired * profile.c[r];
        }
      }
      next += xi;
      if (out.total + next > budget.max_population) {
        out.budget_hit = true;
        break;
      }
    }
    if (out.budget_hit) break;
    out.Z.push_back(next);
    out.total += next;
  }

  for (std::size_t i = 0; i < trace.layers.size(); ++i) {
    if (i < out.Z.size()) {
      if (trace.layers[i].size() > out.Z[i]) {
        out.dominated = false;
        break;
      }
    } else if (!out.budget_hit) {
      // The process died while layers remained; those layers are nonempty,
      // so the (implicitly zero) later generations cannot dominate them.
      out.dominated = false;
      break;
    } else {
      break;  // budget stopped the comparison; the prefix verdict stands
    }
  }
  out.extinct = !out.Z.empty() && out.Z.back() == 0;
  return out;
}

}  // namespace boolperc
