#include "boolperc/sampler.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace boolperc {

std::uint32_t effective_cap(const GraphView& g, const RadiusLaw& law,
                            const SampleOptions& opt) {
  std::uint32_t cap = 0;
  auto fold = [&cap](std::uint32_t candidate) {
    if (candidate == 0) return;
    cap = (cap == 0) ? candidate : std::min(cap, candidate);
  };
  if (law.has_cap()) fold(law.cap());
  fold(opt.radius_cap);
  if (g.has_window()) fold(g.halo);
  if (cap == 0) {
    throw std::invalid_argument(
        "uncapped radius law needs a simulation radius cap or a windowed graph");
  }
  return cap;
}

FieldDraw draw_field(const GraphView& g, const RadiusLaw& law, double p,
                     const RandomStream& replicate_stream, const SampleOptions& opt) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  const std::uint32_t cap = effective_cap(g, law, opt);

  FieldDraw field;
  field.sigma.resize(g.n);
  field.radius.resize(g.n);
  field.cap_applied = cap;

  RandomStream act = replicate_stream.derive(stream_label::activation);
  RandomStream rad = replicate_stream.derive(stream_label::radius);
  for (Vertex v = 0; v < g.n; ++v) {
    const std::uint64_t id = g.stable_id[v];
    field.sigma[v] = bernoulli_from_uniform(p, act.uniform_at(id)) ? 1 : 0;
    field.radius[v] = std::min(law.sample(rad.uniform_at(id)), cap);
    if (field.sigma[v]) {
      ++field.active_count;
      field.max_radius = std::max(field.max_radius, field.radius[v]);
    }
  }
  return field;
}

std::vector<Vertex> assemble_wet(const GraphView& g, const FieldDraw& field) {
  std::vector<std::uint8_t> in_wet(g.n, 0);
  // Stamped scratch space so each center's search starts clean without an
  // O(n) reset.
  std::vector<std::uint32_t> stamp(g.n, 0);
  std::uint32_t round = 0;
  std::vector<Vertex> frontier, next;

  for (Vertex x = 0; x < g.n; ++x) {
    if (!field.sigma[x] || field.radius[x] == 0) continue;
    ++round;
    stamp[x] = round;
    in_wet[x] = 1;
    frontier.assign(1, x);
    for (std::uint32_t depth = 1; depth < field.radius[x] && !frontier.empty(); ++depth) {
      next.clear();
      for (Vertex u : frontier) {
        for (Vertex w : g.out[u]) {
          if (stamp[w] == round) continue;
          stamp[w] = round;
          in_wet[w] = 1;
          next.push_back(w);
        }
      }
      frontier.swap(next);
    }
  }

  std::vector<Vertex> wet;
  for (Vertex v = 0; v < g.n; ++v) {
    if (in_wet[v]) wet.push_back(v);
  }
  return wet;
}

namespace {

// Component of `start` over weak adjacency restricted to marked vertices.
// mask values: 0 outside W, 1 wet unvisited, 2 wet visited. Visits are
// recorded in the mask so a sweep over all of W never repeats work.
std::vector<Vertex> flood(const GraphView& g, std::vector<std::uint8_t>& mask,
                          Vertex start) {
  std::vector<Vertex> comp;
  std::deque<Vertex> queue;
  mask[start] = 2;
  queue.push_back(start);
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop_front();
    comp.push_back(u);
    for (const auto* adj : {&g.out[u], &g.in[u]}) {
      for (Vertex w : *adj) {
        if (mask[w] == 1) {
          mask[w] = 2;
          queue.push_back(w);
        }
      }
    }
  }
  std::sort(comp.begin(), comp.end());
  return comp;
}

std::vector<std::uint8_t> wet_mask(const GraphView& g, const std::vector<Vertex>& wet) {
  std::vector<std::uint8_t> mask(g.n, 0);
  for (Vertex v : wet) mask[v] = 1;
  return mask;
}

}  // namespace

std::vector<Vertex> wet_component(const GraphView& g, const std::vector<Vertex>& wet,
                                  Vertex x) {
  if (!std::binary_search(wet.begin(), wet.end(), x)) return {};
  auto mask = wet_mask(g, wet);
  return flood(g, mask, x);
}

bool escaped_component(const GraphView& g, const std::vector<Vertex>& component) {
  if (!g.has_window()) return false;
  for (Vertex v : component) {
    if (!g.is_interior(v)) return true;
    if (std::binary_search(g.boundary_markers.begin(), g.boundary_markers.end(), v)) {
      return true;
    }
  }
  return false;
}

WetSample sample_direct(const GraphView& g, const RadiusLaw& law, double p,
                        const RandomStream& replicate_stream, const SampleOptions& opt) {
  WetSample sample;
  sample.field = draw_field(g, law, p, replicate_stream, opt);
  sample.wet = assemble_wet(g, sample.field);

  auto mask = wet_mask(g, sample.wet);
  for (Vertex v : sample.wet) {
    if (mask[v] != 1) continue;
    sample.components.push_back(flood(g, mask, v));
  }
  for (const auto& comp : sample.components) {
    if (std::binary_search(comp.begin(), comp.end(), g.root)) {
      sample.root_component = comp;
      sample.root_wet = true;
      break;
    }
  }
  sample.escaped = escaped_component(g, sample.root_component);
  return sample;
}

std::uint64_t count_covering_balls(const GraphView& g, const FieldDraw& field, Vertex y) {
  // Walk the transpose shells: x at in-distance d from y covers y exactly
  // when it is active with radius > d.
  std::uint64_t count = 0;
  std::vector<std::uint8_t> seen(g.n, 0);
  std::vector<Vertex> frontier{y}, next;
  seen[y] = 1;
  for (std::uint32_t d = 0; d < field.cap_applied && !frontier.empty(); ++d) {
    for (Vertex x : frontier) {
      if (field.sigma[x] && field.radius[x] > d) ++count;
    }
    next.clear();
    for (Vertex u : frontier) {
      for (Vertex w : g.in[u]) {
        if (seen[w]) continue;
        seen[w] = 1;
        next.push_back(w);
      }
    }
    frontier.swap(next);
  }
  return count;
}

}  // namespace boolperc
