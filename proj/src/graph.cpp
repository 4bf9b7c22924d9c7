#include "boolperc/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace boolperc {

namespace {

void sort_unique(std::vector<Vertex>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void finalize_degrees(GraphView& g, const BuildOptions& opts) {
  std::vector<Vertex> joint;
  for (Vertex v = 0; v < g.n; ++v) {
    sort_unique(g.out[v]);
    sort_unique(g.in[v]);
    g.max_out_degree = std::max<std::uint32_t>(g.max_out_degree, g.out[v].size());
    g.max_in_degree = std::max<std::uint32_t>(g.max_in_degree, g.in[v].size());
    joint.clear();
    joint.insert(joint.end(), g.out[v].begin(), g.out[v].end());
    joint.insert(joint.end(), g.in[v].begin(), g.in[v].end());
    sort_unique(joint);
    g.max_degree = std::max<std::uint32_t>(g.max_degree, joint.size());
  }
  if (g.max_degree > opts.degree_cap) {
    throw std::invalid_argument("graph exceeds the degree cap (" +
                                std::to_string(g.max_degree) + " > " +
                                std::to_string(opts.degree_cap) + ")");
  }
  if (g.stable_id.empty()) {
    g.stable_id.resize(g.n);
    for (Vertex v = 0; v < g.n; ++v) g.stable_id[v] = v;
  }
}

// BFS over the chosen adjacency, distances capped at max_depth.
// dist uses kUnreached for untouched vertices; visited lists touched ones.
constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

void bfs(const std::vector<std::vector<Vertex>>& adj, Vertex source, std::uint32_t max_depth,
         std::vector<std::uint32_t>& dist, std::vector<Vertex>& visited) {
  visited.clear();
  visited.push_back(source);
  dist[source] = 0;
  std::size_t head = 0;
  while (head < visited.size()) {
    const Vertex v = visited[head++];
    const std::uint32_t d = dist[v];
    if (d >= max_depth) continue;
    for (Vertex w : adj[v]) {
      if (dist[w] == kUnreached) {
        dist[w] = d + 1;
        visited.push_back(w);
      }
    }
  }
}

}  // namespace

GraphView build_graph(std::uint32_t n, const std::vector<std::pair<Vertex, Vertex>>& edges,
                      bool directed, const BuildOptions& opts) {
  if (n > opts.vertex_cap) {
    throw std::invalid_argument("graph exceeds the vertex cap");
  }
  GraphView g;
  g.n = n;
  g.directed = directed;
  g.out.resize(n);
  g.in.resize(n);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (u == v) continue;
    g.out[u].push_back(v);
    g.in[v].push_back(u);
    if (!directed) {
      g.out[v].push_back(u);
      g.in[u].push_back(v);
    }
  }
  finalize_degrees(g, opts);
  return g;
}

GraphView z_window(unsigned dimension, unsigned half_width, unsigned halo,
                   const BuildOptions& opts) {
  if (dimension < 1 || dimension > 3) {
    throw std::invalid_argument("z_window: dimension must be 1, 2 or 3");
  }
  const std::uint64_t reach = static_cast<std::uint64_t>(half_width) + halo;
  const std::uint64_t side = 2 * reach + 1;
  std::uint64_t total = 1;
  for (unsigned d = 0; d < dimension; ++d) total *= side;
  if (total > opts.vertex_cap) {
    throw std::invalid_argument("z_window exceeds the vertex cap");
  }

  GraphView g;
  g.n = static_cast<std::uint32_t>(total);
  g.directed = false;
  g.out.resize(g.n);
  g.in.resize(g.n);
  g.halo = halo;
  if (halo > 0) g.interior.assign(g.n, 0);
  g.stable_id.resize(g.n);

  // Row-major index over coordinates in [-reach, reach]^dimension.
  std::vector<std::int64_t> stride(dimension, 1);
  for (unsigned d = 1; d < dimension; ++d) stride[d] = stride[d - 1] * side;

  std::vector<std::int64_t> coord(dimension);
  for (std::uint32_t v = 0; v < g.n; ++v) {
    std::uint64_t rem = v;
    std::int64_t max_abs = 0;
    for (unsigned d = 0; d < dimension; ++d) {
      coord[d] = static_cast<std::int64_t>(rem % side) - static_cast<std::int64_t>(reach);
      rem /= side;
      max_abs = std::max(max_abs, std::abs(coord[d]));
    }
    // Stable id packs each coordinate into 21 bits, independent of the
    // window extent, so the same lattice point keeps its randomness when the
    // window grows.
    std::uint64_t id = 0;
    for (unsigned d = 0; d < dimension; ++d) {
      id |= static_cast<std::uint64_t>(coord[d] + (1 << 20)) << (21 * d);
    }
    g.stable_id[v] = id;

    const bool inside = max_abs <= static_cast<std::int64_t>(half_width);
    if (halo > 0 && inside) g.interior[v] = 1;
    if (inside && max_abs == static_cast<std::int64_t>(half_width)) {
      g.boundary_markers.push_back(v);
    }
    if (max_abs == 0) g.root = v;

    for (unsigned d = 0; d < dimension; ++d) {
      for (int sgn : {-1, +1}) {
        const std::int64_t c = coord[d] + sgn;
        if (std::abs(c) > static_cast<std::int64_t>(reach)) continue;
        const std::uint32_t w = static_cast<std::uint32_t>(
            static_cast<std::int64_t>(v) + sgn * stride[d]);
        g.out[v].push_back(w);
        g.in[v].push_back(w);
      }
    }
  }
  finalize_degrees(g, opts);
  return g;
}

GraphView oriented_tree_ball(unsigned branching, unsigned depth, unsigned halo,
                             const BuildOptions& opts) {
  if (branching < 1) {
    throw std::invalid_argument("oriented_tree_ball: branching must be >= 1");
  }
  const std::uint32_t limit = depth + halo;

  GraphView g;
  g.directed = true;

  // Grow the window breadth-first from the root. Each vertex of the infinite
  // tree has one parent (toward the distinguished end) and `branching`
  // children. Ancestors of the root are materialized on demand.
  std::vector<Vertex> parent;          // kNoVertex when not yet materialized
  std::vector<std::uint32_t> dist;     // undirected distance to the root
  std::vector<std::uint32_t> child_count;
  auto add_vertex = [&](std::uint32_t d) -> Vertex {
    parent.push_back(kNoVertex);
    dist.push_back(d);
    child_count.push_back(0);
    if (parent.size() > opts.vertex_cap) {
      throw std::invalid_argument("oriented_tree_ball exceeds the vertex cap");
    }
    return static_cast<Vertex>(parent.size() - 1);
  };

  add_vertex(0);  // root
  std::deque<Vertex> queue = {0};
  std::vector<std::pair<Vertex, Vertex>> edges;  // child -> parent
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    if (dist[v] >= limit) continue;
    if (parent[v] == kNoVertex) {
      const Vertex p = add_vertex(dist[v] + 1);
      parent[v] = p;
      ++child_count[p];
      queue.push_back(p);
    }
    while (child_count[v] < branching) {
      const Vertex c = add_vertex(dist[v] + 1);
      parent[c] = v;
      ++child_count[v];
      queue.push_back(c);
    }
  }
  for (Vertex v = 0; v < parent.size(); ++v) {
    if (parent[v] != kNoVertex) edges.emplace_back(v, parent[v]);
  }

  g = build_graph(static_cast<std::uint32_t>(parent.size()), edges, true, opts);
  g.root = 0;
  g.halo = halo;
  if (halo > 0) {
    g.interior.assign(g.n, 0);
    for (Vertex v = 0; v < g.n; ++v) {
      if (dist[v] <= depth) g.interior[v] = 1;
    }
  }
  for (Vertex v = 0; v < g.n; ++v) {
    if (dist[v] == depth) g.boundary_markers.push_back(v);
  }
  sort_unique(g.boundary_markers);
  return g;
}

GraphView edge_list(const std::string& path, const BuildOptions& opts) {
  std::ifstream file(path);
  if (!file) {
    throw std::runtime_error("edge_list: cannot open " + path);
  }
  std::string line;
  std::size_t line_no = 0;
  bool directed = false;
  bool header_seen = false;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::uint64_t max_vertex = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!header_seen) {
      std::string word = line.substr(first);
      while (!word.empty() && (word.back() == '\r' || word.back() == ' ')) word.pop_back();
      if (word == "directed") {
        directed = true;
      } else if (word == "undirected") {
        directed = false;
      } else {
        throw std::runtime_error("edge_list: line " + std::to_string(line_no) +
                                 ": expected 'directed' or 'undirected'");
      }
      header_seen = true;
      continue;
    }
    std::istringstream ss(line);
    long long u = -1, v = -1;
    if (!(ss >> u >> v) || u < 0 || v < 0) {
      throw std::runtime_error("edge_list: line " + std::to_string(line_no) +
                               ": expected two nonnegative vertex ids");
    }
    std::string extra;
    if (ss >> extra) {
      throw std::runtime_error("edge_list: line " + std::to_string(line_no) +
                               ": trailing tokens after the edge");
    }
    if (u > std::numeric_limits<std::uint32_t>::max() ||
        v > std::numeric_limits<std::uint32_t>::max()) {
      throw std::runtime_error("edge_list: line " + std::to_string(line_no) +
                               ": vertex id out of range");
    }
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    max_vertex = std::max<std::uint64_t>(max_vertex, std::max(u, v));
  }
  if (!header_seen) {
    throw std::runtime_error("edge_list: missing 'directed'/'undirected' header in " + path);
  }
  const std::uint32_t n = edges.empty() ? 0 : static_cast<std::uint32_t>(max_vertex + 1);
  if (n > opts.vertex_cap) {
    throw std::runtime_error("edge_list: graph exceeds the vertex cap");
  }
  return build_graph(n, edges, directed, opts);
}

std::vector<Vertex> ball(const GraphView& g, Vertex x, std::uint32_t r) {
  if (x >= g.n) throw std::invalid_argument("ball: vertex out of range");
  if (r == 0) return {};
  std::vector<std::uint32_t> dist(g.n, kUnreached);
  std::vector<Vertex> visited;
  bfs(g.out, x, r - 1, dist, visited);
  std::sort(visited.begin(), visited.end());
  return visited;
}

std::vector<Vertex> transpose_ball(const GraphView& g, Vertex x, std::uint32_t r) {
  if (x >= g.n) throw std::invalid_argument("transpose_ball: vertex out of range");
  if (r == 0) return {};
  std::vector<std::uint32_t> dist(g.n, kUnreached);
  std::vector<Vertex> visited;
  bfs(g.in, x, r - 1, dist, visited);
  std::sort(visited.begin(), visited.end());
  return visited;
}

std::vector<Vertex> boundary(const GraphView& g, const std::vector<Vertex>& set,
                             BoundaryMode mode) {
  std::vector<std::uint8_t> member(g.n, 0);
  for (Vertex v : set) {
    if (v >= g.n) throw std::invalid_argument("boundary: vertex out of range");
    member[v] = 1;
  }
  std::vector<Vertex> result;
  for (Vertex v : set) {
    if (mode != BoundaryMode::Minus) {
      for (Vertex w : g.out[v]) {
        if (!member[w]) result.push_back(w);
      }
    }
    if (mode != BoundaryMode::Plus) {
      for (Vertex w : g.in[v]) {
        if (!member[w]) result.push_back(w);
      }
    }
  }
  sort_unique(result);
  return result;
}

std::uint64_t GrowthProfile::mark_slots(std::uint32_t r) const {
  if (r == 0 || r > r_max) throw std::out_of_range("mark_slots: radius outside profile");
  return std::max<std::uint64_t>(static_cast<std::uint64_t>(delta) * s_top[r - 1], c_top[r]);
}

GrowthProfile growth_profile(const GraphView& g, std::uint32_t r_max) {
  if (r_max == 0) throw std::invalid_argument("growth_profile: r_max must be >= 1");
  if (g.has_window() && r_max > g.halo) {
    throw std::invalid_argument(
        "growth_profile: halo thinner than r_max, window values would not match the "
        "infinite graph");
  }
  GrowthProfile p;
  p.r_max = r_max;
  p.c.assign(r_max + 1, 0);
  p.s.assign(r_max + 1, 0);
  p.c_top.assign(r_max + 1, 0);
  p.s_top.assign(r_max + 1, 0);
  p.s[0] = p.s_top[0] = 1;

  std::vector<std::uint32_t> dist(g.n, kUnreached);
  std::vector<Vertex> visited;
  std::vector<std::uint64_t> layer(r_max + 1);
  auto account = [&](const std::vector<std::vector<Vertex>>& adj, Vertex x,
                     std::vector<std::uint64_t>& c, std::vector<std::uint64_t>& s) {
    bfs(adj, x, r_max, dist, visited);
    std::fill(layer.begin(), layer.end(), 0);
    for (Vertex v : visited) ++layer[dist[v]];
    std::uint64_t cum = 0;
    for (std::uint32_t r = 1; r <= r_max; ++r) {
      cum += layer[r - 1];
      c[r] = std::max(c[r], cum);
      s[r] = std::max(s[r], layer[r]);
    }
    for (Vertex v : visited) dist[v] = kUnreached;
  };

  std::size_t candidates = 0;
  for (Vertex x = 0; x < g.n; ++x) {
    if (!g.is_interior(x)) continue;
    ++candidates;
    account(g.out, x, p.c, p.s);
    account(g.in, x, p.c_top, p.s_top);
    std::uint32_t joint = 0;
    {
      // Joint degree with orientation ignored; out/in are sorted.
      std::size_t i = 0, j = 0;
      const auto& a = g.out[x];
      const auto& b = g.in[x];
      while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) ++i;
        else if (i == a.size() || b[j] < a[i]) ++j;
        else { ++i; ++j; }
        ++joint;
      }
    }
    p.delta_out = std::max<std::uint32_t>(p.delta_out, g.out[x].size());
    p.delta_in = std::max<std::uint32_t>(p.delta_in, g.in[x].size());
    p.delta = std::max(p.delta, joint);
  }
  if (candidates == 0) {
    throw std::invalid_argument("growth_profile: window has no interior vertices");
  }
  return p;
}

}  // namespace boolperc
