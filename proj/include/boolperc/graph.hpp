#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

// Bounded-degree directed graphs with optional window metadata, plus the
// ball / boundary / growth machinery everything else is built on.
//
// Conventions used throughout:
//   - the ball of radius r around x collects vertices at out-distance
//     strictly below r, so ball(x, 0) is empty and ball(x, 1) = {x};
//   - the transpose ball uses in-distances (y is in ball(x, r) exactly when
//     x is in transpose_ball(y, r));
//   - sphere counts s_r are vertices at distance exactly r, with s_0 = 1.
//
// Window semantics: generated graphs can carry an interior/halo split. The
// interior approximates the infinite graph; the halo is a buffer of the
// stated graph-distance thickness. Growth statistics are taken over interior
// vertices only, and reject any radius the halo cannot protect.

namespace boolperc {

using Vertex = std::uint32_t;

constexpr Vertex kNoVertex = static_cast<Vertex>(-1);

struct GraphView {
  std::uint32_t n = 0;
  bool directed = false;
  std::vector<std::vector<Vertex>> out;  ///< out-neighbors, sorted, no duplicates
  std::vector<std::vector<Vertex>> in;   ///< in-neighbors, sorted, no duplicates

  /// Interior flags; empty means every vertex is interior (no window).
  std::vector<std::uint8_t> interior;
  /// Outermost interior shell; the escape detectors watch these vertices.
  std::vector<Vertex> boundary_markers;
  /// Halo thickness in graph distance; 0 means no halo was built.
  std::uint32_t halo = 0;
  /// Canonical root (window center for generated families, 0 otherwise).
  Vertex root = 0;
  /// Stable per-vertex ids used as randomness counters. Generated families
  /// key these to geometry (e.g. lattice coordinates) so that enlarging a
  /// window keeps the randomness of shared vertices fixed.
  std::vector<std::uint64_t> stable_id;

  std::uint32_t max_out_degree = 0;
  std::uint32_t max_in_degree = 0;
  std::uint32_t max_degree = 0;  ///< joint neighbor count, orientation ignored

  bool is_interior(Vertex v) const { return interior.empty() || interior[v] != 0; }
  bool has_window() const { return !interior.empty(); }
};

struct BuildOptions {
  std::uint32_t degree_cap = 4096;     ///< reject graphs with a fatter vertex
  std::uint32_t vertex_cap = 1 << 22;  ///< reject absurdly large windows
};

/// Assemble a GraphView from an edge list. Undirected edges are symmetrized
/// (out and in coincide). Duplicate edges collapse; self-loops are dropped.
GraphView build_graph(std::uint32_t n, const std::vector<std::pair<Vertex, Vertex>>& edges,
                      bool directed, const BuildOptions& opts = {});

/// Nearest-neighbor lattice box in the given dimension (1..3). The window
/// spans coordinates in [-(half_width+halo), half_width+halo] per axis; the
/// interior is the inner box of half-width half_width. Root is the origin.
GraphView z_window(unsigned dimension, unsigned half_width, unsigned halo,
                   const BuildOptions& opts = {});

/// Ball of the infinite (branching+1)-regular tree around a root, with every
/// edge oriented toward one fixed end: each vertex has out-degree 1 (its
/// parent direction) and in-degree `branching`. The window holds vertices
/// within undirected distance depth+halo of the root; the interior is the
/// ball of radius depth.
GraphView oriented_tree_ball(unsigned branching, unsigned depth, unsigned halo,
                             const BuildOptions& opts = {});

/// Load a graph from a text file: first line "directed" or "undirected",
/// then one "u v" pair per line (0-based). Throws std::runtime_error with
/// the offending line number on parse errors.
GraphView edge_list(const std::string& path, const BuildOptions& opts = {});

/// Vertices at out-distance < r from x, sorted. r = 0 gives the empty set.
std::vector<Vertex> ball(const GraphView& g, Vertex x, std::uint32_t r);

/// Vertices at in-distance < r from x, sorted.
std::vector<Vertex> transpose_ball(const GraphView& g, Vertex x, std::uint32_t r);

enum class BoundaryMode { Plus, Minus, Both };

/// Outer boundary of a vertex set: Plus collects out-neighbors of the set
/// not in it, Minus collects in-neighbors, Both their union. `set` must be
/// sorted. Result is sorted.
std::vector<Vertex> boundary(const GraphView& g, const std::vector<Vertex>& set,
                             BoundaryMode mode);

struct GrowthProfile {
  std::uint32_t r_max = 0;
  std::uint32_t delta_out = 0;
  std::uint32_t delta_in = 0;
  std::uint32_t delta = 0;
  // Indexed by radius r in [0, r_max]. c[0] = 0 and s[0] = 1 by convention.
  std::vector<std::uint64_t> c;      ///< sup ball sizes
  std::vector<std::uint64_t> s;      ///< sup sphere sizes
  std::vector<std::uint64_t> c_top;  ///< sup transpose ball sizes
  std::vector<std::uint64_t> s_top;  ///< sup transpose sphere sizes

  /// Slot width max(delta * s_top[r-1], c_top[r]) used by the branching
  /// domination; r in [1, r_max].
  std::uint64_t mark_slots(std::uint32_t r) const;
};

/// Suprema of ball/sphere sizes up to r_max, over interior vertices when a
/// window is declared (and over everything otherwise). If the graph carries
/// a halo thinner than r_max the window cannot stand in for the infinite
/// graph at that radius and the call throws std::invalid_argument.
GrowthProfile growth_profile(const GraphView& g, std::uint32_t r_max);

}  // namespace boolperc
