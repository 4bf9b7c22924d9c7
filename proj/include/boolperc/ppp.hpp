#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "boolperc/graph.hpp"
#include "boolperc/gw.hpp"
#include "boolperc/radius_law.hpp"
#include "boolperc/rng.hpp"

// Point-process view of the model. Instead of drawing one radius per vertex,
// every (vertex, level) pair carries an independent Poisson count with mean
// lambda_level, and a vertex's effective radius is its highest firing level.
// Balls become first-class marked objects: a key (center, radius) for the
// ball itself and (center, radius, boundary vertex) for one boundary mark.
// The layered exploration reveals marks lazily outward from a root, which is
// what makes the branching-process comparison a per-realization statement
// rather than a distributional one.

namespace boolperc {

// A marked ball. radius is canonical: balls stop growing once their
// out-shell empties, so radii r with B_r = B_{r+1} = ... collapse onto the
// first such r and the key is flagged dead_end. boundary_vertex is absent
// (kNoVertex) for the ball-level view.
struct MarkedBallKey {
  Vertex center = kNoVertex;
  std::uint32_t radius = 0;
  Vertex boundary_vertex = kNoVertex;
  bool dead_end = false;
};

// Precomputed geometry: for every center, the canonical balls of radius
// 1..max_rad and their full boundaries (both edge orientations), plus the
// reverse index "which balls have vertex y on their boundary".
class BallTable {
 public:
  // cap: largest radius that can ever fire (the law's cap). Must be <= 63
  // so keys pack into 64 bits, and <= the window halo when the graph has one
  // (otherwise boundaries near the window edge would be wrong).
  BallTable(const GraphView& g, std::uint32_t cap);

  const GraphView& graph() const { return *g_; }
  std::uint32_t cap() const { return cap_; }

  // Canonical radii for center x run 1..max_rad(x).
  std::uint32_t max_rad(Vertex x) const { return centers_[x].max_rad; }
  // True when radius r at center x is the saturated (empty out-shell) ball.
  bool dead_end(Vertex x, std::uint32_t r) const {
    return centers_[x].saturated && r == centers_[x].max_rad;
  }

  // Sorted vertex span of the ball / its full boundary.
  std::pair<const Vertex*, const Vertex*> ball(Vertex x, std::uint32_t r) const;
  std::pair<const Vertex*, const Vertex*> boundary(Vertex x, std::uint32_t r) const;
  std::uint32_t ball_size(Vertex x, std::uint32_t r) const;

  // Keys (center, radius) whose boundary contains y, sorted.
  const std::vector<std::pair<Vertex, std::uint32_t>>& attached(Vertex y) const {
    return attached_[y];
  }

  // Keys (center, radius) whose ball contains v (computed on demand via a
  // transpose search: d(x, v) < r <= max_rad(x)).
  std::vector<std::pair<Vertex, std::uint32_t>> covering_keys(Vertex v) const;

  // Key packing used by the mark memos: vertex ids < 2^22, radius < 2^6.
  // The low 23 bits hold the boundary vertex plus one (0 = no boundary
  // vertex), so the ball-level key never collides with a mark-level key.
  static std::uint64_t pack2(Vertex x, std::uint32_t r) {
    return (static_cast<std::uint64_t>(r) << 45) | (static_cast<std::uint64_t>(x) << 23);
  }
  static std::uint64_t pack3(Vertex x, std::uint32_t r, Vertex y) {
    return pack2(x, r) | (static_cast<std::uint64_t>(y) + 1);
  }

 private:
  struct CenterBalls {
    std::uint32_t max_rad = 0;
    bool saturated = false;
    std::vector<std::uint32_t> ball_off;  // size max_rad + 1
    std::vector<Vertex> ball_flat;        // sorted per radius segment
    std::vector<std::uint32_t> bnd_off;
    std::vector<Vertex> bnd_flat;         // sorted per radius segment
  };

  const GraphView* g_;
  std::uint32_t cap_;
  std::vector<CenterBalls> centers_;
  std::vector<std::vector<std::pair<Vertex, std::uint32_t>>> attached_;
};

// Dense realization of the per-(vertex, level) Poisson field and the derived
// per-vertex top level Y. Counts are drawn lazily and memoized; every draw
// is a pure function of (stream, vertex stable id, level), so two
// realizations over nested windows agree on shared vertices.
class PppRealization {
 public:
  // Requires p < 1 (level-1 intensity diverges at p = 1) and a capped law
  // (levels above the cap never fire because their intensity is 0).
  PppRealization(const GraphView& g, const RadiusLaw& law, double p, RandomStream stream);

  const GraphView& graph() const { return *g_; }
  std::uint32_t cap() const { return cap_; }
  double p() const { return p_; }
  const RadiusLaw& law() const { return *law_; }

  std::uint32_t omega1(Vertex x, std::uint32_t level);
  // Highest firing level, 0 if none. Distributed like sigma_x * R_x.
  std::uint32_t Y(Vertex x);

 private:
  const GraphView* g_;
  const RadiusLaw* law_;
  double p_;
  std::uint32_t cap_;
  std::vector<RandomStream> level_streams_;  // index 1..cap
  std::vector<double> level_means_;
  std::vector<std::uint32_t> counts_;  // (x * cap + level-1), memoized
  std::vector<std::uint8_t> drawn_;
};

// Ball-level counts: packed (center, canonical radius) -> count.
struct Omega2Field {
  const BallTable* table = nullptr;
  std::unordered_map<std::uint64_t, std::uint32_t> counts;
};

// Exact pushforward of a level field: level n at center x lands on the key
// (x, min(n, max_rad(x))); saturated levels collapse onto the dead-end key.
Omega2Field omega2_from_omega1(PppRealization& real, const BallTable& table);

// Union of balls with positive count, sorted.
std::vector<Vertex> wet_from_omega2(const Omega2Field& field);

// Union of balls B_{Y_x}(x) over vertices with Y_x >= 1, sorted. Equals
// wet_from_omega2 on the pushforward of the same realization, exactly.
std::vector<Vertex> wet_from_Y(PppRealization& real, const BallTable& table);

enum class ExploreStatus { Exhausted, BudgetExceeded, WindowEscaped };

const char* to_string(ExploreStatus s);

struct ExploreBudget {
  std::uint64_t max_vertices = 100000;
  std::uint32_t max_layers = 1000;
};

// One ball-level draw made during exploration, in draw order.
struct DiscoveredBall {
  Vertex center = kNoVertex;
  std::uint32_t radius = 0;
  bool dead_end = false;
  Vertex assigned_y = kNoVertex;  // boundary vertex whose mark became omega2
  std::uint32_t omega2 = 0;
  std::uint32_t layer = 0;  // 0 = the root step
};

struct ExplorationTrace {
  Vertex root = kNoVertex;
  std::vector<std::vector<Vertex>> layers;  // C_1, C_2, ... (sorted, disjoint)
  std::vector<DiscoveredBall> balls;        // every omega2 assignment, draw order
  ExploreStatus status = ExploreStatus::Exhausted;
  std::uint64_t discovered_vertices = 0;

  // Mark memos; retained so later passes re-query instead of redrawing.
  std::unordered_map<std::uint64_t, std::uint32_t> omega3;  // pack3 key -> count
  std::unordered_map<std::uint64_t, std::uint32_t> omega2;  // pack2 key -> count

  std::uint64_t mark_draws = 0;    // omega3 draw operations performed
  bool mark_audit_ok = true;       // no key was ever drawn twice

  std::vector<Vertex> all_layer_vertices() const;  // sorted union of layers
};

// Layered exploration from the root. Step 0 draws every ball containing the
// root (marks at all boundary vertices; omega2 taken at the boundary minimum)
// and C_1 is the union of those that fired. Step n draws the balls whose
// boundary meets C_n (omega2 taken at the smallest boundary vertex inside
// C_n) and C_{n+1} collects every ball with a positive mark at some vertex
// of C_n, minus everything already visited. Requires p < 1 and a capped law;
// on windowed graphs the cap must not exceed the halo and the root must be
// interior.
ExplorationTrace explore(const BallTable& table, const RadiusLaw& law, double p,
                         Vertex root, const RandomStream& replicate_stream,
                         const ExploreBudget& budget = {});

// Fills in omega2 for every canonical key the exploration left unassigned:
// the mark at the boundary minimum (same pure-function draw the exploration
// would have made), or a direct draw when the ball has no boundary. The
// result is one complete realization extending the trace.
Omega2Field complete_omega2(const ExplorationTrace& trace, const BallTable& table,
                            const RadiusLaw& law, double p,
                            const RandomStream& replicate_stream);

// The branching process coupled to a finished exploration. Z[i] pairs with
// trace.layers[i]; one generation per recorded layer is computed (at least
// one, so an empty trace still gets its root generation).
struct GwCoupling {
  std::vector<std::uint64_t> Z;
  bool dominated = true;  // |layers[i]| <= Z[i] for every computed pair
  std::uint64_t slot_overflows = 0;  // extra slots beyond the per-radius budget
  bool budget_hit = false;           // population/generation budget stopped the run
  bool extinct = false;              // last computed generation was empty
  std::uint64_t total = 1;           // 1 + sum of Z (the root counts as 1)
};

// Builds the dominating process: every mark attached to a layer vertex is
// lifted to the full tail intensity by an independent top-up, arranged into
// per-radius slots of size max(delta * s_top_{r-1}, c_top_r) (extended when a
// vertex has more attached marks than that), padded with fresh indicators,
// with entirely fresh offspring for individuals beyond the layer. Requires
// the exploration to have finished without a window escape and the profile
// to cover the law's cap.
GwCoupling coupled_gw(const ExplorationTrace& trace, const BallTable& table,
                      const GrowthProfile& profile, const RadiusLaw& law, double p,
                      const RandomStream& replicate_stream, const GwBudget& budget = {});

}  // namespace boolperc
