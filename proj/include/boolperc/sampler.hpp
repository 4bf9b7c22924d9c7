#pragma once

#include <cstdint>
#include <vector>

#include "boolperc/graph.hpp"
#include "boolperc/radius_law.hpp"
#include "boolperc/rng.hpp"

// Direct i.i.d. realization of the model: per-vertex activation bits and
// radii, the wet set W (union of balls around active centers), its weak
// components, and the root component. All randomness is counter-addressed by
// the vertex's stable id, so a draw depends only on (seed, vertex identity),
// never on traversal order or window extent.

namespace boolperc {

struct SampleOptions {
  /// Extra ceiling on simulated radii; 0 means none. The effective ceiling
  /// also honors the law's cap and the window halo, whichever is smallest.
  std::uint32_t radius_cap = 0;
};

struct FieldDraw {
  std::vector<std::uint8_t> sigma;    ///< activation bits, one per vertex
  std::vector<std::uint32_t> radius;  ///< clamped radii, drawn for every vertex
  std::uint32_t cap_applied = 0;      ///< ceiling the radii were clamped to
  std::uint64_t active_count = 0;
  std::uint32_t max_radius = 0;       ///< largest radius among active vertices
};

struct WetSample {
  FieldDraw field;
  std::vector<Vertex> wet;                      ///< sorted union of active balls
  std::vector<std::vector<Vertex>> components;  ///< weak components, each sorted
  std::vector<Vertex> root_component;           ///< component of g.root, maybe empty
  bool root_wet = false;
  /// True when the root component reaches the outermost interior shell or
  /// beyond: the window can no longer certify the component's full size, so
  /// consumers treat it as right-censored at the observed size.
  bool escaped = false;
};

/// Smallest of the law cap, the option cap, and the window halo. Throws when
/// all three are absent (an uncapped law on an unwindowed graph has no finite
/// ceiling to clamp to).
std::uint32_t effective_cap(const GraphView& g, const RadiusLaw& law,
                            const SampleOptions& opt = {});

/// sigma_v ~ Bernoulli(p), radius_v ~ min(law, ceiling), all independent.
FieldDraw draw_field(const GraphView& g, const RadiusLaw& law, double p,
                     const RandomStream& replicate_stream, const SampleOptions& opt = {});

/// Union of balls of the active vertices, sorted.
std::vector<Vertex> assemble_wet(const GraphView& g, const FieldDraw& field);

/// Weak component of x inside the sorted set `wet`; empty when x is dry.
std::vector<Vertex> wet_component(const GraphView& g, const std::vector<Vertex>& wet,
                                  Vertex x);

/// True when the component (sorted) touches a non-interior vertex or a
/// boundary marker. Always false on graphs without a window.
bool escaped_component(const GraphView& g, const std::vector<Vertex>& component);

/// Full realization: field, wet set, component partition, root component,
/// escape flag. Deterministic given (replicate_stream, graph, law, p).
WetSample sample_direct(const GraphView& g, const RadiusLaw& law, double p,
                        const RandomStream& replicate_stream, const SampleOptions& opt = {});

/// #{x : sigma_x = 1 and d(x, y) < radius_x}, via a transpose search from y.
std::uint64_t count_covering_balls(const GraphView& g, const FieldDraw& field, Vertex y);

}  // namespace boolperc
