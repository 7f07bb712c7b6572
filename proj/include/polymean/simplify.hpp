#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "polymean/geom.hpp"

namespace polymean {

/// Where simplification vertices may come from.
enum class VertexMode {
  InputVertices,    // vertices of any input curve
  OneCurveVertices, // vertices of the first curve only
  AnyPlanePoint,    // any point; realised through event points on the curves
};

const char* to_string(VertexMode mode);
std::optional<VertexMode> parse_vertex_mode(const std::string& name);

enum class ShortcutKind { VertexPair, Extension, Reflection };

/// A candidate link of a simplification. `curve` names the curve whose vertices
/// spawned it; extensions and reflections end on an edge of `hit_curve`.
struct Shortcut {
  Segment segment;
  ShortcutKind kind = ShortcutKind::VertexPair;
  std::size_t curve = 0;
  std::size_t from_vertex = 0;
  std::size_t to_vertex = 0;
  std::size_t hit_curve = 0;
  CurvePosition hit;
};

struct ShortcutOptions {
  /// Extensions/reflections are kept only while they stay within this error of the
  /// curve they run along (local Fréchet test). Infinity keeps every crossing.
  double feasible_within = std::numeric_limits<double>::infinity();
  bool reflections = true;
};

/// Shortcuts available to a simplification of P (and Q) in the given mode.
/// Identical P and Q are treated as a single curve.
std::vector<Shortcut> shortcut_candidates(const Polyline& p, const Polyline& q, VertexMode mode,
                                          const ShortcutOptions& options = {},
                                          const Tolerance& tol = {});

/// A point lying on one of the curves, used as a curve-restricted vertex candidate.
struct CurvePoint {
  std::size_t curve = 0;
  CurvePosition pos;
  Point point;
  double arc = 0.0;
  bool is_vertex = false;
};

/// Vertices plus events (disk/edge crossings at radius eps and feasible shortcut
/// extension crossings). Non-vertex arc positions are rounded to multiples of
/// `delta` when delta > 0; duplicates are merged. Sorted by (curve, arc).
std::vector<CurvePoint> event_points(const std::vector<Polyline>& curves, double eps, double delta,
                                     const Tolerance& tol = {});

enum class NodeKind { Source, Sink, Vertex, Event };

/// Node of the event graph: a candidate plane point together with the position it
/// is matched to on each curve (one FSD grid-line point per curve). Nodes are split
/// by the direction of the incoming link when a straight continuation leaves them.
struct EventNode {
  NodeKind kind = NodeKind::Event;
  std::size_t candidate = 0;
  std::vector<CurvePosition> positions;
  Point plane_point;
  std::optional<Point> dir_class;
  std::size_t base = 0; // node id before the direction split
};

struct EventEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  int weight = 1;
};

struct EventGraph {
  std::vector<EventNode> nodes;
  std::vector<EventEdge> edges;
  std::size_t source = 0;
  std::size_t sink = 0;
  std::size_t base_nodes = 0;
  std::size_t candidates = 0;

  /// Edge ids leaving each node, in insertion order.
  std::vector<std::vector<std::size_t>> out_edges() const;
};

struct Candidate {
  Point point;
  NodeKind kind = NodeKind::Event;
};

/// Input of the generic builder: a path from a start candidate to an end candidate
/// whose every link stays within eps[i] of curve i under one monotone matching per curve.
struct EventGraphProblem {
  std::vector<Polyline> curves;
  std::vector<double> eps;
  std::vector<Candidate> candidates;
  /// Paths must visit candidates in increasing index order.
  bool ordered = false;
  std::optional<std::size_t> start;
  std::optional<std::size_t> end;
  std::size_t max_nodes = 1'000'000;
  /// Off: every link costs 1 and nodes are not split by incoming direction. Every
  /// straight chain between candidates is then a single direct link, so the
  /// min-link count is unchanged.
  bool split_directions = true;
  /// Nodes this many links from a start are not expanded. Needs split_directions off.
  std::optional<std::size_t> max_links;
};

EventGraph build_event_graph(const EventGraphProblem& problem, const Tolerance& tol = {});

/// Event graph of a simplification of P that stays within eps of P and Q.
/// P == Q is the self-simplification graph with endpoints fixed to P's.
EventGraph build_event_graph(const Polyline& p, const Polyline& q, double eps, VertexMode mode,
                             const Tolerance& tol = {}, double delta = 0.0);

struct LinkPath {
  std::vector<std::size_t> nodes; // source ... sink
  int weight = 0;
};

/// 0/1 shortest path from source to sink; among optimal paths the one whose node
/// sequence is lexicographically smallest. Throws Error(Unreachable).
LinkPath min_link_path(const EventGraph& graph);

/// Plane polyline of a path, with straight continuations merged.
std::vector<Point> path_vertices(const EventGraph& graph, const LinkPath& path);

struct SimplificationResult {
  Polyline curve;
  std::size_t links = 0;
  double achieved_eps = 0.0;
  VertexMode mode = VertexMode::InputVertices;
  std::size_t events = 0;
};

/// Re-derives achieved_eps and links from scratch and compares within `slack`.
bool verify(const SimplificationResult& result, const Polyline& original, double slack = 1e-6,
            const Tolerance& tol = {});

/// Fewest links with Fréchet error at most eps (global matching).
SimplificationResult min_k_simplify(const Polyline& p, double eps, VertexMode mode,
                                    const Tolerance& tol = {}, double delta = 0.0);

/// Smallest candidate error whose minimum link count is at most k.
SimplificationResult min_eps_simplify(const Polyline& p, std::size_t k, double delta, VertexMode mode,
                                      const Tolerance& tol = {});

/// Augmented-vertex dynamic program; links at most twice the optimum. Throws Error(Failed).
SimplificationResult bicriteria_simplify(const Polyline& p, double eps, const Tolerance& tol = {},
                                         double delta = 0.0);

/// Sweeps the curve, extending each link as far as the next vertex keeps it feasible.
SimplificationResult greedy_disk_simplify(const Polyline& p, double eps, const Tolerance& tol = {});

/// Shortcut graph over input vertices with local Fréchet feasibility; BFS.
SimplificationResult imai_iri_simplify(const Polyline& p, double eps, const Tolerance& tol = {});

/// Smallest error (multiple of delta, or a critical value) for which imai_iri needs at most k links.
SimplificationResult imai_iri_min_eps(const Polyline& p, std::size_t k, double delta,
                                      const Tolerance& tol = {});

} // namespace polymean
