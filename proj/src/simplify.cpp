#include "polymean/simplify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <set>

#include "polymean/error.hpp"
#include "polymean/frechet.hpp"

namespace polymean {

const char* to_string(VertexMode mode) {
  switch (mode) {
    case VertexMode::InputVertices: return "input";
    case VertexMode::OneCurveVertices: return "curve";
    case VertexMode::AnyPlanePoint: return "plane";
  }
  return "unknown";
}

std::optional<VertexMode> parse_vertex_mode(const std::string& name) {
  if (name == "input") return VertexMode::InputVertices;
  if (name == "curve") return VertexMode::OneCurveVertices;
  if (name == "plane") return VertexMode::AnyPlanePoint;
  return std::nullopt;
}

namespace {

void check_eps(double eps) {
  if (!std::isfinite(eps) || eps < 0)
    throw Error(ErrorKind::InvalidArgument, "eps must be finite and non-negative");
}

CurvePosition vertex_position(const Polyline& curve, std::size_t i) {
  if (i + 1 >= curve.size()) return curve.finish();
  return {i, 0.0};
}

Point unit(Point d) { return d / norm(d); }

// Extensions of the shortcut a -> b of `curve` beyond b, plus one reflection at
// every edge they hit. Only same-curve crossings are tested for local feasibility.
void add_extensions(const std::vector<Polyline>& curves, std::size_t c, std::size_t a, std::size_t b,
                    const ShortcutOptions& options, const Tolerance& tol, std::vector<Shortcut>& out) {
  const Polyline& curve = curves[c];
  const Point origin = curve[b];
  const Point dir = curve[b] - curve[a];
  const bool filter = std::isfinite(options.feasible_within);
  for (std::size_t h = 0; h < curves.size(); ++h) {
    const Polyline& target = curves[h];
    const std::size_t first = h == c ? b : 0;
    for (std::size_t e = first; e < target.edge_count(); ++e) {
      auto t = ray_segment_crossing(origin, dir, target.edge(e), tol);
      if (!t) continue;
      CurvePosition hit = target.canonical({e, *t});
      Point x = target.at(hit);
      if (filter) {
        bool ok = h == c ? segment_frechet_decide({curve[a], x}, curve, vertex_position(curve, a), hit,
                                                  options.feasible_within, tol)
                         : point_polyline_distance(x, curve) <= options.feasible_within + tol.abs_tol;
        if (!ok) continue;
      }
      out.push_back({{curve[a], x}, ShortcutKind::Extension, c, a, b, h, hit});
      if (!options.reflections || h != c) continue;
      Point rdir = reflect_direction(dir, target.edge(e).b - target.edge(e).a);
      for (std::size_t f = e + 1; f < target.edge_count(); ++f) {
        auto s = ray_segment_crossing(x, rdir, target.edge(f), tol);
        if (!s) continue;
        CurvePosition hit2 = target.canonical({f, *s});
        Point y = target.at(hit2);
        if (filter && !segment_frechet_decide({x, y}, target, hit, hit2, options.feasible_within, tol))
          continue;
        out.push_back({{x, y}, ShortcutKind::Reflection, c, a, b, h, hit2});
      }
    }
  }
}

} // namespace

std::vector<Shortcut> shortcut_candidates(const Polyline& p, const Polyline& q, VertexMode mode,
                                          const ShortcutOptions& options, const Tolerance& tol) {
  std::vector<Polyline> curves{p};
  if (!(p == q)) curves.push_back(q);

  std::vector<Shortcut> out;
  // Vertex list of the mode: P's vertices, then Q's for InputVertices.
  std::vector<std::pair<std::size_t, std::size_t>> owners;
  for (std::size_t i = 0; i < p.size(); ++i) owners.emplace_back(0, i);
  if (mode == VertexMode::InputVertices && curves.size() > 1)
    for (std::size_t i = 0; i < q.size(); ++i) owners.emplace_back(1, i);
  for (std::size_t a = 0; a < owners.size(); ++a) {
    for (std::size_t b = a + 1; b < owners.size(); ++b) {
      Point pa = curves[owners[a].first][owners[a].second];
      Point pb = curves[owners[b].first][owners[b].second];
      out.push_back({{pa, pb}, ShortcutKind::VertexPair, owners[a].first, a, b, owners[b].first,
                     vertex_position(curves[owners[b].first], owners[b].second)});
    }
  }
  if (mode != VertexMode::AnyPlanePoint) return out;

  for (std::size_t c = 0; c < curves.size(); ++c)
    for (std::size_t a = 0; a < curves[c].size(); ++a)
      for (std::size_t b = a + 1; b < curves[c].size(); ++b)
        add_extensions(curves, c, a, b, options, tol, out);
  return out;
}

std::vector<CurvePoint> event_points(const std::vector<Polyline>& curves, double eps, double delta,
                                     const Tolerance& tol) {
  check_eps(eps);
  if (!(delta >= 0) || !std::isfinite(delta))
    throw Error(ErrorKind::InvalidArgument, "delta must be finite and non-negative");

  std::vector<CurvePoint> raw;
  auto add = [&](std::size_t c, CurvePosition pos, bool is_vertex) {
    const Polyline& curve = curves[c];
    double arc = curve.arc_length_at(pos);
    if (!is_vertex && delta > 0) {
      arc = std::clamp(std::round(arc / delta) * delta, 0.0, curve.length());
      pos = curve.position_at_arc(arc);
    }
    pos = curve.canonical(pos);
    raw.push_back({c, pos, curve.at(pos), arc, is_vertex});
  };

  for (std::size_t c = 0; c < curves.size(); ++c)
    for (std::size_t i = 0; i < curves[c].size(); ++i) add(c, vertex_position(curves[c], i), true);

  // Disk boundaries around every vertex crossing every edge.
  for (const Polyline& src : curves) {
    for (const Point& v : src) {
      for (std::size_t c = 0; c < curves.size(); ++c) {
        for (std::size_t j = 0; j < curves[c].edge_count(); ++j) {
          Interval iv = ball_segment_intersection(v, eps, curves[c].edge(j), tol);
          if (iv.empty()) continue;
          if (iv.lo > 0.0 && iv.lo < 1.0) add(c, {j, iv.lo}, false);
          if (iv.hi > 0.0 && iv.hi < 1.0 && iv.hi != iv.lo) add(c, {j, iv.hi}, false);
        }
      }
    }
  }

  // Feasible shortcut extensions and their reflections.
  ShortcutOptions options;
  options.feasible_within = eps;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    std::vector<Shortcut> extra;
    for (std::size_t a = 0; a < curves[c].size(); ++a)
      for (std::size_t b = a + 1; b < curves[c].size(); ++b)
        add_extensions(curves, c, a, b, options, tol, extra);
    for (const Shortcut& s : extra) add(s.hit_curve, s.hit, false);
  }

  std::sort(raw.begin(), raw.end(), [](const CurvePoint& x, const CurvePoint& y) {
    if (x.curve != y.curve) return x.curve < y.curve;
    if (x.arc != y.arc) return x.arc < y.arc;
    return x.is_vertex > y.is_vertex;
  });
  std::vector<CurvePoint> out;
  for (const CurvePoint& cp : raw) {
    if (!out.empty() && out.back().curve == cp.curve && cp.arc - out.back().arc <= tol.abs_tol) {
      // Near-coincident points merge; a vertex always survives the merge.
      if (cp.is_vertex && !out.back().is_vertex) out.back() = cp;
      continue;
    }
    out.push_back(cp);
  }
  return out;
}

std::vector<std::vector<std::size_t>> EventGraph::out_edges() const {
  std::vector<std::vector<std::size_t>> out(nodes.size());
  for (std::size_t e = 0; e < edges.size(); ++e) out[edges[e].from].push_back(e);
  return out;
}

namespace {

struct NodeKey {
  std::size_t candidate = 0;
  std::vector<CurvePosition> positions;
};

// Topological order of base nodes: every feasible link leads to a larger key.
struct KeyLess {
  bool ordered = false;
  bool operator()(const NodeKey& a, const NodeKey& b) const {
    if (ordered) {
      if (a.candidate != b.candidate) return a.candidate < b.candidate;
      return a.positions < b.positions;
    }
    if (a.positions != b.positions) return a.positions < b.positions;
    return a.candidate < b.candidate;
  }
};

struct BaseEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Point dir;
  double angle = 0.0;
};

// Direction classes leaving one node, sorted by angle.
struct DirClasses {
  std::vector<double> angle; // representative angle per class
  std::vector<Point> dir;
};

double angle_of(Point d) { return std::atan2(d.y, d.x); }

std::optional<std::size_t> find_class(const DirClasses& classes, double a, double tol) {
  if (classes.angle.empty()) return std::nullopt;
  auto probe = [&](double x) -> std::optional<std::size_t> {
    auto it = std::lower_bound(classes.angle.begin(), classes.angle.end(), x - tol);
    if (it != classes.angle.end() && *it <= x + tol) return static_cast<std::size_t>(it - classes.angle.begin());
    return std::nullopt;
  };
  if (auto k = probe(a)) return k;
  // Directions just either side of the branch cut of atan2.
  if (a > 0) return probe(a - 2 * std::numbers::pi);
  return probe(a + 2 * std::numbers::pi);
}

} // namespace

EventGraph build_event_graph(const EventGraphProblem& pr, const Tolerance& tol) {
  tol.validate();
  const std::size_t L = pr.curves.size();
  const std::size_t C = pr.candidates.size();
  if (L == 0) throw Error(ErrorKind::InvalidArgument, "event graph needs at least one curve");
  if (pr.eps.size() != L) throw Error(ErrorKind::InvalidArgument, "one eps per curve is required");
  for (double e : pr.eps) check_eps(e);
  if (C == 0) throw Error(ErrorKind::EmptyGraph, "no vertex candidates");

  auto near_all = [&](Point c, bool at_end) {
    for (std::size_t i = 0; i < L; ++i) {
      Point target = at_end ? pr.curves[i].back() : pr.curves[i].front();
      if (distance(c, target) > pr.eps[i] + tol.abs_tol) return false;
    }
    return true;
  };
  std::vector<std::size_t> starts;
  std::vector<char> is_end(C, 0);
  for (std::size_t c = 0; c < C; ++c) {
    if (pr.start && c != *pr.start) continue;
    if (near_all(pr.candidates[c].point, false)) starts.push_back(c);
  }
  bool any_end = false;
  for (std::size_t c = 0; c < C; ++c) {
    if (pr.end && c != *pr.end) continue;
    if (near_all(pr.candidates[c].point, true)) is_end[c] = 1, any_end = true;
  }
  if (pr.max_links && pr.split_directions)
    throw Error(ErrorKind::InvalidArgument, "a link budget needs split_directions off");
  if (starts.empty()) throw Error(ErrorKind::EmptyGraph, "source blocked: no candidate near every start");
  if (!any_end) throw Error(ErrorKind::EmptyGraph, "sink blocked: no candidate near every end");

  std::map<NodeKey, std::size_t, KeyLess> index{KeyLess{pr.ordered}};
  std::vector<const NodeKey*> keys;
  auto intern = [&](NodeKey key) {
    auto [it, inserted] = index.try_emplace(std::move(key), keys.size());
    if (inserted) {
      keys.push_back(&it->first);
      if (keys.size() > pr.max_nodes) throw Error(ErrorKind::TooLarge, "event graph exceeds the node budget");
    }
    return it->second;
  };
  for (std::size_t s : starts) intern({s, std::vector<CurvePosition>(L, CurvePosition{0, 0.0})});

  // Positions within a few abs_tol (by arc length) of a vertex are moved onto it.
  auto snap = [&](const Polyline& curve, std::size_t e, double t) {
    const double len = curve.edge(e).length();
    if ((1.0 - t) * len <= 4 * tol.abs_tol) t = 1.0;
    else if (t * len <= 4 * tol.abs_tol) t = 0.0;
    return curve.canonical({e, t});
  };

  std::vector<BaseEdge> base_edges;
  std::vector<char> terminal;
  // Fewest links from a start; final once a node is reached in key order.
  std::vector<std::size_t> depth(keys.size(), 0);
  std::vector<std::vector<EdgeReach>> reach(L);
  std::vector<std::size_t> pick(L);
  std::vector<EdgeReach> scratch;

  for (auto it = index.begin(); it != index.end(); ++it) {
    const NodeKey& key = it->first;
    const std::size_t id = it->second;
    const Point c = pr.candidates[key.candidate].point;
    if (terminal.size() <= id) terminal.resize(keys.size(), 0);

    if (is_end[key.candidate]) {
      bool ok = true;
      for (std::size_t i = 0; i < L && ok; ++i) {
        sweep_segment_reach({c, c}, pr.curves[i], key.positions[i], pr.eps[i], tol, scratch);
        ok = !scratch.empty() && scratch.back().edge + 1 == pr.curves[i].edge_count() &&
             scratch.back().reach.contains(1.0);
      }
      terminal[id] = ok;
    }
    if (pr.max_links && depth[id] >= *pr.max_links) continue;

    for (std::size_t c2 = pr.ordered ? key.candidate + 1 : 0; c2 < C; ++c2) {
      if (c2 == key.candidate) continue;
      const Point d = pr.candidates[c2].point;
      if (d == c) continue;
      bool ok = true;
      for (std::size_t i = 0; i < L && ok; ++i) {
        sweep_segment_reach({c, d}, pr.curves[i], key.positions[i], pr.eps[i], tol, reach[i]);
        ok = !reach[i].empty();
      }
      if (!ok) continue;
      const Point dir = unit(d - c);
      const double ang = angle_of(dir);
      std::fill(pick.begin(), pick.end(), 0);
      for (;;) {
        NodeKey next{c2, {}};
        next.positions.reserve(L);
        for (std::size_t i = 0; i < L; ++i) {
          const EdgeReach& r = reach[i][pick[i]];
          next.positions.push_back(snap(pr.curves[i], r.edge, r.reach.lo));
        }
        bool backwards = !pr.ordered && next.positions == key.positions && c2 < key.candidate;
        if (!backwards) {
          const std::size_t to = intern(std::move(next));
          if (depth.size() < keys.size()) depth.resize(keys.size(), static_cast<std::size_t>(-1));
          depth[to] = std::min(depth[to], depth[id] + 1);
          base_edges.push_back({id, to, dir, ang});
        }
        std::size_t i = 0;
        while (i < L && ++pick[i] == reach[i].size()) pick[i++] = 0;
        if (i == L) break;
      }
    }
  }
  terminal.resize(keys.size(), 0);

  // Split nodes by incoming direction where a straight continuation leaves them.
  const std::size_t B = keys.size();
  std::vector<DirClasses> classes(B);
  if (pr.split_directions) {
    std::vector<std::vector<std::pair<double, Point>>> outs(B);
    for (const BaseEdge& e : base_edges) outs[e.from].emplace_back(e.angle, e.dir);
    for (std::size_t b = 0; b < B; ++b) {
      auto& v = outs[b];
      std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      for (const auto& [a, d] : v) {
        if (!classes[b].angle.empty() && a - classes[b].angle.back() <= tol.abs_tol) continue;
        classes[b].angle.push_back(a);
        classes[b].dir.push_back(d);
      }
    }
  }

  EventGraph g;
  g.candidates = C;
  g.base_nodes = B;
  g.nodes.reserve(B + 2);
  for (std::size_t b = 0; b < B; ++b) {
    EventNode n;
    n.candidate = keys[b]->candidate;
    n.kind = pr.candidates[n.candidate].kind == NodeKind::Vertex ? NodeKind::Vertex : NodeKind::Event;
    n.positions = keys[b]->positions;
    n.plane_point = pr.candidates[n.candidate].point;
    n.base = b;
    g.nodes.push_back(std::move(n));
  }
  // states[b][k]: node of base b entered along direction class k (npos if never).
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> states(B);
  for (std::size_t b = 0; b < B; ++b) states[b].assign(classes[b].angle.size(), npos);
  std::vector<std::size_t> target(base_edges.size());
  std::vector<std::size_t> own_class(base_edges.size());
  for (std::size_t e = 0; e < base_edges.size(); ++e) {
    const BaseEdge& be = base_edges[e];
    if (!pr.split_directions) {
      target[e] = be.to;
      continue;
    }
    own_class[e] = *find_class(classes[be.from], be.angle, tol.abs_tol);
    auto k = find_class(classes[be.to], be.angle, tol.abs_tol);
    if (!k) {
      target[e] = be.to;
      continue;
    }
    std::size_t& s = states[be.to][*k];
    if (s == npos) {
      EventNode n = g.nodes[be.to];
      n.dir_class = classes[be.to].dir[*k];
      s = g.nodes.size();
      g.nodes.push_back(std::move(n));
    }
    target[e] = s;
  }

  g.source = g.nodes.size();
  g.nodes.push_back({NodeKind::Source, 0, std::vector<CurvePosition>(L, CurvePosition{0, 0.0}), {}, {}, 0});
  g.sink = g.nodes.size();
  std::vector<CurvePosition> ends;
  for (const Polyline& curve : pr.curves) ends.push_back(curve.finish());
  g.nodes.push_back({NodeKind::Sink, 0, ends, {}, {}, 0});

  for (std::size_t s : starts) {
    NodeKey key{s, std::vector<CurvePosition>(L, CurvePosition{0, 0.0})};
    g.edges.push_back({g.source, index.at(key), 0});
  }
  for (std::size_t e = 0; e < base_edges.size(); ++e) {
    const std::size_t u = base_edges[e].from;
    g.edges.push_back({u, target[e], 1});
    for (std::size_t k = 0; k < states[u].size(); ++k) {
      if (states[u][k] == npos) continue;
      g.edges.push_back({states[u][k], target[e], k == own_class[e] ? 0 : 1});
    }
  }
  for (std::size_t b = 0; b < B; ++b) {
    if (!terminal[b]) continue;
    g.edges.push_back({b, g.sink, 0});
    for (std::size_t s : states[b])
      if (s != npos) g.edges.push_back({s, g.sink, 0});
  }
  return g;
}

EventGraph build_event_graph(const Polyline& p, const Polyline& q, double eps, VertexMode mode,
                             const Tolerance& tol, double delta) {
  check_eps(eps);
  const bool same = p == q;
  EventGraphProblem pr;
  pr.curves.push_back(p);
  if (!same) pr.curves.push_back(q);
  pr.eps.assign(pr.curves.size(), eps);
  pr.ordered = same;

  if (mode == VertexMode::AnyPlanePoint) {
    for (const CurvePoint& cp : event_points(pr.curves, eps, delta, tol))
      pr.candidates.push_back({cp.point, cp.is_vertex ? NodeKind::Vertex : NodeKind::Event});
  } else {
    std::set<Point> seen;
    for (const Point& v : p)
      if (same || seen.insert(v).second) pr.candidates.push_back({v, NodeKind::Vertex});
    if (mode == VertexMode::InputVertices && !same)
      for (const Point& v : q)
        if (seen.insert(v).second) pr.candidates.push_back({v, NodeKind::Vertex});
  }
  if (same) {
    // Candidates run along P in arc order; its endpoints are the first and last ones.
    pr.start = 0;
    pr.end = pr.candidates.size() - 1;
  }
  return build_event_graph(pr, tol);
}

namespace {

// Lexicographic order on nodes for tie-breaking between optimal paths.
bool node_less(const EventNode& a, const EventNode& b) {
  if (a.candidate != b.candidate) return a.candidate < b.candidate;
  if (a.positions != b.positions) return a.positions < b.positions;
  if (a.dir_class.has_value() != b.dir_class.has_value()) return !a.dir_class.has_value();
  if (a.dir_class && *a.dir_class != *b.dir_class) return *a.dir_class < *b.dir_class;
  return false;
}

} // namespace

LinkPath min_link_path(const EventGraph& g) {
  const std::size_t N = g.nodes.size();
  if (N == 0 || g.edges.empty()) throw Error(ErrorKind::Unreachable, "event graph is empty");

  // Distances to the sink by 0/1 BFS over reversed edges.
  std::vector<std::vector<std::size_t>> in(N);
  for (std::size_t e = 0; e < g.edges.size(); ++e) in[g.edges[e].to].push_back(e);
  constexpr int inf = std::numeric_limits<int>::max();
  std::vector<int> dist(N, inf);
  std::deque<std::size_t> dq;
  dist[g.sink] = 0;
  dq.push_back(g.sink);
  while (!dq.empty()) {
    std::size_t v = dq.front();
    dq.pop_front();
    for (std::size_t e : in[v]) {
      const EventEdge& ed = g.edges[e];
      int nd = dist[v] + ed.weight;
      if (nd < dist[ed.from]) {
        dist[ed.from] = nd;
        if (ed.weight == 0)
          dq.push_front(ed.from);
        else
          dq.push_back(ed.from);
      }
    }
  }
  if (dist[g.source] == inf) throw Error(ErrorKind::Unreachable, "no monotone path from source to sink");

  auto out = g.out_edges();
  LinkPath path;
  path.weight = dist[g.source];
  std::size_t v = g.source;
  path.nodes.push_back(v);
  while (v != g.sink) {
    std::size_t best = static_cast<std::size_t>(-1);
    for (std::size_t e : out[v]) {
      const EventEdge& ed = g.edges[e];
      if (dist[ed.to] == inf || dist[ed.to] + ed.weight != dist[v]) continue;
      if (ed.to == g.sink) {
        best = ed.to;
        break;
      }
      if (best == static_cast<std::size_t>(-1) || node_less(g.nodes[ed.to], g.nodes[best])) best = ed.to;
    }
    v = best;
    path.nodes.push_back(v);
  }
  return path;
}

std::vector<Point> path_vertices(const EventGraph& g, const LinkPath& path) {
  std::vector<Point> pts;
  for (std::size_t v : path.nodes) {
    const EventNode& n = g.nodes[v];
    if (n.kind == NodeKind::Source || n.kind == NodeKind::Sink) continue;
    if (!pts.empty() && pts.back() == n.plane_point) continue;
    // A straight continuation replaces the previous vertex.
    if (pts.size() >= 2 && collinear_continuation(pts[pts.size() - 2], pts.back(), n.plane_point))
      pts.back() = n.plane_point;
    else
      pts.push_back(n.plane_point);
  }
  return pts;
}

bool verify(const SimplificationResult& r, const Polyline& original, double slack, const Tolerance& tol) {
  if (r.links != r.curve.edge_count()) return false;
  if (r.curve.front() != original.front() || r.curve.back() != original.back()) return false;
  double d = frechet_distance(r.curve, original, tol);
  return std::fabs(d - r.achieved_eps) <= slack;
}

namespace {

SimplificationResult make_result(std::vector<Point> pts, const Polyline& p, VertexMode mode,
                                 std::size_t events, const Tolerance& tol) {
  // Merge straight continuations left over by the construction.
  std::vector<Point> merged;
  for (const Point& v : pts) {
    if (!merged.empty() && merged.back() == v) continue;
    if (merged.size() >= 2 && collinear_continuation(merged[merged.size() - 2], merged.back(), v, tol))
      merged.back() = v;
    else
      merged.push_back(v);
  }
  if (merged.size() < 2) merged = {p.front(), p.back()};
  Polyline curve(std::move(merged));
  SimplificationResult r{curve, curve.edge_count(), frechet_distance(curve, p, tol), mode, events};
  return r;
}

} // namespace

SimplificationResult min_k_simplify(const Polyline& p, double eps, VertexMode mode, const Tolerance& tol,
                                    double delta) {
  check_eps(eps);
  EventGraph g = build_event_graph(p, p, eps, mode, tol, delta);
  LinkPath path = min_link_path(g);
  return make_result(path_vertices(g, path), p, mode, g.base_nodes, tol);
}

namespace {

constexpr std::size_t kExactCriticalLimit = 40;

// Values where a shortcut's feasibility can change: vertex-vertex and vertex-edge
// distances, and (for small inputs) points of a shortcut equidistant to two vertices.
std::vector<double> critical_values(const Polyline& p, double delta, double upper) {
  const std::size_t n = p.size();
  std::vector<double> v{0.0};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) v.push_back(distance(p[i], p[j]));
    for (std::size_t j = 0; j < p.edge_count(); ++j) v.push_back(point_segment_distance(p[i], p.edge(j)));
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 2; b < n; ++b) {
      Segment s{p[a], p[b]};
      for (std::size_t i = a + 1; i < b; ++i) v.push_back(point_segment_distance(p[i], s));
      if (n > kExactCriticalLimit) continue;
      Point d = s.b - s.a;
      double len2 = dot(d, d);
      if (len2 == 0) continue;
      for (std::size_t i = a; i < b; ++i) {
        for (std::size_t j = i + 1; j <= b; ++j) {
          // Point s(t) with |s(t) - p_i| = |s(t) - p_j|.
          Point w = p[j] - p[i];
          double den = 2 * dot(d, w);
          if (den == 0) continue;
          double t = (dot(p[j], p[j]) - dot(p[i], p[i]) - 2 * dot(s.a, w)) / den;
          if (t < 0 || t > 1) continue;
          v.push_back(distance(s.at(t), p[i]));
        }
      }
    }
  }
  for (double& x : v)
    if (delta > 0) x = std::ceil(x / delta - 1e-9) * delta;
  v.push_back(upper);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  v.erase(std::upper_bound(v.begin(), v.end(), upper), v.end());
  return v;
}

template <class Solve>
SimplificationResult search_min_eps(const Polyline& p, std::size_t k, double delta, bool exact_candidates,
                                    const Tolerance& tol, Solve solve) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
  if (!(delta >= 0) || !std::isfinite(delta))
    throw Error(ErrorKind::InvalidArgument, "delta must be finite and non-negative");
  if (k >= p.edge_count()) return solve(0.0);

  double upper;
  if (p.front() != p.back()) {
    upper = frechet_distance(Polyline{p.front(), p.back()}, p, tol);
  } else {
    upper = 0.0;
    for (const Point& v : p) upper = std::max(upper, distance(v, p.front()));
  }
  if (delta > 0) upper = std::ceil(upper / delta - 1e-9) * delta;
  if (p.front() == p.back() && k == 1) throw Error(ErrorKind::Infeasible, "a closed curve needs two links");
  for (int it = 0; it < 64 && solve(upper).links > k; ++it) upper *= 2;

  std::vector<double> cand = critical_values(p, delta, upper);
  std::size_t lo = 0, hi = cand.size() - 1; // cand[hi] feasible
  SimplificationResult best = solve(cand[hi]);
  if (best.links > k) throw Error(ErrorKind::Infeasible, "no error bound reaches the link budget");
  if (SimplificationResult r = solve(cand[0]); r.links <= k) return r;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    SimplificationResult r = solve(cand[mid]);
    if (r.links <= k) {
      hi = mid;
      best = std::move(r);
    } else {
      lo = mid;
    }
  }
  if (exact_candidates && delta == 0) return best;

  // Refine between the infeasible and feasible neighbours.
  double a = cand[lo], b = cand[hi];
  for (int it = 0; it < 100; ++it) {
    double mid;
    if (delta > 0) {
      if (b - a <= delta * (1 + 1e-9)) break;
      mid = std::round(0.5 * (a + b) / delta) * delta;
      if (mid <= a || mid >= b) break;
    } else {
      if (b - a <= tol.abs_tol) break;
      mid = 0.5 * (a + b);
    }
    SimplificationResult r = solve(mid);
    if (r.links <= k) {
      b = mid;
      best = std::move(r);
    } else {
      a = mid;
    }
  }
  return best;
}

} // namespace

SimplificationResult min_eps_simplify(const Polyline& p, std::size_t k, double delta, VertexMode mode,
                                      const Tolerance& tol) {
  bool exact = mode != VertexMode::AnyPlanePoint && p.size() <= kExactCriticalLimit;
  return search_min_eps(p, k, delta, exact, tol,
                        [&](double eps) { return min_k_simplify(p, eps, mode, tol, delta); });
}

SimplificationResult bicriteria_simplify(const Polyline& p, double eps, const Tolerance& tol, double delta) {
  check_eps(eps);
  if (eps <= 0) throw Error(ErrorKind::InvalidArgument, "bicriteria simplification needs eps > 0");
  std::vector<CurvePoint> aug = event_points({p}, eps, delta, tol);
  const std::size_t m = aug.size();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  constexpr int inf = std::numeric_limits<int>::max();
  std::vector<int> cost(m, inf);
  std::vector<std::size_t> prev(m, none);
  cost[0] = 0;
  for (std::size_t b = 1; b < m; ++b) {
    for (std::size_t a = 0; a < b; ++a) {
      if (cost[a] == inf || aug[a].point == aug[b].point) continue;
      if (!segment_frechet_decide({aug[a].point, aug[b].point}, p, aug[a].pos, aug[b].pos, eps, tol)) continue;
      bool straight = prev[a] != none &&
                      collinear_continuation(aug[prev[a]].point, aug[a].point, aug[b].point, tol);
      int c = cost[a] + (straight ? 0 : 1);
      if (c < cost[b]) {
        cost[b] = c;
        prev[b] = a;
      }
    }
  }
  if (cost[m - 1] == inf) throw Error(ErrorKind::Failed, "FAILED: no feasible augmented path");
  std::vector<Point> pts;
  for (std::size_t v = m - 1; v != none; v = prev[v]) pts.push_back(aug[v].point);
  std::reverse(pts.begin(), pts.end());
  return make_result(std::move(pts), p, VertexMode::AnyPlanePoint, m, tol);
}

SimplificationResult greedy_disk_simplify(const Polyline& p, double eps, const Tolerance& tol) {
  check_eps(eps);
  const std::size_t n = p.size();
  std::vector<Point> pts{p.front()};
  std::size_t anchor = 0;
  while (anchor + 1 < n) {
    std::size_t next = anchor + 1;
    while (next + 1 < n && segment_frechet_decide({p[anchor], p[next + 1]}, p, vertex_position(p, anchor),
                                                  vertex_position(p, next + 1), eps, tol))
      ++next;
    pts.push_back(p[next]);
    anchor = next;
  }
  return make_result(std::move(pts), p, VertexMode::InputVertices, n, tol);
}

SimplificationResult imai_iri_simplify(const Polyline& p, double eps, const Tolerance& tol) {
  check_eps(eps);
  const std::size_t n = p.size();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(n, none), prev(n, none);
  std::deque<std::size_t> queue{0};
  dist[0] = 0;
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist[j] != none || p[i] == p[j]) continue;
      if (!segment_frechet_decide({p[i], p[j]}, p, vertex_position(p, i), vertex_position(p, j), eps, tol))
        continue;
      dist[j] = dist[i] + 1;
      prev[j] = i;
      queue.push_back(j);
    }
  }
  if (dist[n - 1] == none) throw Error(ErrorKind::Unreachable, "no shortcut path to the last vertex");
  std::vector<Point> pts;
  for (std::size_t v = n - 1; v != none; v = prev[v]) pts.push_back(p[v]);
  std::reverse(pts.begin(), pts.end());
  return make_result(std::move(pts), p, VertexMode::InputVertices, n, tol);
}

SimplificationResult imai_iri_min_eps(const Polyline& p, std::size_t k, double delta, const Tolerance& tol) {
  return search_min_eps(p, k, delta, p.size() <= kExactCriticalLimit, tol,
                        [&](double eps) { return imai_iri_simplify(p, eps, tol); });
}

} // namespace polymean
