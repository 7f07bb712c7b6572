#include "polymean/pmean.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "polymean/error.hpp"
#include "polymean/frechet.hpp"

namespace polymean {

PExponent::PExponent(double p) : p_(p) {
  if (std::isinf(p) && p > 0) {
    infinite_ = true;
    return;
  }
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must be at least 1");
}

PExponent PExponent::infinity() { return PExponent(std::numeric_limits<double>::infinity()); }

PExponent PExponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidArgument, "p must be a number >= 1 or 'inf': " + text);
  }
  if (used != text.size()) throw Error(ErrorKind::InvalidArgument, "p must be a number >= 1 or 'inf': " + text);
  return PExponent(v);
}

std::string PExponent::str() const {
  if (infinite_) return "inf";
  std::string s = std::to_string(p_);
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  return s;
}

double lp_norm(std::span<const double> values, PExponent p) {
  if (p.is_infinite()) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
  }
  if (p.value() == 1.0) {
    double s = 0.0;
    for (double v : values) s += std::fabs(v);
    return s;
  }
  // Scale by the largest entry to keep large p from overflowing.
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : values) s += std::pow(std::fabs(v) / m, p.value());
  return m * std::pow(s, 1.0 / p.value());
}

const char* to_string(PMeanAlgorithm algorithm) {
  switch (algorithm) {
    case PMeanAlgorithm::TwoCurveExact: return "two-curve";
    case PMeanAlgorithm::Pairwise: return "pairwise";
    case PMeanAlgorithm::SimplifyThenMean: return "simplify-then-mean";
    case PMeanAlgorithm::ExactSmall: return "exact-small";
    case PMeanAlgorithm::Chunked: return "chunked";
  }
  return "unknown";
}

namespace {

std::vector<double> distances_to(const Polyline& m, std::span<const Polyline> curves, const Tolerance& tol) {
  std::vector<double> d;
  d.reserve(curves.size());
  for (const Polyline& c : curves) d.push_back(frechet_distance(m, c, tol));
  return d;
}

void check_curves(std::span<const Polyline> curves, std::size_t min_count) {
  if (curves.size() < min_count)
    throw Error(ErrorKind::InvalidArgument,
                "at least " + std::to_string(min_count) + " input curves are required");
}

// Merges repeated points and straight continuations; a point-like result becomes
// a zero-length-free two-vertex curve only when the input allows it.
Polyline clean_polyline(const std::vector<Point>& pts, const Tolerance& tol) {
  std::vector<Point> out;
  for (const Point& v : pts) {
    if (!out.empty() && distance(out.back(), v) <= 0.0) continue;
    if (out.size() >= 2 && collinear_continuation(out[out.size() - 2], out.back(), v, tol))
      out.back() = v;
    else
      out.push_back(v);
  }
  if (out.size() < 2) throw Error(ErrorKind::Infeasible, "mean curve degenerates to a single point");
  return Polyline(std::move(out));
}

PMeanResult finish(Polyline curve, std::span<const Polyline> curves, PExponent p, PMeanAlgorithm algorithm,
                   const Tolerance& tol) {
  PMeanResult r(std::move(curve));
  r.algorithm = algorithm;
  r.per_curve_distance = distances_to(r.curve, curves, tol);
  r.cost = lp_norm(r.per_curve_distance, p);
  return r;
}

// Minimum enclosing circle, randomised incremental with a fixed shuffle seed.
Point enclosing_center(std::vector<Point> pts, const Tolerance& tol) {
  std::mt19937 rng(12345);
  std::shuffle(pts.begin(), pts.end(), rng);
  Point c = pts[0];
  double r = 0.0;
  auto outside = [&](Point q) { return distance(q, c) > r + tol.abs_tol; };
  auto circum = [&](Point a, Point b, Point d) {
    Point ab = b - a, ad = d - a;
    double den = 2.0 * cross(ab, ad);
    if (std::fabs(den) <= 1e-18 * norm(ab) * norm(ad)) {
      // Collinear: the farthest pair spans the circle.
      std::pair<Point, Point> best{a, b};
      for (auto pr : {std::pair{a, d}, std::pair{b, d}})
        if (distance(pr.first, pr.second) > distance(best.first, best.second)) best = pr;
      c = midpoint(best.first, best.second);
      r = distance(best.first, best.second) / 2;
      return;
    }
    double ux = (ad.y * dot(ab, ab) - ab.y * dot(ad, ad)) / den;
    double uy = (ab.x * dot(ad, ad) - ad.x * dot(ab, ab)) / den;
    c = a + Point{ux, uy};
    r = std::max({distance(c, a), distance(c, b), distance(c, d)});
  };
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!outside(pts[i])) continue;
    c = pts[i];
    r = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      if (!outside(pts[j])) continue;
      c = midpoint(pts[i], pts[j]);
      r = distance(pts[i], pts[j]) / 2;
      for (std::size_t k = 0; k < j; ++k)
        if (outside(pts[k])) circum(pts[i], pts[j], pts[k]);
    }
  }
  return c;
}

// Weiszfeld iteration with the Vardi-Zhang step off coinciding input points.
Point geometric_median(std::span<const Point> pts, Point x, double stop) {
  for (int it = 0; it < 1000; ++it) {
    Point num{0, 0};
    double den = 0.0;
    Point pull{0, 0};
    bool on_point = false;
    for (const Point& t : pts) {
      double d = distance(x, t);
      if (d <= stop) {
        on_point = true;
        continue;
      }
      num = num + t / d;
      den += 1.0 / d;
      pull = pull + (t - x) / d;
    }
    if (den == 0.0) return x;
    Point next;
    if (on_point) {
      double len = norm(pull);
      std::size_t hits = 0;
      for (const Point& t : pts) hits += distance(x, t) <= stop;
      if (len <= static_cast<double>(hits)) return x;
      next = x + ((len - static_cast<double>(hits)) / den) * (pull / len);
    } else {
      next = num / den;
    }
    if (distance(next, x) <= stop) return next;
    x = next;
  }
  return x;
}

Point descent_center(std::span<const Point> pts, double p, Point x, double stop) {
  auto f = [&](Point y) {
    double s = 0.0;
    for (const Point& t : pts) s += std::pow(distance(y, t), p);
    return s;
  };
  double step = 1.0;
  double fx = f(x);
  for (int it = 0; it < 20000; ++it) {
    Point g{0, 0};
    for (const Point& t : pts) {
      double d = distance(x, t);
      if (d == 0.0) continue;
      g = g + (p * std::pow(d, p - 2.0)) * (x - t);
    }
    double gn = norm(g);
    if (gn <= stop) break;
    step = std::min(step * 2.0, 1.0);
    Point y = x - step * g;
    double fy = f(y);
    while (fy > fx - 0.5 * step * gn * gn && step > 1e-30) {
      step *= 0.5;
      y = x - step * g;
      fy = f(y);
    }
    if (distance(x, y) <= stop * 1e-3) {
      x = y;
      break;
    }
    x = y;
    fx = fy;
  }
  return x;
}

} // namespace

Point lp_center(std::span<const Point> points, PExponent p, const Tolerance& tol) {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "lp_center needs at least one point");
  if (points.size() == 1) return points[0];
  if (points.size() == 2 || (!p.is_infinite() && p.value() == 2.0)) {
    if (points.size() == 2) return midpoint(points[0], points[1]);
    Point s{0, 0};
    for (const Point& q : points) s = s + q;
    return s / static_cast<double>(points.size());
  }
  if (p.is_infinite()) return enclosing_center({points.begin(), points.end()}, tol);

  // Iterate in a unit-scale frame so the stopping rule is scale free.
  Point lo = points[0], hi = points[0];
  for (const Point& q : points) {
    lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
    hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
  }
  double scale = std::max(hi.x - lo.x, hi.y - lo.y);
  if (scale == 0.0) return points[0];
  std::vector<Point> unit;
  for (const Point& q : points) unit.push_back((q - lo) / scale);
  Point start{0, 0};
  for (const Point& q : unit) start = start + q;
  start = start / static_cast<double>(unit.size());
  double stop = std::max(tol.abs_tol / scale, 1e-15);
  Point x = p.value() == 1.0 ? geometric_median(unit, start, stop) : descent_center(unit, p.value(), start, stop);
  return lo + scale * x;
}

double lp_norm_frechet(const Polyline& m, std::span<const Polyline> curves, PExponent p, const Tolerance& tol) {
  check_curves(curves, 1);
  return lp_norm(distances_to(m, curves, tol), p);
}

bool verify(const PMeanResult& r, std::span<const Polyline> curves, PExponent p, double slack,
            const Tolerance& tol) {
  if (r.per_curve_distance.size() != curves.size()) return false;
  std::vector<double> d = distances_to(r.curve, curves, tol);
  for (std::size_t i = 0; i < d.size(); ++i)
    if (std::fabs(d[i] - r.per_curve_distance[i]) > slack) return false;
  return std::fabs(lp_norm(d, p) - r.cost) <= slack;
}

PMeanResult two_curve_pmean(const Polyline& p, const Polyline& q, PExponent exponent, const Tolerance& tol) {
  double d = frechet_distance(p, q, tol);
  Matching m;
  try {
    m = frechet_matching(p, q, d, tol);
  } catch (const Error&) {
    m = frechet_matching(p, q, d + tol.abs_tol, tol);
  }
  std::vector<Point> mids;
  for (const MatchedPair& pair : m.pairs) mids.push_back(midpoint(pair.p, pair.q));
  const Polyline pq[] = {p, q};
  return finish(clean_polyline(mids, tol), pq, exponent, PMeanAlgorithm::TwoCurveExact, tol);
}

PMeanResult pairwise_pmean(std::span<const Polyline> curves, PExponent p, const SimplifyTarget& target,
                           const Tolerance& tol) {
  check_curves(curves, 2);
  const std::size_t L = curves.size();
  std::vector<double> dist(L * L, 0.0);
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = i + 1; j < L; ++j)
      dist[i * L + j] = dist[j * L + i] = frechet_distance(curves[i], curves[j], tol);
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < L; ++i) {
    double c = lp_norm(std::span<const double>(dist.data() + i * L, L), p);
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  Polyline m = curves[best];
  if (target.k && *target.k < m.edge_count())
    m = min_eps_simplify(m, *target.k, target.delta, VertexMode::InputVertices, tol).curve;
  else if (!target.k && target.eps > 0)
    m = min_k_simplify(m, target.eps, VertexMode::InputVertices, tol).curve;
  PMeanResult r = finish(std::move(m), curves, p, PMeanAlgorithm::Pairwise, tol);
  r.selected = best;
  return r;
}

PMeanResult simplify_then_pmean(std::span<const Polyline> curves, PExponent p, std::size_t k, double delta,
                                Simplifier simplifier, const Tolerance& tol) {
  check_curves(curves, 2);
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
  std::vector<Polyline> simplified;
  std::vector<double> errors;
  for (const Polyline& c : curves) {
    SimplificationResult s = simplifier == Simplifier::ImaiIri
                                 ? imai_iri_min_eps(c, k, delta, tol)
                                 : min_eps_simplify(c, k, delta, VertexMode::InputVertices, tol);
    simplified.push_back(s.curve);
    errors.push_back(s.achieved_eps);
  }
  Polyline m = simplified.size() == 2 ? two_curve_pmean(simplified[0], simplified[1], p, tol).curve
                                      : pairwise_pmean(simplified, p, {}, tol).curve;
  PMeanResult r = finish(std::move(m), curves, p, PMeanAlgorithm::SimplifyThenMean, tol);
  r.simplification_error = std::move(errors);
  return r;
}

namespace {

// Plane points where a mean vertex can sit for the budget e: input vertices, the
// L_p centres of the endpoint tuples, points splitting a vertex-to-edge link in the
// ratio of the two budgets, and crossings of budget circles around vertex pairs.
std::vector<Candidate> budget_candidates(std::span<const Polyline> curves, const std::vector<double>& e,
                                         PExponent p, const Tolerance& tol) {
  const std::size_t L = curves.size();
  std::vector<Point> raw;
  for (const Polyline& c : curves) raw.insert(raw.end(), c.begin(), c.end());
  std::vector<Point> starts, ends;
  for (const Polyline& c : curves) {
    starts.push_back(c.front());
    ends.push_back(c.back());
  }
  raw.push_back(lp_center(starts, p, tol));
  raw.push_back(lp_center(ends, p, tol));

  for (std::size_t a = 0; a < L; ++a) {
    for (std::size_t b = 0; b < L; ++b) {
      if (a == b) continue;
      const double r = e[a] + e[b];
      const double w = r > 0 ? e[a] / r : 0.5;
      for (const Point& v : curves[a]) {
        for (std::size_t j = 0; j < curves[b].edge_count(); ++j) {
          Segment s = curves[b].edge(j);
          std::vector<Point> qs{s.a, s.b, s.at(closest_parameter(v, s))};
          Interval iv = ball_segment_intersection(v, r, s, tol);
          if (!iv.empty()) {
            qs.push_back(s.at(iv.lo));
            qs.push_back(s.at(iv.hi));
          }
          for (const Point& q : qs) raw.push_back(v + w * (q - v));
        }
      }
      if (b < a) continue;
      for (const Point& u : curves[a]) {
        for (const Point& v : curves[b]) {
          double d = distance(u, v);
          if (d == 0.0 || d > e[a] + e[b] || d < std::fabs(e[a] - e[b])) continue;
          double x = (d * d + e[a] * e[a] - e[b] * e[b]) / (2 * d);
          double h = std::sqrt(std::max(0.0, e[a] * e[a] - x * x));
          Point dir = (v - u) / d;
          Point perp{-dir.y, dir.x};
          raw.push_back(u + x * dir + h * perp);
          raw.push_back(u + x * dir - h * perp);
        }
      }
    }
  }

  std::set<Point> seen;
  std::vector<Candidate> out;
  for (const Point& c : raw) {
    bool ok = true;
    for (std::size_t i = 0; i < L && ok; ++i) ok = point_polyline_distance(c, curves[i]) <= e[i] + tol.abs_tol;
    if (ok && seen.insert(c).second) out.push_back({c, NodeKind::Event});
  }
  return out;
}

std::optional<std::vector<Point>> budget_path(std::span<const Polyline> curves, const std::vector<double>& e,
                                              PExponent p, std::size_t k, const ExactOptions& options,
                                              const Tolerance& tol, std::size_t& events) {
  EventGraphProblem pr;
  pr.curves.assign(curves.begin(), curves.end());
  pr.eps = e;
  pr.candidates = budget_candidates(curves, e, p, tol);
  pr.max_nodes = options.max_nodes;
  pr.split_directions = false;
  pr.max_links = k;
  if (pr.candidates.empty()) return std::nullopt;
  try {
    EventGraph g = build_event_graph(pr, tol);
    LinkPath path = min_link_path(g);
    std::vector<Point> pts = path_vertices(g, path);
    if (pts.size() < 2 || pts.size() - 1 > k) return std::nullopt;
    events = g.base_nodes;
    return pts;
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::EmptyGraph || err.kind() == ErrorKind::Unreachable) return std::nullopt;
    throw;
  }
}

} // namespace

PMeanResult exact_pmean_small(std::span<const Polyline> curves, PExponent p, std::size_t k, double delta,
                              const ExactOptions& options, const Tolerance& tol) {
  check_curves(curves, 2);
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
  if (!(delta > 0) || !std::isfinite(delta)) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  if (!options.override_caps) {
    if (curves.size() > options.max_curves) throw Error(ErrorKind::TooLarge, "too many curves for the exact search");
    for (const Polyline& c : curves)
      if (c.size() > options.max_vertices) throw Error(ErrorKind::TooLarge, "curve too long for the exact search");
  }
  const std::size_t L = curves.size();

  // A feasible start: the segment between the endpoint centres, or an input curve.
  std::vector<Point> starts, ends;
  for (const Polyline& c : curves) {
    starts.push_back(c.front());
    ends.push_back(c.back());
  }
  std::optional<Polyline> best_curve;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_eps;
  auto offer = [&](const Polyline& m, std::vector<double> e) {
    double c = lp_norm(distances_to(m, curves, tol), p);
    if (c < best) {
      best = c;
      best_curve = m;
      best_eps = std::move(e);
    }
  };
  Point s0 = lp_center(starts, p, tol), e0 = lp_center(ends, p, tol);
  if (s0 != e0) {
    Polyline seg{s0, e0};
    offer(seg, distances_to(seg, curves, tol));
  }
  for (const Polyline& c : curves)
    if (c.edge_count() <= k) offer(c, distances_to(c, curves, tol));
  if (!best_curve) throw Error(ErrorKind::Infeasible, "no initial mean curve within the link budget");

  const auto steps = static_cast<std::size_t>(std::ceil(best / delta - 1e-9));
  if (std::pow(static_cast<double>(steps + 1), static_cast<double>(L - 1)) > 1e6)
    throw Error(ErrorKind::TooLarge, "delta too fine for the exact search");

  std::size_t events = 0;
  std::vector<double> e(L, 0.0);
  auto cost_of = [&](const std::vector<double>& v) { return lp_norm(v, p); };
  // Walk the first L - 1 budgets over the grid; binary search the last one.
  std::vector<std::size_t> idx(L - 1, 0);
  for (;;) {
    for (std::size_t i = 0; i + 1 < L; ++i) e[i] = static_cast<double>(idx[i]) * delta;
    e[L - 1] = 0.0;
    bool prefix_ok = cost_of(e) < best;
    if (prefix_ok) {
      std::size_t lo = 0, hi = steps;
      while (hi > 0) {
        e[L - 1] = static_cast<double>(hi) * delta;
        if (cost_of(e) < best) break;
        --hi;
      }
      e[L - 1] = static_cast<double>(hi) * delta;
      std::size_t found_events = 0;
      auto top = budget_path(curves, e, p, k, options, tol, found_events);
      if (top) {
        std::vector<Point> pts = *top;
        while (lo < hi) {
          std::size_t mid = (lo + hi) / 2;
          e[L - 1] = static_cast<double>(mid) * delta;
          std::size_t ev = 0;
          auto r = budget_path(curves, e, p, k, options, tol, ev);
          if (r) {
            hi = mid;
            pts = std::move(*r);
            found_events = ev;
          } else {
            lo = mid + 1;
          }
        }
        e[L - 1] = static_cast<double>(hi) * delta;
        double before = best;
        offer(clean_polyline(pts, tol), e);
        if (best < before) events = found_events;
      }
    }
    std::size_t i = 0;
    while (i + 1 < L && ++idx[i] > steps) idx[i++] = 0;
    if (i + 1 == L) break;
  }

  PMeanResult r = finish(*best_curve, curves, p, PMeanAlgorithm::ExactSmall, tol);
  r.eps = best_eps;
  r.events = events;
  return r;
}

std::vector<std::pair<std::size_t, std::size_t>> chunk_ranges(std::size_t n, std::size_t chunk_size) {
  if (chunk_size < 2) throw Error(ErrorKind::InvalidArgument, "chunk size must be at least 2");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t s = 0; s + 1 < n; s += chunk_size - 1) out.emplace_back(s, std::min(s + chunk_size - 1, n - 1));
  return out;
}

namespace {

Polyline sub_curve(const Polyline& c, std::size_t first, std::size_t last) {
  auto v = c.vertices();
  return Polyline(std::vector<Point>(v.begin() + static_cast<std::ptrdiff_t>(first),
                                     v.begin() + static_cast<std::ptrdiff_t>(last) + 1));
}

void append(std::vector<Point>& out, const Polyline& piece) {
  for (const Point& v : piece)
    if (out.empty() || out.back() != v) out.push_back(v);
}

} // namespace

PMeanResult chunked_pmean(std::span<const Polyline> curves, std::size_t chunk_size, double eps, double delta,
                          PExponent p, const ChunkOptions& options, const Tolerance& tol) {
  check_curves(curves, 1);
  if (chunk_size < 2) throw Error(ErrorKind::InvalidArgument, "chunk size must be at least 2");
  if (!std::isfinite(eps) || eps < 0) throw Error(ErrorKind::InvalidArgument, "eps must be non-negative");
  const std::size_t L = curves.size();
  std::vector<Point> joined;
  double bound = 0.0;
  std::size_t events = 0;
  std::size_t chunks = 0;

  if (L == 1) {
    const Polyline& c = curves[0];
    auto simplify = [&](const Polyline& piece) {
      if (options.bicriteria) return bicriteria_simplify(piece, eps, tol, delta);
      return min_k_simplify(piece, eps, VertexMode::AnyPlanePoint, tol, delta);
    };
    for (auto [first, last] : chunk_ranges(c.size(), chunk_size)) {
      Polyline piece = sub_curve(c, first, last);
      double pre = 0.0;
      if (options.presimplify) {
        SimplificationResult s = min_k_simplify(piece, eps, VertexMode::InputVertices, tol);
        pre = s.achieved_eps;
        piece = s.curve;
      }
      SimplificationResult s = simplify(piece);
      bound += pre + s.achieved_eps;
      events += s.events;
      append(joined, s.curve);
      ++chunks;
    }
    Polyline out(joined);
    if (options.merge) {
      SimplificationResult s = simplify(out);
      bound += s.achieved_eps;
      events += s.events;
      out = s.curve;
    }
    PMeanResult r = finish(std::move(out), curves, p, PMeanAlgorithm::Chunked, tol);
    r.error_bound = bound;
    r.events = events;
    r.chunks = chunks;
    return r;
  }

  // Several curves: cut each at proportional vertex indices into the same number of chunks.
  std::size_t count = 0, shortest = std::numeric_limits<std::size_t>::max();
  for (const Polyline& c : curves) {
    count = std::max(count, chunk_ranges(c.size(), chunk_size).size());
    shortest = std::min(shortest, c.edge_count());
  }
  count = std::min(count, shortest);
  std::vector<std::vector<double>> piece_cost(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<Polyline> pieces;
    for (const Polyline& c : curves) {
      double edges = static_cast<double>(c.edge_count());
      auto at = [&](std::size_t j) {
        return static_cast<std::size_t>(std::llround(static_cast<double>(j) * edges / static_cast<double>(count)));
      };
      pieces.push_back(sub_curve(c, at(k), at(k + 1)));
    }
    PMeanResult part = L == 2 ? two_curve_pmean(pieces[0], pieces[1], p, tol)
                              : pairwise_pmean(pieces, p, {std::nullopt, eps, delta}, tol);
    bound += part.cost;
    append(joined, part.curve);
    ++chunks;
  }
  PMeanResult r = finish(clean_polyline(joined, tol), curves, p, PMeanAlgorithm::Chunked, tol);
  r.error_bound = bound;
  r.chunks = chunks;
  return r;
}

} // namespace polymean
