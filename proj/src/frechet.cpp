#include "polymean/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polymean/error.hpp"

namespace polymean {

namespace {

constexpr int kMaxBisection = 100;

CurvePosition position_from_global(const Polyline& curve, double g) {
  double edges = static_cast<double>(curve.edge_count());
  g = std::clamp(g, 0.0, edges);
  if (g >= edges) return curve.finish();
  auto j = static_cast<std::size_t>(std::floor(g));
  return {j, g - static_cast<double>(j)};
}

} // namespace

FreeSpaceDiagram::FreeSpaceDiagram(Polyline p, Polyline q, double eps, const Tolerance& tol)
    : p_(std::move(p)), q_(std::move(q)), eps_(eps), tol_(tol) {
  if (!(eps >= 0)) throw Error(ErrorKind::InvalidArgument, "eps must be non-negative");
  const std::size_t n = p_.size();
  const std::size_t m = q_.size();
  vertical_.resize(n * (m - 1));
  horizontal_.resize((n - 1) * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j + 1 < m; ++j)
      vertical_[i * (m - 1) + j] = ball_segment_intersection(p_[i], eps, q_.edge(j), tol);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      horizontal_[i * m + j] = ball_segment_intersection(q_[j], eps, p_.edge(i), tol);
}

FreeSpaceCell FreeSpaceDiagram::cell(std::size_t i, std::size_t j) const {
  return {i, j, vertical(i, j), vertical(i + 1, j), horizontal(i, j), horizontal(i, j + 1)};
}

bool FreeSpaceDiagram::is_free(double s, double t) const {
  Point a = p_.at(position_from_global(p_, s));
  Point b = q_.at(position_from_global(q_, t));
  return distance(a, b) <= eps_ + tol_.abs_tol;
}

Reachability propagate_reachability(const FreeSpaceDiagram& fsd) {
  const std::size_t rows = fsd.rows();
  const std::size_t cols = fsd.cols();
  Reachability r;
  r.rows = rows;
  r.cols = cols;
  r.vertical.assign((rows + 1) * cols, Interval::none());
  r.horizontal.assign(rows * (cols + 1), Interval::none());
  if (!fsd.start_free()) return r;

  auto vert = [&](std::size_t i, std::size_t j) -> Interval& { return r.vertical[i * cols + j]; };
  auto horz = [&](std::size_t i, std::size_t j) -> Interval& { return r.horizontal[i * (cols + 1) + j]; };

  // Motion along the first grid lines must stay inside a free prefix.
  for (std::size_t j = 0; j < cols; ++j) {
    const Interval& f = fsd.vertical(0, j);
    if (f.empty() || f.lo > 0.0) break;
    vert(0, j) = f;
    if (f.hi < 1.0) break;
  }
  for (std::size_t i = 0; i < rows; ++i) {
    const Interval& f = fsd.horizontal(i, 0);
    if (f.empty() || f.lo > 0.0) break;
    horz(i, 0) = f;
    if (f.hi < 1.0) break;
  }

  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const Interval left = vert(i, j);
      const Interval bottom = horz(i, j);
      const Interval& right_free = fsd.vertical(i + 1, j);
      const Interval& top_free = fsd.horizontal(i, j + 1);
      if (!bottom.empty()) {
        vert(i + 1, j) = right_free;
      } else if (!left.empty()) {
        vert(i + 1, j) = right_free.intersect({left.lo, 1.0});
      }
      if (!left.empty()) {
        horz(i, j + 1) = top_free;
      } else if (!bottom.empty()) {
        horz(i, j + 1) = top_free.intersect({bottom.lo, 1.0});
      }
    }
  }
  const Interval& last_right = vert(rows, cols - 1);
  const Interval& last_top = horz(rows - 1, cols);
  r.end_reachable = fsd.end_free() && (last_right.contains(1.0) || last_top.contains(1.0));
  return r;
}

bool decide_frechet(const Polyline& p, const Polyline& q, double eps, const Tolerance& tol) {
  if (!(eps >= 0)) throw Error(ErrorKind::InvalidArgument, "eps must be non-negative");
  if (distance(p.front(), q.front()) > eps + tol.abs_tol) return false;
  if (distance(p.back(), q.back()) > eps + tol.abs_tol) return false;
  return propagate_reachability(FreeSpaceDiagram(p, q, eps, tol)).end_reachable;
}

double frechet_distance(const Polyline& p, const Polyline& q, const Tolerance& tol) {
  double lo = std::max(distance(p.front(), q.front()), distance(p.back(), q.back()));
  if (decide_frechet(p, q, lo, tol)) return lo;
  double hi = 0.0;
  for (const Point& a : p)
    for (const Point& b : q) hi = std::max(hi, distance(a, b));

  for (int it = 0; it < kMaxBisection && hi - lo > tol.abs_tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (decide_frechet(p, q, mid, tol))
      hi = mid;
    else
      lo = mid;
  }

  // Critical values of the first two kinds; the smallest feasible one inside
  // (lo, hi] is the exact answer whenever the optimum is such a value.
  std::vector<double> critical;
  for (const Point& a : p)
    for (std::size_t j = 0; j < q.edge_count(); ++j) critical.push_back(point_segment_distance(a, q.edge(j)));
  for (const Point& b : q)
    for (std::size_t i = 0; i < p.edge_count(); ++i) critical.push_back(point_segment_distance(b, p.edge(i)));
  std::sort(critical.begin(), critical.end());
  auto first = std::upper_bound(critical.begin(), critical.end(), lo);
  for (auto it = first; it != critical.end() && *it < hi; ++it) {
    if (decide_frechet(p, q, *it, tol)) return *it;
  }
  return hi;
}

double Matching::max_distance() const {
  double best = 0.0;
  for (const MatchedPair& m : pairs) best = std::max(best, distance(m.p, m.q));
  return best;
}

Matching frechet_matching(const Polyline& p, const Polyline& q, double eps, const Tolerance& tol) {
  FreeSpaceDiagram fsd(p, q, eps, tol);
  Reachability reach = propagate_reachability(fsd);
  if (!reach.end_reachable)
    throw Error(ErrorKind::Infeasible, "no monotone matching within the requested error");

  const std::size_t rows = fsd.rows();
  const std::size_t cols = fsd.cols();
  // Global parameter points, collected from the end back to the start.
  std::vector<std::pair<double, double>> path;
  std::size_t i = rows - 1;
  std::size_t j = cols - 1;
  double es = 1.0;
  double et = 1.0;
  for (;;) {
    path.emplace_back(static_cast<double>(i) + es, static_cast<double>(j) + et);
    const Interval& left = reach.at_vertical(i, j);
    const Interval& bottom = reach.at_horizontal(i, j);
    // Entering from below keeps the path low; fall back to the left side.
    double bs = bottom.empty() ? -1.0 : std::min(bottom.hi, es);
    bool use_bottom = !bottom.empty() && bs >= bottom.lo;
    double lt = left.empty() ? -1.0 : std::min(left.hi, et);
    bool use_left = !left.empty() && lt >= left.lo;
    if (!use_bottom && !use_left) {
      // Numerical corner case: fall back on whichever side is nearest.
      if (!bottom.empty()) {
        use_bottom = true;
        bs = bottom.lo;
      } else {
        use_left = true;
        lt = left.lo;
      }
    }
    if (use_bottom) {
      if (j == 0) {
        path.emplace_back(static_cast<double>(i) + bs, 0.0);
        for (std::size_t k = i + 1; k-- > 0;) path.emplace_back(static_cast<double>(k), 0.0);
        break;
      }
      es = bs;
      et = 1.0;
      --j;
    } else {
      if (i == 0) {
        path.emplace_back(0.0, static_cast<double>(j) + lt);
        for (std::size_t k = j + 1; k-- > 0;) path.emplace_back(0.0, static_cast<double>(k));
        break;
      }
      es = 1.0;
      et = lt;
      --i;
    }
  }
  std::reverse(path.begin(), path.end());

  Matching out;
  for (auto [gs, gt] : path) {
    MatchedPair m;
    m.on_p = position_from_global(p, gs);
    m.on_q = position_from_global(q, gt);
    m.s = p.arc_length_at(m.on_p);
    m.t = q.arc_length_at(m.on_q);
    m.p = p.at(m.on_p);
    m.q = q.at(m.on_q);
    if (!out.pairs.empty() && out.pairs.back().s == m.s && out.pairs.back().t == m.t) continue;
    out.pairs.push_back(m);
  }
  return out;
}

double discrete_frechet(std::span<const Point> p, std::span<const Point> q) {
  if (p.empty() || q.empty()) throw Error(ErrorKind::InvalidArgument, "discrete Fréchet needs vertices");
  const std::size_t m = q.size();
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double d = distance(p[i], q[j]);
      double best;
      if (i == 0 && j == 0)
        best = 0.0;
      else if (i == 0)
        best = cur[j - 1];
      else if (j == 0)
        best = prev[j];
      else
        best = std::min({prev[j], prev[j - 1], cur[j - 1]});
      cur[j] = std::max(best, d);
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

void sweep_segment_reach(const Segment& seg, const Polyline& curve, CurvePosition from, double eps,
                         const Tolerance& tol, std::vector<EdgeReach>& out) {
  out.clear();
  // `from` usually sits on the boundary of an earlier (tolerance-widened) disk.
  if (distance(seg.a, curve.at(from)) > eps + 2 * tol.abs_tol) return;
  const std::size_t last_vertex = curve.size() - 1;
  double u = 0.0;
  for (std::size_t j = from.edge; j < curve.edge_count(); ++j) {
    Interval end = ball_segment_intersection(seg.b, eps, curve.edge(j), tol);
    if (j == from.edge) end = end.intersect({from.t, 1.0});
    if (!end.empty()) out.push_back({j, end});
    if (j + 1 >= last_vertex) break;
    // Vertex j + 1 has to be paired with a point of seg no earlier than u.
    Interval free = ball_segment_intersection(curve[j + 1], eps, seg, tol);
    if (free.empty() || free.hi < u) break;
    u = std::max(u, free.lo);
  }
}

bool segment_frechet_decide(const Segment& seg, const Polyline& curve, CurvePosition from,
                            CurvePosition to, double eps, const Tolerance& tol) {
  std::vector<EdgeReach> reach;
  sweep_segment_reach(seg, curve, from, eps, tol, reach);
  for (const EdgeReach& r : reach) {
    if (r.edge == to.edge) return r.reach.contains(to.t);
  }
  return false;
}

} // namespace polymean
