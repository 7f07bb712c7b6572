#include "polymean/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "polymean/error.hpp"
#include "polymean/frechet.hpp"

namespace polymean {

double brute_force_discrete_frechet(std::span<const Point> p, std::span<const Point> q, const OracleBudget& budget) {
  if (p.empty() || q.empty()) throw Error(ErrorKind::InvalidArgument, "coupling needs vertices");
  if (p.size() * q.size() > budget.max_pairs) throw Error(ErrorKind::BudgetExceeded, "too many vertex pairs");
  double best = std::numeric_limits<double>::infinity();
  // Depth-first walk over every lattice path, carrying the running maximum.
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double worst) {
    worst = std::max(worst, distance(p[i], q[j]));
    if (i + 1 == p.size() && j + 1 == q.size()) {
      best = std::min(best, worst);
      return;
    }
    if (i + 1 < p.size()) walk(i + 1, j, worst);
    if (j + 1 < q.size()) walk(i, j + 1, worst);
    if (i + 1 < p.size() && j + 1 < q.size()) walk(i + 1, j + 1, worst);
  };
  walk(0, 0, 0.0);
  return best;
}

SampledFrechet dense_sampling_frechet(const Polyline& p, const Polyline& q, double spacing) {
  if (!(spacing > 0)) throw Error(ErrorKind::InvalidArgument, "spacing must be positive");
  double h = 0.0;
  auto sample = [&](const Polyline& c) {
    std::vector<Point> out{c.front()};
    for (std::size_t j = 0; j < c.edge_count(); ++j) {
      Segment s = c.edge(j);
      auto pieces = static_cast<std::size_t>(std::ceil(s.length() / spacing));
      pieces = std::max<std::size_t>(pieces, 1);
      h = std::max(h, s.length() / static_cast<double>(pieces));
      for (std::size_t k = 1; k <= pieces; ++k) out.push_back(s.at(static_cast<double>(k) / static_cast<double>(pieces)));
    }
    return out;
  };
  std::vector<Point> a = sample(p), b = sample(q);
  std::vector<double> table(a.size() * b.size());
  auto at = [&](std::size_t i, std::size_t j) -> double& { return table[i * b.size() + j]; };
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      double reach = 0.0;
      if (i > 0 && j > 0)
        reach = std::min({at(i - 1, j), at(i, j - 1), at(i - 1, j - 1)});
      else if (i > 0)
        reach = at(i - 1, j);
      else if (j > 0)
        reach = at(i, j - 1);
      at(i, j) = std::max(reach, distance(a[i], b[j]));
    }
  }
  return {at(a.size() - 1, b.size() - 1), h};
}

namespace {

// Calls `visit` with every subset of the interior indices 1..n-2 of size `interior`.
void for_each_subset(std::size_t n, std::size_t interior, const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t next) {
    if (pick.size() == interior) {
      std::vector<std::size_t> idx{0};
      idx.insert(idx.end(), pick.begin(), pick.end());
      idx.push_back(n - 1);
      visit(idx);
      return;
    }
    for (std::size_t i = next; i + 1 < n; ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(1);
}

std::optional<Polyline> subset_polyline(const Polyline& p, const std::vector<std::size_t>& idx) {
  std::vector<Point> pts;
  for (std::size_t i : idx) pts.push_back(p[i]);
  try {
    return Polyline(std::move(pts));
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::size_t input_vertex_min_k(const Polyline& p, double eps, const Tolerance& tol) {
  const std::size_t n = p.size();
  for (std::size_t interior = 0; interior + 2 <= n; ++interior) {
    bool found = false;
    for_each_subset(n, interior, [&](const std::vector<std::size_t>& idx) {
      if (found) return;
      auto s = subset_polyline(p, idx);
      if (s && decide_frechet(*s, p, eps, tol)) found = true;
    });
    if (found) return interior + 1;
  }
  throw Error(ErrorKind::Infeasible, "no vertex subset reaches the error bound");
}

// Positions on `curve` where a segment from `a` (paired with curve(from)) to `b`
// can end, earliest per edge, via the free space of the segment against the rest.
struct SegmentEnds {
  std::vector<CurvePosition> ends;
  bool finish = false; // b can be paired with the last point of the curve
};

SegmentEnds segment_ends(Point a, Point b, const Polyline& curve, CurvePosition from, double eps,
                         const Tolerance& tol) {
  SegmentEnds out;
  if (from == curve.finish()) {
    Point last = curve.back();
    if (distance(a, last) <= eps + tol.abs_tol && distance(b, last) <= eps + tol.abs_tol) {
      out.ends.push_back(from);
      out.finish = true;
    }
    return out;
  }
  Polyline seg{a, b};
  Polyline rest(curve.slice(from, curve.finish()));
  FreeSpaceDiagram fsd(seg, rest, eps, tol);
  Reachability r = propagate_reachability(fsd);
  // Edge j of the remainder lies on edge offset + j of the curve.
  const std::size_t offset = curve.edge_count() - rest.edge_count();
  for (std::size_t j = 0; j < rest.edge_count(); ++j) {
    const Interval& iv = r.at_vertical(1, j);
    if (iv.empty()) continue;
    std::size_t edge = offset + j;
    double t = iv.lo;
    if (edge == from.edge) t = from.t + iv.lo * (1.0 - from.t);
    out.ends.push_back(curve.canonical({edge, t}));
    if (j + 1 == rest.edge_count() && iv.contains(1.0)) out.finish = true;
  }
  return out;
}

std::size_t plane_min_k(const Polyline& p, double eps, double grid, const OracleBudget& budget, const Tolerance& tol) {
  if (!(grid > 0)) throw Error(ErrorKind::InvalidArgument, "grid pitch must be positive");
  Point lo = p.front(), hi = p.front();
  for (const Point& v : p) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
  }
  lo = lo - Point{eps, eps};
  hi = hi + Point{eps, eps};
  auto nx = static_cast<std::size_t>(std::floor((hi.x - lo.x) / grid)) + 1;
  auto ny = static_cast<std::size_t>(std::floor((hi.y - lo.y) / grid)) + 1;
  if (nx * ny > budget.max_candidates) throw Error(ErrorKind::BudgetExceeded, "grid too fine for the oracle");
  std::vector<Point> cand(p.begin(), p.end());
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      Point g{lo.x + static_cast<double>(i) * grid, lo.y + static_cast<double>(j) * grid};
      if (point_polyline_distance(g, p) <= eps + tol.abs_tol) cand.push_back(g);
    }
  const std::size_t start = 0;

  // Breadth-first over (candidate, earliest position per edge).
  std::map<std::pair<std::size_t, std::size_t>, double> seen;
  std::vector<std::pair<std::size_t, CurvePosition>> level{{start, p.start()}};
  seen[{start, 0}] = 0.0;
  for (std::size_t links = 1; !level.empty(); ++links) {
    std::vector<std::pair<std::size_t, CurvePosition>> next;
    for (auto [g, pos] : level) {
      for (std::size_t h = 0; h < cand.size(); ++h) {
        if (cand[h] == cand[g]) continue;
        SegmentEnds reach = segment_ends(cand[g], cand[h], p, pos, eps, tol);
        if (cand[h] == p.back() && reach.finish) return links;
        for (CurvePosition end : reach.ends) {
          auto key = std::pair{h, end.edge};
          auto it = seen.find(key);
          if (it != seen.end() && it->second <= end.t) continue;
          seen[key] = end.t;
          next.emplace_back(h, end);
        }
      }
    }
    level = std::move(next);
  }
  throw Error(ErrorKind::Infeasible, "no grid polyline reaches the error bound");
}

void check_pmean_budget(std::span<const Polyline> curves, const OracleBudget& budget) {
  if (curves.empty()) throw Error(ErrorKind::InvalidArgument, "no curves");
  if (curves.size() > budget.max_curves) throw Error(ErrorKind::BudgetExceeded, "too many curves for the oracle");
  for (const Polyline& c : curves)
    if (c.size() > budget.max_vertices) throw Error(ErrorKind::BudgetExceeded, "curve too long for the oracle");
}

} // namespace

std::size_t brute_force_min_k(const Polyline& p, double eps, VertexMode mode, double grid, const OracleBudget& budget,
                              const Tolerance& tol) {
  if (!(eps >= 0)) throw Error(ErrorKind::InvalidArgument, "eps must be non-negative");
  if (mode == VertexMode::AnyPlanePoint) return plane_min_k(p, eps, grid, budget, tol);
  if (p.size() > budget.max_vertices) throw Error(ErrorKind::BudgetExceeded, "curve too long for the oracle");
  return input_vertex_min_k(p, eps, tol);
}

double brute_force_min_eps(const Polyline& p, std::size_t k, const OracleBudget& budget, const Tolerance& tol) {
  if (p.size() > budget.max_vertices) throw Error(ErrorKind::BudgetExceeded, "curve too long for the oracle");
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t interior = 0; interior + 2 <= p.size() && interior + 1 <= k; ++interior) {
    for_each_subset(p.size(), interior, [&](const std::vector<std::size_t>& idx) {
      if (auto s = subset_polyline(p, idx)) best = std::min(best, frechet_distance(*s, p, tol));
    });
  }
  return best;
}

double brute_force_pmean(std::span<const Polyline> curves, PExponent p, std::size_t k, double grid,
                         const OracleBudget& budget, const Tolerance& tol) {
  check_pmean_budget(curves, budget);
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
  if (!(grid > 0)) throw Error(ErrorKind::InvalidArgument, "grid pitch must be positive");
  const std::size_t L = curves.size();

  auto cost_of = [&](const Polyline& m) {
    std::vector<double> d;
    for (const Polyline& c : curves) d.push_back(frechet_distance(m, c, tol));
    return lp_norm(d, p);
  };
  // Upper bound from single segments joining input endpoints.
  double best = std::numeric_limits<double>::infinity();
  for (const Polyline& a : curves)
    for (const Polyline& b : curves)
      if (a.front() != b.back()) best = std::min(best, cost_of(Polyline{a.front(), b.back()}));
  const double reach = best + 2.2 * grid;

  Point lo = curves[0].front(), hi = lo;
  for (const Polyline& c : curves)
    for (const Point& v : c) {
      lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
      hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
    }
  lo = lo - Point{reach, reach};
  hi = hi + Point{reach, reach};
  auto nx = static_cast<std::size_t>(std::floor((hi.x - lo.x) / grid)) + 1;
  auto ny = static_cast<std::size_t>(std::floor((hi.y - lo.y) / grid)) + 1;
  if (nx * ny > budget.max_candidates) throw Error(ErrorKind::BudgetExceeded, "grid too fine for the oracle");

  struct Cand {
    Point at;
    std::vector<double> tube;  // distance to each curve
    std::vector<double> start; // distance to each start
    std::vector<double> end;   // distance to each end
  };
  auto make = [&](Point g) {
    Cand c{g, {}, {}, {}};
    for (const Polyline& cv : curves) {
      c.tube.push_back(point_polyline_distance(g, cv));
      c.start.push_back(distance(g, cv.front()));
      c.end.push_back(distance(g, cv.back()));
    }
    return c;
  };
  std::vector<Cand> interior, starts, ends;
  auto consider = [&](Point g, bool grid_point) {
    Cand c = make(g);
    if (grid_point && lp_norm(c.tube, p) < best + 2.2 * grid) interior.push_back(c);
    if (lp_norm(c.start, p) < best + 2.2 * grid) starts.push_back(c);
    if (lp_norm(c.end, p) < best + 2.2 * grid) ends.push_back(c);
  };
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) consider({lo.x + static_cast<double>(i) * grid, lo.y + static_cast<double>(j) * grid}, true);
  for (const Polyline& c : curves) {
    consider(c.front(), false);
    consider(c.back(), false);
  }

  std::vector<const Cand*> chain;
  std::vector<double> bound(L);
  std::function<void(std::size_t)> extend = [&](std::size_t interior_left) {
    // Close the chain with an end point.
    for (const Cand& e : ends) {
      for (std::size_t i = 0; i < L; ++i) bound[i] = 0.0;
      for (const Cand* c : chain)
        for (std::size_t i = 0; i < L; ++i) bound[i] = std::max(bound[i], c == chain.front() ? c->start[i] : c->tube[i]);
      for (std::size_t i = 0; i < L; ++i) bound[i] = std::max(bound[i], e.end[i]);
      if (lp_norm(bound, p) >= best) continue;
      std::vector<Point> pts;
      for (const Cand* c : chain) pts.push_back(c->at);
      pts.push_back(e.at);
      try {
        best = std::min(best, cost_of(Polyline(pts)));
      } catch (const Error&) {
      }
    }
    if (interior_left == 0) return;
    for (const Cand& v : interior) {
      std::vector<double> b(L, 0.0);
      for (const Cand* c : chain)
        for (std::size_t i = 0; i < L; ++i) b[i] = std::max(b[i], c == chain.front() ? c->start[i] : c->tube[i]);
      for (std::size_t i = 0; i < L; ++i) b[i] = std::max(b[i], v.tube[i]);
      if (lp_norm(b, p) >= best) continue;
      chain.push_back(&v);
      extend(interior_left - 1);
      chain.pop_back();
    }
  };
  for (const Cand& s : starts) {
    if (lp_norm(s.start, p) >= best) continue;
    chain = {&s};
    extend(k - 1);
  }
  return best;
}

double brute_force_discrete_pmean(std::span<const Polyline> curves, PExponent p, std::size_t k,
                                  const OracleBudget& budget, const Tolerance& tol) {
  check_pmean_budget(curves, budget);
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
  double best = std::numeric_limits<double>::infinity();
  for (const Polyline& c : curves) {
    for (std::size_t interior = 0; interior + 2 <= c.size() && interior + 1 <= k; ++interior) {
      for_each_subset(c.size(), interior, [&](const std::vector<std::size_t>& idx) {
        auto s = subset_polyline(c, idx);
        if (!s) return;
        std::vector<double> d;
        for (const Polyline& other : curves) d.push_back(frechet_distance(*s, other, tol));
        best = std::min(best, lp_norm(d, p));
      });
    }
  }
  return best;
}

} // namespace polymean
