#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polymean/geom.hpp"

namespace polymean {

/// Free intervals on the four sides of cell (i, j): edge i of P against edge j of Q.
/// left/right are parameters along Q's edge, bottom/top along P's edge.
struct FreeSpaceCell {
  std::size_t i = 0;
  std::size_t j = 0;
  Interval left;
  Interval right;
  Interval bottom;
  Interval top;
};

/// Free space of two polylines at error eps, stored per grid line.
///
/// vertical(i, j) is the free part of Q's edge j seen from P's vertex i;
/// horizontal(i, j) is the free part of P's edge i seen from Q's vertex j.
/// Adjacent cells share these arrays, so shared sides agree exactly.
class FreeSpaceDiagram {
public:
  FreeSpaceDiagram(Polyline p, Polyline q, double eps, const Tolerance& tol = {});

  const Polyline& p() const { return p_; }
  const Polyline& q() const { return q_; }
  double eps() const { return eps_; }
  std::size_t rows() const { return p_.edge_count(); }
  std::size_t cols() const { return q_.edge_count(); }

  const Interval& vertical(std::size_t i, std::size_t j) const { return vertical_[i * cols() + j]; }
  const Interval& horizontal(std::size_t i, std::size_t j) const {
    return horizontal_[i * (cols() + 1) + j];
  }
  FreeSpaceCell cell(std::size_t i, std::size_t j) const;

  bool start_free() const { return distance(p_.front(), q_.front()) <= eps_ + tol_.abs_tol; }
  bool end_free() const { return distance(p_.back(), q_.back()) <= eps_ + tol_.abs_tol; }
  /// Direct check of a parameter point (global parameters on P and Q).
  bool is_free(double s, double t) const;

private:
  Polyline p_;
  Polyline q_;
  double eps_;
  Tolerance tol_;
  std::vector<Interval> vertical_;   // (|P|) x (|Q| - 1)
  std::vector<Interval> horizontal_; // (|P| - 1) x (|Q|)
};

inline FreeSpaceDiagram build_fsd(const Polyline& p, const Polyline& q, double eps, const Tolerance& tol = {}) {
  return FreeSpaceDiagram(p, q, eps, tol);
}

/// Reachable parts of the free grid lines under monotone motion from (0, 0).
struct Reachability {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Interval> vertical;   // same layout as FreeSpaceDiagram::vertical
  std::vector<Interval> horizontal; // same layout as FreeSpaceDiagram::horizontal
  bool end_reachable = false;

  const Interval& at_vertical(std::size_t i, std::size_t j) const { return vertical[i * cols + j]; }
  const Interval& at_horizontal(std::size_t i, std::size_t j) const {
    return horizontal[i * (cols + 1) + j];
  }
};

Reachability propagate_reachability(const FreeSpaceDiagram& fsd);

bool decide_frechet(const Polyline& p, const Polyline& q, double eps, const Tolerance& tol = {});

/// Bisection on the decision procedure followed by snapping to the nearest
/// vertex-vertex / vertex-edge critical value. Returns v with decide(v) true and
/// decide(v - tol.abs_tol) false.
double frechet_distance(const Polyline& p, const Polyline& q, const Tolerance& tol = {});

struct MatchedPair {
  double s = 0.0; // arc length along P
  double t = 0.0; // arc length along Q
  CurvePosition on_p;
  CurvePosition on_q;
  Point p;
  Point q;
};

/// Monotone matching given as breakpoints; between consecutive pairs both curves
/// move linearly inside a single free-space cell.
struct Matching {
  std::vector<MatchedPair> pairs;

  double max_distance() const;
};

/// Extracts the lowest reachable monotone path through the free space.
/// Throws Error(Infeasible) when d_F(P, Q) > eps.
Matching frechet_matching(const Polyline& p, const Polyline& q, double eps, const Tolerance& tol = {});

/// Coupling distance over vertex sequences; accepts single-vertex inputs.
double discrete_frechet(std::span<const Point> p, std::span<const Point> q);

/// Reachable end positions on one edge of `curve` for a segment sweep.
struct EdgeReach {
  std::size_t edge = 0;
  Interval reach;
};

/// Matches `seg` against `curve` starting at `from` (seg.a paired with curve(from)).
/// Appends, for every edge j >= from.edge, the positions on edge j that seg.b can be
/// paired with under a monotone matching of error eps. Empty when seg.a is too far.
void sweep_segment_reach(const Segment& seg, const Polyline& curve, CurvePosition from, double eps,
                         const Tolerance& tol, std::vector<EdgeReach>& out);

/// Fréchet decision between a segment and the sub-curve curve[from .. to].
bool segment_frechet_decide(const Segment& seg, const Polyline& curve, CurvePosition from,
                            CurvePosition to, double eps, const Tolerance& tol = {});

} // namespace polymean
