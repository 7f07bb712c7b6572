#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace polymean {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
inline Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
// Exact at t = 1, which a + t * (b - a) is not in floating point.
inline Point lerp(Point a, Point b, double t) { return t == 1.0 ? b : a + t * (b - a); }
inline Point midpoint(Point a, Point b) { return 0.5 * (a + b); }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct Segment {
  Point a;
  Point b;

  Point at(double t) const { return lerp(a, b, t); }
  double length() const { return distance(a, b); }
};

/// Comparison tolerances threaded through every geometric predicate.
struct Tolerance {
  double abs_tol = 1e-9;
  double rel_tol = 1e-12;

  /// Slack used when comparing values of magnitude `scale`.
  double slack(double scale = 0.0) const { return abs_tol + rel_tol * std::fabs(scale); }
  void validate() const;
};

/// Closed sub-interval of [0, 1]; `empty()` when lo > hi.
struct Interval {
  double lo = 1.0;
  double hi = 0.0;

  static Interval none() { return {}; }
  bool empty() const { return lo > hi; }
  bool contains(double t) const { return !empty() && lo <= t && t <= hi; }
  Interval intersect(Interval o) const { return {std::fmax(lo, o.lo), std::fmin(hi, o.hi)}; }
};

/// Location on a polyline as (edge index, fraction along that edge).
struct CurvePosition {
  std::size_t edge = 0;
  double t = 0.0;

  double global() const { return static_cast<double>(edge) + t; }
  friend bool operator==(const CurvePosition&, const CurvePosition&) = default;
  friend auto operator<=>(const CurvePosition&, const CurvePosition&) = default;
};

/// Ordered planar vertex sequence with at least two distinct consecutive vertices.
///
/// Consecutive duplicates are dropped on construction; throws Error(InvalidArgument)
/// when fewer than two vertices remain or a coordinate is not finite.
class Polyline {
public:
  Polyline(std::vector<Point> vertices);
  Polyline(std::initializer_list<Point> vertices) : Polyline(std::vector<Point>(vertices)) {}

  std::size_t size() const { return vertices_.size(); }
  std::size_t edge_count() const { return vertices_.size() - 1; }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }
  const Point& front() const { return vertices_.front(); }
  const Point& back() const { return vertices_.back(); }
  std::span<const Point> vertices() const { return vertices_; }
  auto begin() const { return vertices_.begin(); }
  auto end() const { return vertices_.end(); }

  Segment edge(std::size_t j) const { return {vertices_[j], vertices_[j + 1]}; }
  /// Cumulative arc length up to vertex i.
  double arc_length(std::size_t i) const { return arc_[i]; }
  double length() const { return arc_.back(); }

  Point at(CurvePosition pos) const { return edge(pos.edge).at(pos.t); }
  double arc_length_at(CurvePosition pos) const;
  CurvePosition position_at_arc(double s) const;
  /// Moves t == 1 onto the start of the following edge (except on the last edge).
  CurvePosition canonical(CurvePosition pos) const;
  CurvePosition start() const { return {0, 0.0}; }
  CurvePosition finish() const { return {edge_count() - 1, 1.0}; }

  /// Sub-curve between two positions (from <= to), as a vertex list (may hold duplicates).
  std::vector<Point> slice(CurvePosition from, CurvePosition to) const;

  friend bool operator==(const Polyline& a, const Polyline& b) { return a.vertices_ == b.vertices_; }

private:
  std::vector<Point> vertices_;
  std::vector<double> arc_;
};

double point_segment_distance(Point p, const Segment& s);

/// Parameter of the point of `s` closest to `p`, clamped to [0, 1].
double closest_parameter(Point p, const Segment& s);

/// Parameters t in [0, 1] whose point on `s` lies within r (+ abs_tol) of c.
Interval ball_segment_intersection(Point c, double r, const Segment& s, const Tolerance& tol = {});

/// True iff c - b continues in the same unit direction as b - a.
bool collinear_continuation(Point a, Point b, Point c, const Tolerance& tol = {});

double point_polyline_distance(Point p, const Polyline& curve);

/// Parameter on `s` where the ray leaving `origin` along `dir` (strictly past origin) crosses it.
std::optional<double> ray_segment_crossing(Point origin, Point dir, const Segment& s,
                                           const Tolerance& tol = {});

/// Mirror image of direction `dir` across the line spanned by `axis`.
Point reflect_direction(Point dir, Point axis);

} // namespace polymean
