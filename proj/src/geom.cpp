#include "polymean/geom.hpp"

#include <algorithm>
#include <cmath>

#include "polymean/error.hpp"

namespace polymean {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Unreachable: return "unreachable";
    case ErrorKind::EmptyGraph: return "empty graph";
    case ErrorKind::Failed: return "FAILED";
    case ErrorKind::BudgetExceeded: return "budget exceeded";
    case ErrorKind::TooLarge: return "instance too large";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Parse: return "parse error";
  }
  return "unknown";
}

void Tolerance::validate() const {
  if (!std::isfinite(abs_tol) || !std::isfinite(rel_tol) || abs_tol < 0 || rel_tol < 0 ||
      (abs_tol == 0 && rel_tol == 0))
    throw Error(ErrorKind::InvalidArgument, "tolerance must be finite, non-negative and not all zero");
}

Polyline::Polyline(std::vector<Point> vertices) {
  for (const Point& p : vertices) {
    if (!is_finite(p))
      throw Error(ErrorKind::InvalidArgument, "polyline vertex is not finite");
  }
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  if (vertices.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "polyline needs at least two distinct vertices");
  vertices_ = std::move(vertices);
  arc_.resize(vertices_.size());
  arc_[0] = 0.0;
  for (std::size_t i = 1; i < vertices_.size(); ++i)
    arc_[i] = arc_[i - 1] + distance(vertices_[i - 1], vertices_[i]);
}

double Polyline::arc_length_at(CurvePosition pos) const {
  return arc_[pos.edge] + pos.t * (arc_[pos.edge + 1] - arc_[pos.edge]);
}

CurvePosition Polyline::position_at_arc(double s) const {
  if (s <= 0) return start();
  if (s >= length()) return finish();
  auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
  std::size_t j = static_cast<std::size_t>(it - arc_.begin()) - 1;
  j = std::min(j, edge_count() - 1);
  double len = arc_[j + 1] - arc_[j];
  return {j, std::clamp((s - arc_[j]) / len, 0.0, 1.0)};
}

CurvePosition Polyline::canonical(CurvePosition pos) const {
  if (pos.t >= 1.0 && pos.edge + 1 < edge_count()) return {pos.edge + 1, 0.0};
  return pos;
}

std::vector<Point> Polyline::slice(CurvePosition from, CurvePosition to) const {
  std::vector<Point> out;
  out.push_back(at(from));
  for (std::size_t v = from.edge + 1; v <= to.edge; ++v) out.push_back(vertices_[v]);
  out.push_back(at(to));
  return out;
}

double closest_parameter(Point p, const Segment& s) {
  Point d = s.b - s.a;
  double len2 = dot(d, d);
  if (len2 == 0.0) return 0.0;
  return std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
}

double point_segment_distance(Point p, const Segment& s) {
  return distance(p, s.at(closest_parameter(p, s)));
}

Interval ball_segment_intersection(Point c, double r, const Segment& s, const Tolerance& tol) {
  const double radius = r + tol.abs_tol;
  Point d = s.b - s.a;
  double len = norm(d);
  if (len == 0.0) {
    return distance(c, s.a) <= radius ? Interval{0.0, 1.0} : Interval::none();
  }
  Point ac = c - s.a;
  double foot = dot(ac, d) / (len * len);
  double h = std::fabs(cross(d, ac)) / len;
  if (h > radius) return Interval::none();
  double w = std::sqrt(std::max(0.0, radius * radius - h * h)) / len;
  Interval out{std::max(0.0, foot - w), std::min(1.0, foot + w)};
  return out.empty() ? Interval::none() : out;
}

bool collinear_continuation(Point a, Point b, Point c, const Tolerance& tol) {
  Point u = b - a;
  Point v = c - b;
  double lu = norm(u);
  double lv = norm(v);
  if (lu == 0.0 || lv == 0.0) return false;
  return norm(u / lu - v / lv) <= tol.abs_tol;
}

double point_polyline_distance(Point p, const Polyline& curve) {
  double best = distance(p, curve.front());
  for (std::size_t j = 0; j < curve.edge_count(); ++j)
    best = std::min(best, point_segment_distance(p, curve.edge(j)));
  return best;
}

std::optional<double> ray_segment_crossing(Point origin, Point dir, const Segment& s,
                                           const Tolerance& tol) {
  Point e = s.b - s.a;
  double denom = cross(dir, e);
  double scale = norm(dir) * norm(e);
  if (std::fabs(denom) <= 1e-12 * scale) return std::nullopt;
  Point w = s.a - origin;
  double lambda = cross(w, e) / denom;
  double t = cross(w, dir) / denom;
  if (lambda * norm(dir) <= tol.abs_tol) return std::nullopt;
  if (t < 0.0 || t > 1.0) return std::nullopt;
  return t;
}

Point reflect_direction(Point dir, Point axis) {
  double len2 = dot(axis, axis);
  if (len2 == 0.0) return dir;
  Point along = (dot(dir, axis) / len2) * axis;
  return 2.0 * along - dir;
}

} // namespace polymean
