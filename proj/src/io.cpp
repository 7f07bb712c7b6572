#include "polymean/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "polymean/error.hpp"

namespace polymean {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string format(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

std::string fixed(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

} // namespace

Polyline parse_track(std::istream& in, const std::string& name) {
  std::vector<Point> pts;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    std::replace(body.begin(), body.end(), ',', ' ');
    std::replace(body.begin(), body.end(), ';', ' ');
    std::istringstream row(body);
    std::string tx, ty;
    double x = 0, y = 0;
    if (!(row >> tx >> ty) || !parse_double(tx, x) || !parse_double(ty, y))
      throw Error(ErrorKind::Parse, name + ":" + std::to_string(number) + ": expected two numeric columns");
    pts.push_back({x, y});
  }
  if (pts.size() < 2) throw Error(ErrorKind::Parse, name + ": fewer than 2 points");
  try {
    return Polyline(std::move(pts));
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, name + ": " + e.what());
  }
}

Polyline ingest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return parse_track(in, path);
}

void write_csv(std::ostream& out, const Polyline& curve) {
  for (const Point& v : curve) out << format(v.x) << ',' << format(v.y) << '\n';
}

void write_csv(const std::string& path, const Polyline& curve) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  write_csv(out, curve);
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

std::string svg_document(const Polyline& original, const Polyline& result) {
  Point lo = original.front(), hi = lo;
  for (const Polyline* c : {&original, &result})
    for (const Point& v : *c) {
      lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
      hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
    }
  double w = hi.x - lo.x, h = hi.y - lo.y;
  double span = std::max({w, h, 1e-12});
  double margin = 0.05 * span;
  double vw = w + 2 * margin, vh = h + 2 * margin;
  double stroke = span / 400.0;
  // Flip y so that the plot reads like a map.
  auto px = [&](Point v) { return fixed(v.x - lo.x + margin) + "," + fixed(hi.y - v.y + margin); };
  auto path = [&](const Polyline& c) {
    std::string d;
    for (const Point& v : c) d += (d.empty() ? "" : " ") + px(v);
    return d;
  };
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 " << fixed(vw) << ' ' << fixed(vh)
     << "\" width=\"800\" height=\"" << fixed(800.0 * vh / vw) << "\">\n"
     << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"" << fixed(stroke) << "\" points=\""
     << path(original) << "\"/>\n"
     << "  <polyline fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"" << fixed(stroke) << "\" points=\""
     << path(result) << "\"/>\n";
  for (const Point& v : result)
    os << "  <circle cx=\"" << fixed(v.x - lo.x + margin) << "\" cy=\"" << fixed(hi.y - v.y + margin) << "\" r=\""
       << fixed(2.5 * stroke) << "\" fill=\"#ff7f0e\"/>\n";
  os << "</svg>\n";
  return os.str();
}

void emit_svg(const Polyline& original, const Polyline& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << svg_document(original, result);
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

Tolerance tolerance_from_env() {
  Tolerance tol;
  if (const char* v = std::getenv("POLYMEAN_TOL")) {
    double x = 0;
    if (!parse_double(trim(v), x) || !(x > 0) || !std::isfinite(x))
      throw Error(ErrorKind::InvalidArgument, "POLYMEAN_TOL must be a positive number");
    tol.abs_tol = x;
  }
  return tol;
}

} // namespace polymean
