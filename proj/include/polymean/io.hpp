#pragma once

#include <iosfwd>
#include <string>

#include "polymean/geom.hpp"

namespace polymean {

/// Reads numeric rows separated by whitespace or commas; the first two columns are
/// (x, y), further columns are ignored. Blank lines and lines starting with '#' are
/// skipped. Throws Error(Parse) naming the offending line.
Polyline parse_track(std::istream& in, const std::string& name = "<input>");
Polyline ingest(const std::string& path);

/// One "x,y" row per vertex, with round-trip precision.
void write_csv(std::ostream& out, const Polyline& curve);
void write_csv(const std::string& path, const Polyline& curve);

/// Original in blue, result in orange with vertex markers; y axis points up.
std::string svg_document(const Polyline& original, const Polyline& result);
void emit_svg(const Polyline& original, const Polyline& result, const std::string& path);

/// Default tolerance, with abs_tol taken from POLYMEAN_TOL when set.
Tolerance tolerance_from_env();

} // namespace polymean
