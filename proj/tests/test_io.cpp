#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "polymean/error.hpp"
#include "polymean/io.hpp"
#include "random_curves.hpp"

using namespace polymean;

namespace {

std::string fixture(const std::string& name) { return std::string(POLYMEAN_FIXTURES) + "/" + name; }

Polyline parse(const std::string& text) {
  std::istringstream in(text);
  return parse_track(in, "t");
}

} // namespace

TEST(Ingest, CommaRows) {
  Polyline p = ingest(fixture("line.csv"));
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[2], (Point{2, 0}));
}

TEST(Ingest, ThirdColumnIgnored) {
  Polyline p = ingest(fixture("zigzag.txt"));
  ASSERT_EQ(p.size(), 6u);
  EXPECT_EQ(p[1], (Point{1, 0.5}));
}

TEST(Ingest, MixedSeparatorsAndComments) {
  Polyline p = parse("# header\n\n0;0\n1 2\n  3,\t4  \n");
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[2], (Point{3, 4}));
}

TEST(Ingest, DuplicatesDropped) {
  Polyline p = parse("0,0\n0,0\n1,1\n");
  EXPECT_EQ(p.size(), 2u);
}

TEST(Ingest, ErrorNamesTheLine) {
  try {
    ingest(fixture("bad.csv"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(Ingest, TooFewPoints) {
  EXPECT_THROW(parse("1,1\n"), Error);
  EXPECT_THROW(parse("1,1\n1,1\n"), Error);
}

TEST(Ingest, MissingFile) {
  try {
    ingest(fixture("does_not_exist.csv"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}

TEST(Csv, RoundTripIsExact) {
  std::mt19937 rng(99);
  Polyline p = polymean::testing::random_curve(rng, 50, 1e5);
  std::ostringstream out;
  write_csv(out, p);
  Polyline back = parse(out.str());
  EXPECT_EQ(back.vertices().size(), p.vertices().size());
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(back[i], p[i]);
}

TEST(Svg, HasBothCurvesAndMarkers) {
  Polyline a{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  Polyline b{{0, 0}, {3, 0}};
  std::string svg = svg_document(a, b);
  EXPECT_NE(svg.find("#1f77b4"), std::string::npos);
  EXPECT_NE(svg.find("#ff7f0e"), std::string::npos);
  EXPECT_NE(svg.find("viewBox"), std::string::npos);
  std::size_t circles = 0;
  for (std::size_t pos = 0; (pos = svg.find("<circle", pos)) != std::string::npos; ++pos) ++circles;
  EXPECT_EQ(circles, 2u);
}

TEST(Svg, WritesFile) {
  auto path = std::filesystem::temp_directory_path() / "polymean_test.svg";
  Polyline a{{0, 0}, {1, 1}};
  emit_svg(a, a, path.string());
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  EXPECT_NE(first.find("<?xml"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Tolerance, FromEnvironment) {
  ::setenv("POLYMEAN_TOL", "1e-6", 1);
  EXPECT_DOUBLE_EQ(tolerance_from_env().abs_tol, 1e-6);
  ::setenv("POLYMEAN_TOL", "-1", 1);
  EXPECT_THROW(tolerance_from_env(), Error);
  ::unsetenv("POLYMEAN_TOL");
  EXPECT_DOUBLE_EQ(tolerance_from_env().abs_tol, 1e-9);
}
