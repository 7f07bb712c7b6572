#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polymean/geom.hpp"
#include "polymean/simplify.hpp"

namespace polymean {

/// Exponent of the L_p cost: p >= 1, or infinity (max-norm).
class PExponent {
public:
  PExponent(double p = 2.0);
  static PExponent infinity();
  /// Accepts a number >= 1 or "inf".
  static PExponent parse(const std::string& text);

  bool is_infinite() const { return infinite_; }
  double value() const { return p_; }
  std::string str() const;

private:
  double p_ = 2.0;
  bool infinite_ = false;
};

double lp_norm(std::span<const double> values, PExponent p);

enum class PMeanAlgorithm { TwoCurveExact, Pairwise, SimplifyThenMean, ExactSmall, Chunked };

const char* to_string(PMeanAlgorithm algorithm);

struct PMeanResult {
  explicit PMeanResult(Polyline c) : curve(std::move(c)) {}

  Polyline curve;
  std::vector<double> per_curve_distance;
  double cost = 0.0;
  PMeanAlgorithm algorithm = PMeanAlgorithm::TwoCurveExact;
  /// Pairwise: index of the selected input curve.
  std::size_t selected = 0;
  /// SimplifyThenMean: error of each per-curve simplification.
  std::vector<double> simplification_error;
  /// ExactSmall: the chosen error budget per curve.
  std::vector<double> eps;
  /// Chunked: sum of per-chunk errors, a bound on the error of the concatenation.
  double error_bound = 0.0;
  std::size_t chunks = 0;
  std::size_t events = 0;
};

/// Recomputes per-curve Fréchet distances and the cost; true when both match within slack.
bool verify(const PMeanResult& result, std::span<const Polyline> curves, PExponent p, double slack = 1e-6,
            const Tolerance& tol = {});

/// Point minimising the L_p norm of its distances to `points`.
Point lp_center(std::span<const Point> points, PExponent p, const Tolerance& tol = {});

double lp_norm_frechet(const Polyline& m, std::span<const Polyline> curves, PExponent p,
                       const Tolerance& tol = {});

/// Midpoint curve of an optimal Fréchet matching; optimal for two curves and every p.
PMeanResult two_curve_pmean(const Polyline& p, const Polyline& q, PExponent exponent,
                            const Tolerance& tol = {});

/// How the selected curve of the pairwise algorithm is simplified. With k set, the
/// smallest error reaching k links; otherwise the fewest links within eps (eps 0 keeps it).
struct SimplifyTarget {
  std::optional<std::size_t> k;
  double eps = 0.0;
  double delta = 0.0;
};

/// Input curve with the smallest L_p cost to the others, then simplified.
PMeanResult pairwise_pmean(std::span<const Polyline> curves, PExponent p, const SimplifyTarget& target = {},
                           const Tolerance& tol = {});

enum class Simplifier { GlobalMinEps, ImaiIri };

/// Simplifies every curve to k links, then takes the mean of the simplified curves
/// (two-curve midpoint mean for two curves, pairwise algorithm beyond).
PMeanResult simplify_then_pmean(std::span<const Polyline> curves, PExponent p, std::size_t k, double delta,
                                Simplifier simplifier = Simplifier::GlobalMinEps, const Tolerance& tol = {});

struct ExactOptions {
  std::size_t max_curves = 3;
  std::size_t max_vertices = 8;
  bool override_caps = false;
  std::size_t max_nodes = 200'000;
};

/// Exhaustive search over per-curve error budgets on the delta grid; for each budget
/// the min-link path through the joint event graph. Returns the best curve with at
/// most k links. Throws Error(TooLarge) beyond the caps.
PMeanResult exact_pmean_small(std::span<const Polyline> curves, PExponent p, std::size_t k, double delta,
                              const ExactOptions& options = {}, const Tolerance& tol = {});

struct ChunkOptions {
  /// Runs the simplifier once more on the concatenated chunk results.
  bool merge = false;
  /// Simplify with input vertices before the plane-point pass (single curve).
  bool presimplify = false;
  /// Use the augmented-vertex DP instead of the event graph for single curves.
  bool bicriteria = false;
  std::size_t max_nodes = 1'000'000;
};

/// Splits every curve into chunks of chunk_size vertices sharing boundary vertices,
/// solves each chunk and concatenates. One curve: plane-point simplification at eps.
/// Two curves: two-curve mean per chunk pair. More: pairwise algorithm per chunk.
PMeanResult chunked_pmean(std::span<const Polyline> curves, std::size_t chunk_size, double eps, double delta,
                          PExponent p, const ChunkOptions& options = {}, const Tolerance& tol = {});

/// Vertex index ranges [first, last] of the chunks of an n-vertex curve.
std::vector<std::pair<std::size_t, std::size_t>> chunk_ranges(std::size_t n, std::size_t chunk_size);

} // namespace polymean
