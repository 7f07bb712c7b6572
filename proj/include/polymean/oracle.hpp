#pragma once

// Slow exhaustive references for small inputs. They share only the geometry
// primitives and the plain Fréchet decision with the fast paths.

#include <cstddef>
#include <span>
#include <vector>

#include "polymean/geom.hpp"
#include "polymean/pmean.hpp"
#include "polymean/simplify.hpp"

namespace polymean {

struct OracleBudget {
  std::size_t max_vertices = 8;
  std::size_t max_curves = 3;
  double grid_resolution = 0.05;
  std::size_t max_candidates = 10'000;
  std::size_t max_pairs = 64; // |P| * |Q| for the coupling enumeration
};

/// Minimum over every monotone coupling of the vertex sequences, by enumeration.
double brute_force_discrete_frechet(std::span<const Point> p, std::span<const Point> q,
                                    const OracleBudget& budget = {});

struct SampledFrechet {
  double value = 0.0;
  /// value - slack <= continuous distance <= value
  double slack = 0.0;
};

/// Coupling distance of both curves subdivided to spacing at most `spacing`.
SampledFrechet dense_sampling_frechet(const Polyline& p, const Polyline& q, double spacing);

/// Fewest links of a simplification within eps of P. InputVertices: subsets of P's
/// vertices. AnyPlanePoint: vertices drawn from a grid of pitch `grid` plus P's vertices.
std::size_t brute_force_min_k(const Polyline& p, double eps, VertexMode mode, double grid,
                              const OracleBudget& budget = {}, const Tolerance& tol = {});

/// Smallest Fréchet error of a vertex-subset simplification with at most k links.
double brute_force_min_eps(const Polyline& p, std::size_t k, const OracleBudget& budget = {},
                           const Tolerance& tol = {});

/// Smallest L_p cost of a polyline with at most k links whose vertices lie on a grid of
/// pitch `grid` (endpoints may also be input endpoints).
double brute_force_pmean(std::span<const Polyline> curves, PExponent p, std::size_t k, double grid,
                         const OracleBudget& budget = {}, const Tolerance& tol = {});

/// Smallest L_p cost over vertex-subset simplifications (at most k links) of the input curves.
double brute_force_discrete_pmean(std::span<const Polyline> curves, PExponent p, std::size_t k,
                                  const OracleBudget& budget = {}, const Tolerance& tol = {});

} // namespace polymean
