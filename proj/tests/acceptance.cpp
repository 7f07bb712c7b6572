// Acceptance gate: one PASS/FAIL/SKIP line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "polymean/error.hpp"
#include "polymean/frechet.hpp"
#include "polymean/io.hpp"
#include "polymean/oracle.hpp"
#include "polymean/pmean.hpp"
#include "polymean/simplify.hpp"
#include "random_curves.hpp"

using namespace polymean;
using polymean::testing::random_curve;
using polymean::testing::random_walk;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

// Criterion 9 tallies every result produced by the other criteria.
std::size_t contracts_checked = 0;
std::size_t contracts_failed = 0;

void contract(const SimplificationResult& r, const Polyline& p) {
  ++contracts_checked;
  if (verify(r, p, 1e-6)) return;
  ++contracts_failed;
  std::printf("    contract: %s simplification stores error %.9g over %zu links, recomputed %.9g\n", to_string(r.mode),
              r.achieved_eps, r.links, frechet_distance(r.curve, p));
}

void contract(const PMeanResult& r, std::span<const Polyline> curves, PExponent e) {
  ++contracts_checked;
  if (verify(r, curves, e, 1e-6)) return;
  ++contracts_failed;
  std::printf("    contract: %s mean stores cost %.9g, recomputed %.9g\n", to_string(r.algorithm), r.cost,
              lp_norm_frechet(r.curve, curves, e));
}

void report(int id, const char* status, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", status, id, detail.c_str());
  std::fflush(stdout);
  if (std::string(status) == "FAIL") ++failures;
}

void verdict(int id, bool ok, const std::string& detail) { report(id, ok ? "PASS" : "FAIL", detail); }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void criterion_frechet_bracket() {
  auto t0 = Clock::now();
  std::mt19937 rng(101);
  std::uniform_int_distribution<int> size(2, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad = 0, checks = 0;
  for (int i = 0; i < 200; ++i) {
    Polyline p = random_curve(rng, static_cast<std::size_t>(size(rng)));
    Polyline q = random_curve(rng, static_cast<std::size_t>(size(rng)));
    SampledFrechet s = dense_sampling_frechet(p, q, 0.01);
    for (double eps : {s.value, s.value + 1e-3, s.value - 3 * s.slack - 1e-3, 0.5 * s.value, u(rng)}) {
      if (eps < 0) continue;
      bool d = decide_frechet(p, q, eps);
      if (s.value <= eps) {
        ++checks;
        if (!d) ++bad;
      } else if (s.value > eps + 2 * s.slack) {
        ++checks;
        if (d) ++bad;
      }
    }
  }
  double t = seconds_since(t0);
  verdict(1, bad == 0 && t < 30, fmt("decide_frechet vs dense sampling: %d/%d bracket violations, %.2fs (limit 30s)", bad, checks, t));
}

void criterion_discrete_equivalence() {
  auto t0 = Clock::now();
  std::mt19937 rng(202);
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    std::size_t n = static_cast<std::size_t>(size(rng)), m = static_cast<std::size_t>(size(rng));
    std::vector<Point> p, q;
    for (std::size_t j = 0; j < n; ++j) p.push_back({u(rng), u(rng)});
    for (std::size_t j = 0; j < m; ++j) q.push_back({u(rng), u(rng)});
    if (discrete_frechet(p, q) != brute_force_discrete_frechet(p, q)) ++bad;
  }
  double t = seconds_since(t0);
  verdict(2, bad == 0 && t < 10, fmt("discrete_frechet vs coupling enumeration: %d/100 mismatches, %.2fs (limit 10s)", bad, t));
}

void criterion_min_k_optimal() {
  auto t0 = Clock::now();
  std::mt19937 rng(303);
  std::uniform_real_distribution<double> e(0.05, 0.35);
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    Polyline p = random_curve(rng, 6);
    double eps = e(rng);
    SimplificationResult r = min_k_simplify(p, eps, VertexMode::InputVertices);
    contract(r, p);
    if (r.links != brute_force_min_k(p, eps, VertexMode::InputVertices, 0.0)) ++bad;
  }
  double t = seconds_since(t0);
  verdict(3, bad == 0 && t < 60, fmt("min_k_simplify(input) vs subset enumeration: %d/100 mismatches, %.2fs (limit 60s)", bad, t));
}

void criterion_bicriteria() {
  std::mt19937 rng(404);
  std::uniform_int_distribution<int> size(3, 6);
  std::uniform_real_distribution<double> e(0.1, 0.2);
  const double grid = 0.05;
  int bad = 0;
  std::size_t worst_links = 0, worst_opt = 1;
  double worst_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    Polyline p = random_curve(rng, static_cast<std::size_t>(size(rng)));
    double eps = e(rng);
    // Both are feasible plane-point solutions, so the smaller is the tighter bound on k_opt.
    std::size_t k_grid = brute_force_min_k(p, eps, VertexMode::AnyPlanePoint, grid);
    std::size_t k_graph = min_k_simplify(p, eps, VertexMode::AnyPlanePoint).links;
    std::size_t k_opt = std::min(k_grid, k_graph);
    SimplificationResult r = bicriteria_simplify(p, eps);
    contract(r, p);
    double err = frechet_distance(r.curve, p);
    if (r.links > 2 * k_opt || err > 2 * eps + grid) ++bad;
    if (r.links * worst_opt > worst_links * k_opt) worst_links = r.links, worst_opt = k_opt;
    worst_err = std::max(worst_err, err / eps);
  }
  verdict(4, bad == 0, fmt("bicriteria: %d/50 violations; worst links/k_opt %zu/%zu, worst error/eps %.3f", bad,
                           worst_links, worst_opt, worst_err));
}

void criterion_midpoint() {
  std::mt19937 rng(505);
  std::uniform_int_distribution<int> size(2, 8);
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    Polyline p = random_curve(rng, static_cast<std::size_t>(size(rng)));
    Polyline q = random_curve(rng, static_cast<std::size_t>(size(rng)));
    const std::vector<Polyline> pq{p, q};
    double d = frechet_distance(p, q);
    for (PExponent e : {PExponent(1.0), PExponent(2.0), PExponent(4.0), PExponent::infinity()}) {
      PMeanResult r = two_curve_pmean(p, q, e);
      contract(r, pq, e);
      double factor = e.is_infinite() ? 0.5 : std::pow(2.0, 1.0 / e.value() - 1.0);
      if (frechet_distance(r.curve, p) > d / 2 + 1e-6 || frechet_distance(r.curve, q) > d / 2 + 1e-6 ||
          r.cost > factor * d + 1e-6)
        ++bad;
    }
  }
  verdict(5, bad == 0, fmt("two-curve midpoint property: %d/400 violations", bad));
}

// Three noisy copies of a common route; shared by criteria 6 and 7.
struct Toy {
  std::vector<Polyline> curves;
  PExponent p;
  std::size_t k = 2;
};

std::vector<Toy> toy_instances() {
  std::mt19937 rng(606);
  std::uniform_real_distribution<double> u(0.0, 1.0), jitter(-0.12, 0.12);
  std::vector<Toy> out;
  const PExponent exps[] = {PExponent(1.0), PExponent(2.0), PExponent::infinity()};
  for (int i = 0; i < 30; ++i) {
    std::vector<Point> base;
    for (int j = 0; j < 5; ++j) base.push_back({0.1 + 0.2 * j + 0.05 * jitter(rng), 0.2 + 0.6 * u(rng)});
    Toy t;
    t.p = exps[i % 3];
    for (int c = 0; c < 3; ++c) {
      std::vector<Point> v;
      for (const Point& b : base) v.push_back({b.x + jitter(rng), b.y + jitter(rng)});
      t.curves.emplace_back(v);
    }
    out.push_back(std::move(t));
  }
  return out;
}

void criterion_pairwise_ratio(const std::vector<Toy>& toys, const std::vector<double>& opt) {
  const double delta = 1e-3;
  int bad = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < toys.size(); ++i) {
    const Toy& t = toys[i];
    SimplifyTarget target;
    target.k = t.k;
    target.delta = delta;
    PMeanResult r = pairwise_pmean(t.curves, t.p, target);
    contract(r, t.curves, t.p);
    // min_eps_simplify lands within delta of the optimal error of the selected curve.
    double slack = 2 * delta * lp_norm(std::vector<double>(t.curves.size(), 1.0), t.p);
    if (r.cost > 3 * opt[i] + slack + 1e-9) ++bad;
    if (opt[i] > 0) worst = std::max(worst, r.cost / opt[i]);
  }
  verdict(6, bad == 0, fmt("pairwise / discrete OPT: %d/30 above 3; empirical max ratio %.3f", bad, worst));
}

void criterion_simplify_then_mean_ratio(const std::vector<Toy>& toys, const std::vector<double>& opt) {
  const double delta = 1e-3;
  int bad = 0;
  double worst = 0.0, worst_alpha = 1.0;
  for (std::size_t i = 0; i < toys.size(); ++i) {
    const Toy& t = toys[i];
    double alpha = 1.0;
    for (const Polyline& c : t.curves) {
      SimplificationResult s = imai_iri_min_eps(c, t.k, delta);
      contract(s, c);
      double best = brute_force_min_eps(c, t.k);
      if (best > 0) alpha = std::max(alpha, s.achieved_eps / best);
      else if (s.achieved_eps > delta) alpha = std::numeric_limits<double>::infinity();
    }
    PMeanResult r = simplify_then_pmean(t.curves, t.p, t.k, delta, Simplifier::ImaiIri);
    contract(r, t.curves, t.p);
    double slack = 2 * delta * lp_norm(std::vector<double>(t.curves.size(), 1.0), t.p);
    if (r.cost > (2 * alpha + 1) * opt[i] + slack + 1e-9) ++bad;
    if (opt[i] > 0) worst = std::max(worst, r.cost / ((2 * alpha + 1) * opt[i]));
    worst_alpha = std::max(worst_alpha, alpha);
  }
  verdict(7, bad == 0, fmt("simplify-then-mean (imai-iri) / OPT: %d/30 above 2a+1; max alpha %.3f, max cost/((2a+1)OPT) %.3f",
                           bad, worst_alpha, worst));
}

struct Reproduction {
  std::string file;
  std::string what;
  std::size_t target;
  double eps;
  std::function<std::pair<std::size_t, double>(const Polyline&)> run; // output size, achieved error
};

void criterion_datasets() {
  const char* dir = std::getenv("POLYMEAN_DATA_DIR");
  if (!dir) {
    report(8, "SKIP", "POLYMEAN_DATA_DIR not set; dataset reproduction not attempted");
    return;
  }
  auto plane = [](double eps, double delta) {
    return [=](const Polyline& p) {
      SimplificationResult r = min_k_simplify(p, eps, VertexMode::AnyPlanePoint, {}, delta);
      std::printf("    events %zu\n", r.events);
      return std::pair{r.curve.size(), r.achieved_eps};
    };
  };
  auto chunked = [](double eps, double delta, bool merge) {
    return [=](const Polyline& p) {
      ChunkOptions o;
      o.merge = merge;
      const std::vector<Polyline> one{p};
      PMeanResult r = chunked_pmean(one, 30, eps, delta, 2.0, o);
      return std::pair{r.curve.size(), r.per_curve_distance[0]};
    };
  };
  const std::vector<Reproduction> runs{
      {"athens_small_29.txt", "Athens track 29, eps 100, delta 1", 14, 100, plane(100, 1)},
      {"char_sample1.csv", "character sample 1, chunks of 30, eps 0.1, delta 0.01", 20, 0.1, chunked(0.1, 0.01, false)},
      {"char_sample1.csv", "character sample 1, chunks of 30, eps 0.05, delta 0.001", 35, 0.05, chunked(0.05, 0.001, false)},
      {"char_sample1.csv", "character sample 1, merged, eps 0.05, delta 0.002", 31, 0.1, chunked(0.05, 0.002, true)},
      {"chicago_82.txt", "Chicago track 82, chunks of 30, eps 20, delta 2", 121, 20, chunked(20, 2, false)},
  };
  int attempted = 0, bad = 0;
  for (const Reproduction& r : runs) {
    auto path = std::filesystem::path(dir) / r.file;
    if (!std::filesystem::exists(path)) {
      std::printf("    skip %s: %s missing\n", r.what.c_str(), path.c_str());
      continue;
    }
    ++attempted;
    auto [size, err] = r.run(ingest(path.string()));
    double rel = std::fabs(static_cast<double>(size) - static_cast<double>(r.target)) / static_cast<double>(r.target);
    bool ok = rel <= 0.15 && err <= r.eps + 1e-9;
    if (!ok) ++bad;
    std::printf("    %s %s: output size %zu (target %zu%s), error %.6g\n", ok ? "ok  " : "miss", r.what.c_str(), size,
                r.target, size == r.target ? ", exact" : "", err);
  }
  if (attempted == 0) report(8, "SKIP", "no dataset files found in POLYMEAN_DATA_DIR");
  else verdict(8, bad == 0, fmt("dataset reproduction: %d/%d runs within 15%% of the published size", attempted - bad, attempted));
}

void criterion_monotone() {
  std::mt19937 rng(1010);
  int bad_links = 0, bad_decide = 0, bad_chunks = 0;
  for (int i = 0; i < 20; ++i) {
    Polyline p = random_walk(rng, 10);
    std::size_t prev_in = p.edge_count(), prev_plane = p.edge_count();
    for (double eps = 0.0; eps <= 0.4; eps += 0.025) {
      SimplificationResult in = min_k_simplify(p, eps, VertexMode::InputVertices);
      contract(in, p);
      if (in.links > prev_in) ++bad_links;
      prev_in = in.links;
      if (eps > 0) {
        SimplificationResult pl = min_k_simplify(p, eps, VertexMode::AnyPlanePoint);
        contract(pl, p);
        if (pl.links > prev_plane) ++bad_links;
        prev_plane = pl.links;
      }
    }
  }
  for (int i = 0; i < 20; ++i) {
    Polyline p = random_curve(rng, 6), q = random_curve(rng, 5);
    bool prev = false;
    for (int s = 0; s <= 200; ++s) {
      bool d = decide_frechet(p, q, 0.01 * s);
      if (prev && !d) ++bad_decide;
      prev = d;
    }
  }
  for (int i = 0; i < 20; ++i) {
    Polyline p = random_walk(rng, 60, 0.05, 0.05);
    const std::vector<Polyline> one{p};
    ChunkOptions o;
    o.merge = i % 2 == 1;
    PMeanResult r = chunked_pmean(one, 15, 0.03, 0.0, 2.0, o);
    contract(r, one, 2.0);
    if (r.per_curve_distance[0] > r.error_bound + 1e-9) ++bad_chunks;
  }
  verdict(10, bad_links + bad_decide + bad_chunks == 0,
          fmt("monotonicity: links %d, decide %d, chunk-error bound %d violations", bad_links, bad_decide, bad_chunks));
}

} // namespace

int main() {
  auto t0 = Clock::now();
  criterion_frechet_bracket();
  criterion_discrete_equivalence();
  criterion_min_k_optimal();
  criterion_bicriteria();
  criterion_midpoint();

  std::vector<Toy> toys = toy_instances();
  std::vector<double> discrete_opt;
  for (const Toy& t : toys) discrete_opt.push_back(brute_force_discrete_pmean(t.curves, t.p, t.k));
  criterion_pairwise_ratio(toys, discrete_opt);
  criterion_simplify_then_mean_ratio(toys, discrete_opt);

  criterion_datasets();
  criterion_monotone();
  verdict(9, contracts_failed == 0,
          fmt("contract self-verification: %zu/%zu results recompute within 1e-6", contracts_checked - contracts_failed,
              contracts_checked));
  std::printf("total %.1fs, %d failing criteria\n", seconds_since(t0), failures);
  return failures == 0 ? 0 : 1;
}
