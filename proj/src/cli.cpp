#include "polymean/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "polymean/error.hpp"
#include "polymean/frechet.hpp"
#include "polymean/io.hpp"
#include "polymean/oracle.hpp"
#include "polymean/pmean.hpp"
#include "polymean/simplify.hpp"

namespace polymean {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Outputs {
  std::string csv;
  std::string summary;
  std::string svg;
};

void add_outputs(CLI::App* cmd, Outputs& o) {
  cmd->add_option("-o,--output", o.csv, "Write the result polyline as CSV");
  cmd->add_option("--summary", o.summary, "Write the run summary (JSON) to this file instead of stdout");
  cmd->add_option("--svg", o.svg, "Write an SVG plot of input and result");
}

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void publish(const Outputs& o, json summary, const Polyline& original, const Polyline& result, std::ostream& out) {
  if (!o.csv.empty()) write_csv(o.csv, result);
  if (!o.svg.empty()) emit_svg(original, result, o.svg);
  if (o.summary.empty()) {
    out << summary.dump(2) << '\n';
  } else {
    std::ofstream f(o.summary);
    if (!f) throw Error(ErrorKind::Io, "cannot write " + o.summary);
    f << summary.dump(2) << '\n';
  }
}

// Randomised cross-checks of the fast paths against the brute-force references.
int oracle_check(const std::string& suite, unsigned seed, const Tolerance& tol, std::ostream& out) {
  const int rounds = suite == "full" ? 100 : 20;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  auto curve = [&](std::size_t n) {
    for (;;) {
      std::vector<Point> v;
      for (std::size_t i = 0; i < n; ++i) v.push_back({coord(rng), coord(rng)});
      try {
        return Polyline(v);
      } catch (const Error&) {
      }
    }
  };
  int failures = 0;
  auto report = [&](const std::string& name, int bad) {
    out << (bad == 0 ? "PASS " : "FAIL ") << name << " (" << rounds - bad << "/" << rounds << ")\n";
    failures += bad;
  };

  int bad = 0;
  for (int r = 0; r < rounds; ++r) {
    Polyline p = curve(2 + rng() % 5), q = curve(2 + rng() % 5);
    SampledFrechet s = dense_sampling_frechet(p, q, 0.01);
    double d = frechet_distance(p, q, tol);
    if (d > s.value + 1e-9 || d < s.value - s.slack - 1e-9) ++bad;
  }
  report("frechet_distance within dense-sampling bracket", bad);

  bad = 0;
  for (int r = 0; r < rounds; ++r) {
    Polyline p = curve(2 + rng() % 5), q = curve(2 + rng() % 5);
    if (discrete_frechet(p.vertices(), q.vertices()) != brute_force_discrete_frechet(p.vertices(), q.vertices())) ++bad;
  }
  report("discrete_frechet equals coupling enumeration", bad);

  bad = 0;
  for (int r = 0; r < rounds; ++r) {
    Polyline p = curve(6);
    double eps = 0.05 + 0.3 * coord(rng);
    if (min_k_simplify(p, eps, VertexMode::InputVertices, tol).links !=
        brute_force_min_k(p, eps, VertexMode::InputVertices, 0.05, {}, tol))
      ++bad;
  }
  report("min_k_simplify equals vertex-subset enumeration", bad);
  return failures == 0 ? kExitOk : kExitSelfCheck;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fréchet distances, curve simplification and p-mean curves", "polymean"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  double eps = 0.0, delta = 0.0;
  std::string mode_name = "input", method = "graph", p_text = "2", algorithm = "auto", suite = "quick";
  std::size_t k = 0, chunk_size = 30;
  unsigned seed = 1;
  bool discrete = false, merge = false, presimplify = false, bicriteria = false;
  Outputs outputs;

  CLI::App* fr = app.add_subcommand("frechet", "Fréchet distance between two curves");
  fr->add_option("files", files, "Two track files")->required()->expected(2);
  fr->add_flag("--discrete", discrete, "Vertex coupling distance instead of the continuous one");

  CLI::App* si = app.add_subcommand("simplify", "Simplify one curve");
  si->add_option("file", files, "Track file")->required()->expected(1);
  si->add_option("--eps", eps, "Error bound")->check(CLI::NonNegativeNumber);
  si->add_option("--delta", delta, "Rounding step for events")->check(CLI::NonNegativeNumber);
  si->add_option("--mode", mode_name, "Vertex mode: input, curve or plane")
      ->check(CLI::IsMember({"input", "curve", "plane"}));
  si->add_option("--k", k, "Link budget; minimises the error instead")->check(CLI::PositiveNumber);
  si->add_option("--method", method, "graph, bicriteria, greedy or imai-iri")
      ->check(CLI::IsMember({"graph", "bicriteria", "greedy", "imai-iri"}));
  add_outputs(si, outputs);

  CLI::App* pm = app.add_subcommand("pmean", "Mean curve of several curves");
  pm->add_option("files", files, "Track files")->required()->expected(2, 64);
  pm->add_option("--p", p_text, "Exponent (number >= 1 or inf)");
  pm->add_option("--eps", eps, "Error bound for simplifying the selected curve")->check(CLI::NonNegativeNumber);
  pm->add_option("--k", k, "Link budget")->check(CLI::PositiveNumber);
  pm->add_option("--delta", delta, "Rounding step for error candidates")->check(CLI::NonNegativeNumber);
  pm->add_option("--algorithm", algorithm, "auto, two-curve, pairwise, simplify, simplify-imai or exact")
      ->check(CLI::IsMember({"auto", "two-curve", "pairwise", "simplify", "simplify-imai", "exact"}));
  add_outputs(pm, outputs);

  CLI::App* ch = app.add_subcommand("chunked", "Chunked simplification or mean");
  ch->add_option("files", files, "Track files")->required()->expected(1, 64);
  ch->add_option("--chunk-size", chunk_size, "Vertices per chunk")->check(CLI::Range(2, 1 << 30));
  ch->add_option("--eps", eps, "Error bound per chunk")->check(CLI::NonNegativeNumber);
  ch->add_option("--delta", delta, "Rounding step for events")->check(CLI::NonNegativeNumber);
  ch->add_option("--p", p_text, "Exponent for several curves");
  ch->add_flag("--merge", merge, "Simplify the concatenation once more");
  ch->add_flag("--presimplify", presimplify, "Simplify with input vertices first");
  ch->add_flag("--bicriteria", bicriteria, "Use the augmented-vertex program per chunk");
  add_outputs(ch, outputs);

  CLI::App* oc = app.add_subcommand("oracle-check", "Cross-check fast paths against brute force");
  oc->add_option("--suite", suite, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  oc->add_option("--seed", seed, "Random seed");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  const auto t0 = Clock::now();
  try {
    const Tolerance tol = tolerance_from_env();

    if (*fr) {
      Polyline a = ingest(files[0]), b = ingest(files[1]);
      double d = discrete ? discrete_frechet(a.vertices(), b.vertices()) : frechet_distance(a, b, tol);
      out << number(d) << '\n';
      return kExitOk;
    }

    if (*oc) return oracle_check(suite, seed, tol, out);

    if (*si) {
      Polyline p = ingest(files[0]);
      VertexMode mode = *parse_vertex_mode(mode_name);
      if (k == 0 && !si->count("--eps")) throw Error(ErrorKind::InvalidArgument, "simplify needs --eps or --k");
      SimplificationResult r{p};
      if (k > 0) {
        r = method == "imai-iri" ? imai_iri_min_eps(p, k, delta, tol) : min_eps_simplify(p, k, delta, mode, tol);
      } else if (method == "bicriteria") {
        r = bicriteria_simplify(p, eps, tol, delta);
      } else if (method == "greedy") {
        r = greedy_disk_simplify(p, eps, tol);
      } else if (method == "imai-iri") {
        r = imai_iri_simplify(p, eps, tol);
      } else {
        r = min_k_simplify(p, eps, mode, tol, delta);
      }
      bool ok = verify(r, p, 1e-6, tol);
      double bound = k > 0 ? std::numeric_limits<double>::infinity()
                           : (method == "bicriteria" ? 2 * eps : eps);
      ok = ok && r.achieved_eps <= bound + tol.slack(bound) && (k == 0 || r.links <= k);
      json s{{"command", "simplify"},  {"method", method},         {"mode", to_string(r.mode)},
             {"input_size", p.size()}, {"output_size", r.curve.size()}, {"links", r.links},
             {"achieved_error", r.achieved_eps}, {"events", r.events}, {"eps", eps},
             {"delta", delta},         {"self_check", ok},        {"wall_time_ms", elapsed_ms(t0)}};
      if (k > 0) s["k"] = k;
      publish(outputs, s, p, r.curve, out);
      return ok ? kExitOk : kExitSelfCheck;
    }

    if (*pm || *ch) {
      std::vector<Polyline> curves;
      for (const std::string& f : files) curves.push_back(ingest(f));
      PExponent p = PExponent::parse(p_text);
      PMeanResult r(curves[0]);
      if (*pm) {
        std::string algo = algorithm;
        if (algo == "auto") algo = curves.size() == 2 ? "two-curve" : "pairwise";
        if (algo == "two-curve") {
          if (curves.size() != 2) throw Error(ErrorKind::InvalidArgument, "two-curve mean needs exactly two curves");
          r = two_curve_pmean(curves[0], curves[1], p, tol);
        } else if (algo == "pairwise") {
          SimplifyTarget target;
          if (k > 0) target.k = k;
          target.eps = eps;
          target.delta = delta;
          r = pairwise_pmean(curves, p, target, tol);
        } else if (algo == "exact") {
          if (k == 0) throw Error(ErrorKind::InvalidArgument, "exact mean needs --k");
          if (!(delta > 0)) throw Error(ErrorKind::InvalidArgument, "exact mean needs --delta > 0");
          r = exact_pmean_small(curves, p, k, delta, {}, tol);
        } else {
          if (k == 0) throw Error(ErrorKind::InvalidArgument, "simplify-then-mean needs --k");
          r = simplify_then_pmean(curves, p, k, delta,
                                  algo == "simplify-imai" ? Simplifier::ImaiIri : Simplifier::GlobalMinEps, tol);
        }
      } else {
        ChunkOptions options;
        options.merge = merge;
        options.presimplify = presimplify;
        options.bicriteria = bicriteria;
        r = chunked_pmean(curves, chunk_size, eps, delta, p, options, tol);
      }
      bool ok = verify(r, curves, p, 1e-6, tol);
      if (r.algorithm == PMeanAlgorithm::Chunked)
        for (double d : r.per_curve_distance) ok = ok && d <= r.error_bound + tol.slack(r.error_bound);
      json s{{"command", *pm ? "pmean" : "chunked"},
             {"algorithm", to_string(r.algorithm)},
             {"p", p.str()},
             {"curves", curves.size()},
             {"output_size", r.curve.size()},
             {"links", r.curve.edge_count()},
             {"per_curve_distance", r.per_curve_distance},
             {"cost", r.cost},
             {"achieved_error", r.cost},
             {"events", r.events},
             {"eps", eps},
             {"delta", delta},
             {"self_check", ok},
             {"wall_time_ms", elapsed_ms(t0)}};
      if (r.algorithm == PMeanAlgorithm::Chunked) {
        s["chunks"] = r.chunks;
        s["error_bound"] = r.error_bound;
        s["achieved_error"] = *std::max_element(r.per_curve_distance.begin(), r.per_curve_distance.end());
      }
      if (r.algorithm == PMeanAlgorithm::Pairwise) s["selected"] = r.selected;
      publish(outputs, s, curves[0], r.curve, out);
      return ok ? kExitOk : kExitSelfCheck;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Failed ? kExitFailed : kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

} // namespace polymean
