#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pfaffdist/configurations.hpp"
#include "pfaffdist/experiment.hpp"
#include "pfaffdist/incidence.hpp"
#include "pfaffdist/isometry.hpp"
#include "pfaffdist/metrics.hpp"
#include "pfaffdist/pfaffian.hpp"

using namespace pfaffdist;
namespace cfg = pfaffdist::configurations;

namespace {

struct ConfigFlags {
  std::string config_file;
  std::string family = "parallel";
  int m = 8, n = 8;
  std::string scheme = "arithmetic";
  double ratio = 0.0;
  std::uint64_t seed = 0;
  double angle = 1.0, r1 = 1.0, r2 = 2.0;
  std::string arc1 = "exp", arc2 = "circle";
  double A = 2.0, B = 1.0, D = 5.0;
  bool mixed = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "key=value configuration file; flags given explicitly override it");
    app->add_option("--family", family, "parallel|orthogonal|generic|concentric|oncurve|logcircles");
    app->add_option("--m", m, "size of the first point set");
    app->add_option("--n", n, "size of the second point set");
    app->add_option("--scheme", scheme, "uniform|arithmetic|geometric");
    app->add_option("--ratio", ratio, "geometric ratio (0 spans the window)");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--angle", angle, "direction of the second line (generic family)");
    app->add_option("--r1", r1, "inner radius (concentric family)");
    app->add_option("--r2", r2, "outer radius (concentric family)");
    app->add_option("--arc1", arc1, "arc preset for the first set (oncurve family)");
    app->add_option("--arc2", arc2, "arc preset for the second set (oncurve family)");
    app->add_option("--A", A, "log-circle parameter A");
    app->add_option("--B", B, "log-circle parameter B");
    app->add_option("--D", D, "log-circle parameter D");
    app->add_flag("--mixed", mixed, "alternate root signs on the log-circles");
  }

  cfg::ConfigSpec spec(const CLI::App* app) const {
    cfg::ConfigSpec s;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw Error(ErrorCode::Io, fmt::format("cannot read {}", config_file));
      std::stringstream ss;
      ss << in.rdbuf();
      s = cfg::ConfigSpec::parse(ss.str());
    }
    auto given = [&](const char* name) { return config_file.empty() || app->count(name) > 0; };
    if (given("--family")) s.family = cfg::parse_family(family);
    if (given("--m")) s.m = m;
    if (given("--n")) s.n = n;
    if (given("--scheme")) s.scheme.kind = cfg::parse_scheme(scheme);
    if (given("--ratio")) s.scheme.ratio = ratio;
    if (given("--seed")) s.seed = seed;
    if (given("--angle")) s.angle = angle;
    if (given("--r1")) s.r1 = r1;
    if (given("--r2")) s.r2 = r2;
    if (given("--arc1")) s.arc1 = arc1;
    if (given("--arc2")) s.arc2 = arc2;
    if (given("--A")) s.log.A = A;
    if (given("--B")) s.log.B = B;
    if (given("--D")) s.log.D = D;
    if (given("--mixed")) s.mixed_branches = mixed;
    s.validate();
    return s;
  }
};

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stoi(cell));
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, fmt::format("bad size '{}'", cell));
    }
  }
  return out;
}

void print_bounds(const metrics::BoundsReport& b) {
  fmt::print("cs_lower {}\ncs_satisfied {}\ntheorem_bound {:.6g}\ntheorem_ratio {:.6g}\nps_bound {:.6g}\n",
             b.cs_lower.str(), b.cs_satisfied ? "yes" : "no", b.theorem_bound, b.theorem_ratio, b.ps_bound);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distinct-distance experiments for point sets on Pfaffian curves"};
  app.require_subcommand(1);

  double c = 0.25, tol = 1e-9;
  std::string out;
  std::string sizes = "8,16,32,64";
  int alpha = 0, beta = 1, order = 0, dim = 2;
  std::string arc = "cubic", isometry_text;
  int samples = 24;

  auto* bound = app.add_subcommand("bound", "upper bound on connected components of a Pfaffian zero set");
  bound->add_option("--alpha", alpha, "chain degree")->required();
  bound->add_option("--beta", beta, "degree of the polynomial")->required();
  bound->add_option("--order", order, "chain order")->required();
  bound->add_option("--dim", dim, "number of variables")->required();

  ConfigFlags flags;
  auto* distances = app.add_subcommand("distances", "distance histogram of a generated configuration");
  auto* energy = app.add_subcommand("energy", "distance energy, proximity energy and bounds");
  auto* incidences = app.add_subcommand("incidences", "incidence count against the proximity energy");
  auto* sweep = app.add_subcommand("sweep", "run a size sweep and write a report");
  auto* logcircles = app.add_subcommand("logcircles", "few-distance check on the log-circles in R^3");
  for (auto* sub : {distances, energy, incidences, sweep, logcircles}) {
    flags.attach(sub);
    sub->add_option("--tol", tol, "relative tolerance for equal distances");
  }
  for (auto* sub : {energy, incidences, sweep}) sub->add_option("--c", c, "proximity fraction in (0, 1]");
  distances->add_option("--out", out, "histogram CSV path (default stdout)");
  logcircles->add_option("--out", out, "directory for point CSVs");
  sweep->add_option("--sizes", sizes, "comma-separated ascending sizes");
  sweep->add_option("--out", out, "report directory")->required();

  auto* symmetry = app.add_subcommand("symmetry", "symmetries of an arc preset or classification of an isometry");
  symmetry->add_option("--arc", arc, "arc preset: exp, circle, line, parabola, cubic, log");
  symmetry->add_option("--classify", isometry_text, "isometry 'a11 a12 a21 a22 w1 w2' to classify");
  symmetry->add_option("--samples", samples, "candidate starts along the arc");
  symmetry->add_option("--tol", tol, "symmetry residual tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (bound->parsed()) {
      const BigInt b = pfaffian::component_bound({alpha, beta, order}, dim);
      fmt::print("{}\n", b.str());
      return 0;
    }
    if (symmetry->parsed()) {
      if (!isometry_text.empty()) {
        const auto h = isometry::Isometry::parse(isometry_text);
        fmt::print("{}\n", isometry::describe(isometry::classify(h, tol == 1e-9 ? 1e-9 : tol)));
        return 0;
      }
      const auto rep = isometry::detect_symmetries(*cfg::arc_preset(arc), samples, tol == 1e-9 ? 1e-8 : tol);
      if (rep.infinite_family) {
        fmt::print("infinite family: {}\n", rep.infinite_family->is_line() ? "line" : "circle");
      }
      for (const auto& h : rep.symmetries) fmt::print("{}\n", isometry::describe(isometry::classify(h, 1e-6)));
      return 0;
    }
    if (logcircles->parsed()) {
      const cfg::ConfigSpec s = flags.spec(logcircles);
      const auto pts = cfg::gen_log_circles(s.log, s.m, s.n, s.scheme, s.seed, s.mixed_branches);
      const double dev = cfg::log_circle_invariant(s.log, pts.p, pts.q);
      const auto dcount = cfg::distinct_distances_3d(pts.p, pts.q, tol);
      fmt::print("scheme {}{}\n", cfg::to_string(s.scheme.kind),
                 s.scheme.kind == cfg::SchemeKind::Geometric ? " (shared-ratio reconstruction)" : "");
      fmt::print("m {}\nn {}\ndistinct {}\nm+n-1 {}\ninvariant_deviation {:.3e}\ncurve_residual {:.3e}\n", s.m, s.n,
                 dcount, s.m + s.n - 1, dev, cfg::log_circle_residual(s.log, pts));
      if (!out.empty()) {
        std::filesystem::create_directories(out);
        std::ofstream p(std::filesystem::path(out) / "points_logcircle_1.csv");
        cfg::write_points_csv(p, pts.p);
        std::ofstream q(std::filesystem::path(out) / "points_logcircle_2.csv");
        cfg::write_points_csv(q, pts.q);
      }
      return dev <= 1e-9 ? 0 : 2;
    }
    if (sweep->parsed()) {
      experiment::SweepOptions opt;
      opt.c = c;
      opt.tol = tol;
      opt.fixed_m = sweep->count("--m") > 0;
      const auto res = experiment::run_sweep(flags.spec(sweep), parse_sizes(sizes), opt);
      experiment::emit_report(res, out);
      fmt::print("{}\n", experiment::report_header());
      for (const auto& r : res.rows) fmt::print("{}\n", experiment::report_line(r));
      fmt::print("exponent {:.4f}\n", res.exponent);
      return 0;
    }

    const cfg::ConfigSpec s = flags.spec(app.get_subcommands().front());
    const metrics::PointConfiguration config = cfg::generate(s);
    if (distances->parsed()) {
      const auto hist = metrics::distance_histogram(config, tol);
      if (out.empty()) {
        metrics::write_histogram_csv(std::cout, hist);
      } else {
        std::ofstream f(out);
        if (!f) throw Error(ErrorCode::Io, fmt::format("cannot write {}", out));
        metrics::write_histogram_csv(f, hist);
      }
      std::fprintf(stderr, "distinct %zu\n", hist.distinct());
      return 0;
    }
    if (energy->parsed()) {
      const auto hist = metrics::distance_histogram(config, tol);
      const BigInt e = metrics::energy(hist);
      const BigInt ec = metrics::proximity_energy(config, c, tol);
      fmt::print("m {}\nn {}\ndistinct {}\nenergy {}\nproximity_energy {}\n", config.m(), config.n(), hist.distinct(),
                 e.str(), ec.str());
      const auto b = metrics::bounds_report(config.m(), config.n(), hist.distinct(), e);
      print_bounds(b);
      return b.cs_satisfied ? 0 : 2;
    }
    if (incidences->parsed()) {
      const BigInt ec = metrics::proximity_energy(config, c, tol);
      const BigInt inc = incidence::count_incidences(config, c, tol);
      fmt::print("proximity_energy {}\nincidences {}\n", ec.str(), inc.str());
      if (config.m() * config.n() <= 4096) {
        fmt::print("max_multiplicity {}\n", incidence::empirical_multiplicity(config, c, tol));
      }
      return ec == inc ? 0 : 2;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == ErrorCode::IdentityViolation ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
