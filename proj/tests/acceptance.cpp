// One PASS/FAIL line per acceptance criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "pfaffdist/configurations.hpp"
#include "pfaffdist/experiment.hpp"
#include "pfaffdist/incidence.hpp"
#include "pfaffdist/isometry.hpp"
#include "pfaffdist/metrics.hpp"
#include "pfaffdist/pfaffian.hpp"

using namespace pfaffdist;
namespace cfg = pfaffdist::configurations;
namespace iso = pfaffdist::isometry;
namespace inc = pfaffdist::incidence;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

cfg::ConfigSpec spec(cfg::Family f, int m, int n, cfg::SchemeKind s = cfg::SchemeKind::Arithmetic) {
  cfg::ConfigSpec c;
  c.family = f;
  c.m = m;
  c.n = n;
  c.scheme.kind = s;
  return c;
}

std::vector<cfg::ConfigSpec> planar_specs(int m, int n) {
  std::vector<cfg::ConfigSpec> out;
  using cfg::Family;
  using cfg::SchemeKind;
  for (auto s : {SchemeKind::Arithmetic, SchemeKind::Uniform, SchemeKind::Geometric}) {
    for (auto f : {Family::ParallelLines, Family::OrthogonalLines, Family::GenericLines}) out.push_back(spec(f, m, n, s));
    for (const auto& [a, b] : {std::pair{"exp", "circle"}, std::pair{"cubic", "log"}, std::pair{"parabola", "line"}}) {
      auto c = spec(Family::OnCurve, m, n, s);
      c.arc1 = a;
      c.arc2 = b;
      out.push_back(c);
    }
    if (s != SchemeKind::Geometric) out.push_back(spec(Family::ConcentricCircles, m, n, s));
  }
  for (auto& c : out) c.seed = 2024;
  return out;
}

// AC1
Outcome exceptional_families() {
  Outcome o;
  std::vector<std::pair<int, int>> sizes;
  for (int m = 1; m <= 64; ++m) {
    for (int n = 1; n <= 64; ++n) sizes.emplace_back(m, n);
  }
  for (int k = 65; k <= 256; ++k) {
    sizes.emplace_back(k, k);
    sizes.emplace_back(1, k);
    sizes.emplace_back(k, 1);
  }
  for (int m = 80; m <= 256; m += 16) {
    for (int n = 80; n <= 256; n += 16) {
      if (m != n) sizes.emplace_back(m, n);
    }
  }
  int bad = 0;
  for (const auto& [m, n] : sizes) {
    const auto d = metrics::distance_histogram(cfg::generate(spec(cfg::Family::ParallelLines, m, n))).distinct();
    if (d != static_cast<std::size_t>(std::max(m, n))) ++bad;
  }
  int circles_bad = 0;
  for (int N = 1; N <= 256; N += (N < 64 ? 1 : 17)) {
    const auto d = metrics::distance_histogram(cfg::generate(spec(cfg::Family::ConcentricCircles, N, N))).distinct();
    if (d > static_cast<std::size_t>(N)) ++circles_bad;
  }
  o.pass = bad == 0 && circles_bad == 0;
  o.detail = fmt::format("parallel |D| = max(m,n) on {} size pairs ({} mismatches); concentric |D| <= N ({} failures)",
                         sizes.size(), bad, circles_bad);
  return o;
}

// AC2
Outcome cauchy_schwarz() {
  Outcome o;
  int configs = 0, bad = 0;
  const int dims[] = {1, 2, 3, 7, 10, 25, 50, 100};
  for (int m : dims) {
    for (int n : dims) {
      if (m * n > 10000) continue;
      for (const auto& s : planar_specs(m, n)) {
        const auto config = cfg::generate(s);
        const auto hist = metrics::distance_histogram(config);
        const BigInt e = metrics::energy(hist);
        const BigInt lhs = e * BigInt(static_cast<long long>(hist.distinct()));
        const BigInt rhs = BigInt(m) * n * m * n;
        ++configs;
        if (lhs < rhs || !metrics::bounds_report(m, n, hist.distinct(), e).cs_satisfied) ++bad;
      }
    }
  }
  const auto square = metrics::PointConfiguration::make_exact({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}});
  const auto h = metrics::distance_histogram(square);
  const BigInt e = metrics::energy(h);
  const bool equality = e * BigInt(static_cast<long long>(h.distinct())) == 16;
  o.pass = bad == 0 && equality;
  o.detail = fmt::format("{} configurations, {} violations; 2x2 square E|D| = {} = (mn)^2: {}", configs, bad,
                         (e * BigInt(static_cast<long long>(h.distinct()))).str(), equality ? "yes" : "no");
  return o;
}

// AC3
Outcome counting_identity() {
  Outcome o;
  int checks = 0, bad = 0;
  const std::pair<int, int> dims[] = {{40, 40}, {20, 80}, {80, 20}, {16, 100}, {1, 1600}, {7, 13}, {3, 3}};
  for (const auto& [m, n] : dims) {
    for (const auto& s : planar_specs(m, n)) {
      const auto config = cfg::generate(s);
      for (double c : {0.1, 0.25, 0.5, 1.0}) {
        ++checks;
        if (metrics::proximity_energy(config, c) != inc::count_incidences(config, c)) ++bad;
      }
    }
  }
  o.pass = bad == 0;
  o.detail = fmt::format("E_c = I(P_c, Gamma) on {} (configuration, c) pairs, {} mismatches", checks, bad);
  return o;
}

// AC4
Outcome component_bounds() {
  Outcome o;
  using pfaffian::component_bound;
  const BigInt b1 = component_bound({1, 1, 1}, 1), b2 = component_bound({1, 1, 1}, 2), b3 = component_bound({0, 2, 0}, 2);
  const BigInt cubic = component_bound({1, 3, 1}, 1);
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  const auto chain = pfaffian::builtin_chain(pfaffian::BuiltinSpec::exp(1.0));
  int worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Polynomial q = Polynomial::variable(2, 1);
    for (int k = 0; k <= 3; ++k) q.add_term({k, 0}, Coeff::real(-coef(rng)));
    worst = std::max(worst, pfaffian::count_sign_changes(pfaffian::PfaffianFunction(chain, q), -20.0, 20.0, 200000));
  }
  o.pass = b1 == 4 && b2 == 16 && b3 == 12 && cubic == 24 && BigInt(worst) <= cubic;
  o.detail = fmt::format("bounds {}, {}, {}; e^x = cubic: max {} roots over 50 instances vs bound {}", b1.str(),
                         b2.str(), b3.str(), worst, cubic.str());
  return o;
}

// AC5
Outcome isometry_algebra() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3), t(0.2, pi - 0.2), full(-pi, pi);
  double worst_comm = 0;
  for (int s = 0; s < 200; ++s) {
    const auto h1 = iso::Isometry::rotation({u(rng), u(rng)}, (rng() & 1) ? t(rng) : -t(rng));
    const auto h2 = iso::Isometry::rotation({u(rng), u(rng)}, (rng() & 1) ? t(rng) : -t(rng));
    const Vec2 v = iso::rotation_commutator(h1, h2);
    const auto direct = iso::compose(iso::inverse(h2), iso::compose(iso::inverse(h1), iso::compose(h2, h1)));
    worst_comm = std::max({worst_comm, (direct.a() - iso::Mat2::identity()).max_abs(), norm(direct.w() - v)});
  }
  double worst_glide = 0;
  int not_translation = 0;
  for (int s = 0; s < 100; ++s) {
    const Vec2 dir{std::cos(full(rng)), std::sin(full(rng))};
    const auto h = iso::compose(iso::Isometry::translation(u(rng) * dir), iso::Isometry::reflection({u(rng), u(rng)}, dir));
    const auto c = iso::classify(iso::compose(h, h));
    const auto* tr = std::get_if<iso::TranslationClass>(&c);
    if (!tr) {
      ++not_translation;
      continue;
    }
    worst_glide = std::max(worst_glide, norm(tr->w - (h.w() + h.a() * h.w())));
  }
  o.pass = worst_comm <= 1e-9 && worst_glide <= 1e-9 && not_translation == 0;
  o.detail = fmt::format("commutator max error {:.2e} over 200 pairs; glide square max error {:.2e} over 100 samples",
                         worst_comm, worst_glide);
  return o;
}

// AC6
Outcome diffdist_algebra() {
  Outcome o;
  const auto& q = inc::symbolic_quad();
  const auto& v = inc::symbolic_quad_variables();
  auto P = [&](const char* e) { return Polynomial::parse_expression(e, v); };
  const bool coeffs = q.axx == P("b^2*w^2 + (c - a*w)^2 - b^2") && q.ayy == P("d^2 - b^2") &&
                      q.axy == P("2*d*(c - a*w)");

  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::uniform_int_distribution<int> which(0, 3);
  int no_factor = 0, wrong_cases = 0, unwitnessed = 0;
  for (int k = 0; k < 500; ++k) {
    inc::CanonicalTriple t;
    t.a = u(rng);
    t.w = u(rng);
    switch (which(rng)) {
      case 0: t.a = 0; break;
      case 1: t.a = 1; break;
      case 2: t.w = 1; break;
      default: t.w = -1; break;
    }
    t.b = t.d = 0;
    t.c = t.a * t.w;
    const double product = t.a * (t.a - 1) * (t.w + 1) * (t.w - 1);
    if (std::fabs(product) > 1e-9) ++no_factor;
    const auto d = inc::degeneracy_witness(t);
    const Point2 off{10, 10};
    const auto bad = inc::violated_hypotheses({0, 0}, {1, 0}, {t.a, 0}, off, off + Point2{t.w, 0}, off + Point2{t.c, 0});
    const int expected = d == inc::Degeneracy::A0 ? 1 : d == inc::Degeneracy::A1 ? 2 : 0;
    if (d == inc::Degeneracy::NonDegenerate || std::find(bad.begin(), bad.end(), expected) == bad.end()) ++unwitnessed;
    const int cases = (std::fabs(t.a) <= 1e-9) + (std::fabs(t.a - 1) <= 1e-9) + (std::fabs(std::fabs(t.w) - 1) <= 1e-9);
    if (cases != 1) ++wrong_cases;
  }
  o.pass = coeffs && no_factor == 0 && wrong_cases == 0 && unwitnessed == 0;
  o.detail = fmt::format(
      "symbolic coefficients exact: {}; 500 degenerate triples: {} without a vanishing factor, {} not in exactly one "
      "exclusion case, {} without a violated hypothesis",
      coeffs ? "yes" : "no", no_factor, wrong_cases, unwitnessed);
  return o;
}

std::shared_ptr<const curves::PlanarArc> arc_of(const std::string& expr, double xlo, double xhi, Point2 seed) {
  auto f = pfaffian::PfaffianFunction::from_expression(pfaffian::builtin_chain(pfaffian::BuiltinSpec::empty(2)), expr);
  return std::make_shared<const curves::PlanarArc>(f, xlo, xhi, seed);
}

Point2 anchor_at_distance(Point2 q, double r, std::mt19937& rng) {
  std::uniform_real_distribution<double> ang(0.0, 2 * pi);
  const double t = ang(rng);
  return {q.x + r * std::cos(t), q.y + r * std::sin(t)};
}

// AC7
Outcome intersection_oracles() {
  Outcome o;
  int over = 0, unstable = 0, inconclusive = 0, runs = 0, most = 0;
  const auto line = arc_of("y - 0.5*x - 0.2", -2.0, 2.0, {0.0, 0.2});
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 10; ++t) {
    const inc::DistanceCurve a{{u(rng), u(rng)}, {u(rng), u(rng)}, line, 0, 1};
    const inc::DistanceCurve b{{u(rng), u(rng)}, {u(rng), u(rng)}, line, 2, 3};
    if (std::fabs(squared_distance(a.pi, b.pi) - squared_distance(a.pj, b.pj)) <= 1e-6) continue;
    const auto s = inc::stable_pairwise_count(a, b, 40);
    ++runs;
    most = std::max(most, s.fine);
    if (!s.stable()) ++unstable;
    if (s.fine > 4) ++over;
  }
  const auto circle = arc_of("x^2 + y^2 - 1", 0.05, 0.95, {0.6, 0.8});
  const curves::Parameterization g(*circle);
  std::mt19937 crng(5);
  std::uniform_real_distribution<double> ux(0.1, 0.9);
  for (int t = 0; t < 6; ++t) {
    const Point2 q = g.point(ux(crng)), q2 = g.point(ux(crng));
    const Point2 pi_{u(crng), u(crng)}, pk{u(crng), u(crng)}, ps{u(crng), u(crng)};
    const Point2 pj = anchor_at_distance(q2, distance(pi_, q), crng);
    const Point2 pl = anchor_at_distance(q2, distance(pk, q), crng);
    const Point2 pt = anchor_at_distance(q2, distance(ps, q), crng);
    ++runs;
    try {
      const int n = inc::triple_intersection_count({pi_, pj, circle, 0, 1}, {pk, pl, circle, 2, 3},
                                                   {ps, pt, circle, 4, 5}, 40);
      most = std::max(most, n);
      if (n > 4) ++over;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Inconclusive) throw;
      ++inconclusive;
    }
  }
  o.pass = over == 0 && unstable == 0 && inconclusive == 0 && runs > 0;
  o.detail = fmt::format("{} line-arc pairs and conic-arc triples: max {} isolated points, {} above 4, {} unstable "
                         "under grid doubling",
                         runs, most, over, unstable + inconclusive);
  return o;
}

// AC8
Outcome log_circles() {
  Outcome o;
  const cfg::LogCircleParams p;
  const auto pts = cfg::gen_log_circles(p, 100, 100, {cfg::SchemeKind::Uniform, 0}, 8, true);
  const double dev = cfg::log_circle_invariant(p, pts.p, pts.q);
  int bad = 0;
  for (int n = 1; n <= 64; ++n) {
    const auto g = cfg::gen_log_circles(p, n, n, {cfg::SchemeKind::Geometric, 0});
    if (cfg::distinct_distances_3d(g.p, g.q) > 2 * n - 1) ++bad;
  }
  o.pass = dev <= 1e-9 && bad == 0;
  o.detail = fmt::format("invariant max deviation {:.2e} over 10^4 pairs; shared-ratio |D| <= m+n-1 for m = n <= 64 "
                         "({} failures)",
                         dev, bad);
  return o;
}

// AC9
Outcome theorem_sweep() {
  Outcome o;
  double min_ratio = 1e300;
  std::string worst;
  int bad = 0;
  for (const auto& [a, b] : {std::pair{"exp", "circle"}, std::pair{"cubic", "log"}, std::pair{"parabola", "exp"}}) {
    for (auto s : {cfg::SchemeKind::Geometric, cfg::SchemeKind::Uniform}) {
      auto c = spec(cfg::Family::OnCurve, 1, 1, s);
      c.arc1 = a;
      c.arc2 = b;
      c.seed = 77;
      const auto res = experiment::run_sweep(c, {16, 32, 64, 128, 256});
      for (const auto& r : res.rows) {
        const double ratio = double(r.distinct) / r.theorem_bound;
        if (ratio < min_ratio) {
          min_ratio = ratio;
          worst = fmt::format("{} n={}", r.family, r.n);
        }
        if (double(r.distinct) < r.theorem_bound / 16) ++bad;
      }
    }
  }
  o.pass = bad == 0;
  o.detail = fmt::format("|D| >= bound/16 on all rows ({} failures); smallest |D|/bound = {:.3f} at {}", bad,
                         min_ratio, worst);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// AC10
Outcome determinism() {
  Outcome o;
  const fs::path base = fs::temp_directory_path() / "pfaffdist_acceptance";
  fs::remove_all(base);
  std::vector<experiment::ExperimentResult> runs[2];
  for (int k = 0; k < 2; ++k) {
    for (auto s : {cfg::SchemeKind::Uniform, cfg::SchemeKind::Geometric}) {
      auto c = spec(cfg::Family::OnCurve, 1, 1, s);
      c.seed = 4242;
      runs[k].push_back(experiment::run_sweep(c, {16, 32, 64}));
    }
    experiment::emit_report(runs[k], base / std::to_string(k));
  }
  int files = 0, differ = 0;
  for (const auto& e : fs::directory_iterator(base / "0")) {
    ++files;
    if (slurp(e.path()) != slurp(base / "1" / e.path().filename())) ++differ;
  }
  experiment::load_report(base / "0");
  fs::remove_all(base);
  o.pass = files > 0 && differ == 0;
  o.detail = fmt::format("{} emitted files compared across two runs, {} differ", files, differ);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget;  // seconds
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"AC1 exceptional families", 5, exceptional_families},
      {"AC2 Cauchy-Schwarz chain", 30, cauchy_schwarz},
      {"AC3 counting identity", 60, counting_identity},
      {"AC4 component bound", 5, component_bounds},
      {"AC5 isometry algebra", 1, isometry_algebra},
      {"AC6 degenerate-triple algebra", 5, diffdist_algebra},
      {"AC7 intersection counts", 60, intersection_oracles},
      {"AC8 log-circles", 10, log_circles},
      {"AC9 theorem-consistency sweep", 120, theorem_sweep},
      {"AC10 determinism", 120, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s %s: %s [%.2f s of %.0f s]\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs, c.budget);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
