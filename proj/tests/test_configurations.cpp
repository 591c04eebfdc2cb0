#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "pfaffdist/configurations.hpp"

using namespace pfaffdist;
using namespace pfaffdist::configurations;

namespace {

ConfigSpec spec_of(Family f, int m, int n, SchemeKind s = SchemeKind::Arithmetic) {
  ConfigSpec spec;
  spec.family = f;
  spec.m = m;
  spec.n = n;
  spec.scheme.kind = s;
  return spec;
}

std::size_t distinct(const ConfigSpec& spec) { return metrics::distance_histogram(generate(spec)).distinct(); }

}  // namespace

TEST_CASE("generate examples") {
  CHECK(distinct(spec_of(Family::ParallelLines, 4, 4)) == 4);

  for (int N : {3, 8, 17, 32}) {
    ConfigSpec c = spec_of(Family::ConcentricCircles, N, N);
    c.r1 = 1;
    c.r2 = 2;
    CHECK(distinct(c) <= static_cast<std::size_t>(N));
  }

  ConfigSpec on = spec_of(Family::OnCurve, 1, 1);
  on.arc1 = "exp";
  on.arc2 = "circle";
  const auto cfg = generate(on);
  REQUIRE(cfg.m() == 1);
  REQUIRE(cfg.n() == 1);
  CHECK(cfg.p1()[0].x == doctest::Approx(0.5));
  CHECK(cfg.p1()[0].y == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
  CHECK(cfg.p2()[0].x == doctest::Approx(2.0));
  CHECK(cfg.p2()[0].y == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

  CHECK_THROWS_AS(generate(spec_of(Family::LogCircles, 2, 2)), Error);
  CHECK_THROWS_AS(generate(spec_of(Family::ParallelLines, 0, 2)), Error);
}

TEST_CASE("parallel lines give max(m, n) distances exactly") {
  for (int m = 1; m <= 20; ++m) {
    for (int n = 1; n <= 20; n += 3) {
      const auto cfg = generate(spec_of(Family::ParallelLines, m, n));
      CHECK(cfg.is_exact());
      CHECK(metrics::distance_histogram(cfg).distinct() == static_cast<std::size_t>(std::max(m, n)));
    }
  }
}

TEST_CASE("exceptional families stay within m + n distances") {
  for (int n : {5, 12, 30}) {
    for (int m : {4, 9, 30}) {
      CHECK(distinct(spec_of(Family::ParallelLines, m, n)) <= static_cast<std::size_t>(m + n));
      CHECK(distinct(spec_of(Family::OrthogonalLines, m, n)) == static_cast<std::size_t>(m + n - 1));
    }
    ConfigSpec c = spec_of(Family::ConcentricCircles, n, n);
    CHECK(distinct(c) <= static_cast<std::size_t>(2 * n));
  }
}

TEST_CASE("every generated point lies on its curve") {
  std::vector<ConfigSpec> specs;
  for (auto s : {SchemeKind::Arithmetic, SchemeKind::Uniform, SchemeKind::Geometric}) {
    for (auto f : {Family::ParallelLines, Family::OrthogonalLines, Family::GenericLines, Family::OnCurve}) {
      ConfigSpec c = spec_of(f, 9, 13, s);
      c.seed = 42;
      specs.push_back(c);
    }
  }
  specs.push_back(spec_of(Family::ConcentricCircles, 9, 13));
  specs.push_back(spec_of(Family::ConcentricCircles, 9, 13, SchemeKind::Uniform));
  for (const auto& a : arc_preset_names()) {
    ConfigSpec c = spec_of(Family::OnCurve, 6, 7);
    c.arc1 = a;
    c.arc2 = a == "exp" ? "log" : "exp";
    specs.push_back(c);
  }
  for (const auto& s : specs) {
    CAPTURE(s.label());
    const auto cfg = generate(s);
    CHECK(cfg.m() == static_cast<std::size_t>(s.m));
    CHECK(cfg.n() == static_cast<std::size_t>(s.n));
    CHECK(curve_residual(s, cfg) <= 1e-10);
  }
}

TEST_CASE("generation is deterministic in the seed") {
  ConfigSpec c = spec_of(Family::OnCurve, 20, 20, SchemeKind::Uniform);
  c.seed = 7;
  const auto a = generate(c), b = generate(c);
  CHECK(a.p1() == b.p1());
  CHECK(a.p2() == b.p2());
  c.seed = 8;
  CHECK(generate(c).p1() != a.p1());
}

TEST_CASE("scheme values") {
  const auto ar = scheme_values({SchemeKind::Arithmetic, 0}, 3, 0.0, 4.0, 0);
  CHECK(ar == std::vector<double>{1.0, 2.0, 3.0});
  const auto geo = scheme_values({SchemeKind::Geometric, 2.0}, 4, 1.0, 2.0, 0);
  for (int k = 1; k < 3; ++k) CHECK((geo[k + 1] - 1) / (geo[k] - 1) == doctest::Approx(2.0));
  const auto un = scheme_values({SchemeKind::Uniform, 0}, 50, -1.0, 1.0, 3);
  CHECK(std::is_sorted(un.begin(), un.end()));
  CHECK(un.front() > -1.0);
  CHECK(un.back() < 1.0);
  CHECK_THROWS_AS(scheme_values({SchemeKind::Geometric, 0.5}, 4, 1.0, 2.0, 0), Error);
}

TEST_CASE("config text round trip") {
  ConfigSpec c = spec_of(Family::OnCurve, 12, 34, SchemeKind::Geometric);
  c.scheme.ratio = 1.5;
  c.seed = 99;
  c.arc1 = "log";
  c.arc2 = "cubic";
  const ConfigSpec back = ConfigSpec::parse(c.to_text());
  CHECK(back.to_text() == c.to_text());

  const ConfigSpec lc = ConfigSpec::parse("family=logcircles\nm=3\nn=4\nA=1.5\nB=0.5\nD=6\n");
  CHECK(lc.log.A == 1.5);
  CHECK(lc.log.B == 0.5);
  CHECK(lc.log.D == 6);
  CHECK_THROWS_AS(ConfigSpec::parse("family=triangle"), Error);
  CHECK_THROWS_AS(ConfigSpec::parse("m=abc"), Error);
  CHECK_THROWS_AS(ConfigSpec::parse("colour=red"), Error);
  CHECK_THROWS_AS(ConfigSpec::parse("family=oncurve\narc1=spiral"), Error);
}

TEST_CASE("log-circle examples") {
  const LogCircleParams p;
  const auto one = gen_log_circles(p, 1, 1, {SchemeKind::Arithmetic, 0});
  REQUIRE(one.p.size() == 1);
  REQUIRE(one.q.size() == 1);
  CHECK(one.p[0].x == 1.0);
  CHECK(one.p[0].y == doctest::Approx(std::sqrt(5.0)));
  CHECK(one.p[0].z == 0.0);
  CHECK(one.q[0].x == 2.0);
  CHECK(one.q[0].y == 0.0);
  CHECK(one.q[0].z == doctest::Approx(1.0));
  CHECK(distinct_distances_3d(one.p, one.q) == 1);

  const auto geo = gen_log_circles(p, 8, 8, {SchemeKind::Geometric, 0});
  CHECK(distinct_distances_3d(geo.p, geo.q) <= 15);

  const auto gen = gen_log_circles(p, 8, 8, {SchemeKind::Uniform, 0}, 5);
  CHECK(distinct_distances_3d(gen.p, gen.q) == 64);
}

TEST_CASE("log-circle invariant") {
  const LogCircleParams p;
  const auto pts = gen_log_circles(p, 100, 100, {SchemeKind::Uniform, 0}, 17, true);
  CHECK(log_circle_residual(p, pts) < 1e-10);
  CHECK(log_circle_invariant(p, pts.p, pts.q) < 1e-9);

  // Equal u gives equal distances.
  const auto geo = gen_log_circles(p, 10, 10, {SchemeKind::Geometric, 0});
  for (int i = 1; i < 10; ++i) {
    const auto d2 = [](const Point3& a, const Point3& b) {
      return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z);
    };
    CHECK(d2(geo.p[i], geo.q[0]) == doctest::Approx(d2(geo.p[i - 1], geo.q[1])).epsilon(1e-12));
  }

  const LogCircleParams flat{0.0, 1.0, 5.0};
  const auto circles = gen_log_circles(flat, 5, 5, {SchemeKind::Arithmetic, 0}, 0, false, {1.0, 2.0}, {2.0, 2.2});
  CHECK(log_circle_invariant(flat, circles.p, circles.q) < 1e-9);

  std::vector<Point3> bad_q = {{0.5, 0, 0}};
  CHECK_THROWS_AS(log_circle_invariant(p, pts.p, bad_q), Error);
}

TEST_CASE("log-circle windows") {
  const LogCircleParams p;
  // 5 + 2 ln(x - 1) - x^2 > 0 for x in about (1.17, 2.36).
  const Window w = feasible_window(p, 2, 1.01, 3.0);
  CHECK(w.lo > 1.1);
  CHECK(w.lo < 1.25);
  CHECK(w.hi < 2.4);
  CHECK(w.hi > 2.3);
  CHECK(log_radicand2(p, w.lo) > 0);
  CHECK(log_radicand2(p, w.hi) > 0);
  try {
    gen_log_circles(p, 3, 3, {SchemeKind::Arithmetic, 0}, 0, false, {1.0, 2.0}, {2.0, 2.6});
    FAIL("expected a window error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Window);
    CHECK(std::string(e.what()).find("feasible range") != std::string::npos);
  }
  CHECK_THROWS_AS(feasible_window(p, 2, 3.0, 4.0), Error);
}

TEST_CASE("shared-ratio schemes are few-distance, generic schemes are not") {
  const LogCircleParams p;
  for (int n : {4, 16, 32, 64}) {
    const auto geo = gen_log_circles(p, n, n, {SchemeKind::Geometric, 0});
    CHECK(distinct_distances_3d(geo.p, geo.q) <= 2 * n - 1);
    const auto gen = gen_log_circles(p, n, n, {SchemeKind::Uniform, 0}, 11);
    const double bound = std::min({std::pow(n, 1.5), double(n) * n});
    CHECK(distinct_distances_3d(gen.p, gen.q) > bound / 16);
  }
}
