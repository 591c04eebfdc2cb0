#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "pfaffdist/curves.hpp"

using namespace pfaffdist;
using namespace pfaffdist::pfaffian;
using namespace pfaffdist::curves;

namespace {

PfaffianFunction plain(const std::string& expr) {
  return PfaffianFunction::from_expression(builtin_chain(BuiltinSpec::empty(2)), expr);
}

PfaffianFunction exp_curve() {
  return PfaffianFunction::from_expression(builtin_chain(BuiltinSpec::exp(1.0, 2)), "y - q1");
}

PfaffianFunction ln_curve() {
  return PfaffianFunction::from_expression(builtin_chain(BuiltinSpec::recip_ln(2)), "y - q2");
}

// x^pi + y^pi = 1 on the positive quadrant, chain (1/x, x^pi, 1/y, y^pi)
// integrated from (1, 1).
PfaffianFunction superellipse() {
  const auto names = variable_names(2, 4);
  auto P = [&](const std::string& e) { return Polynomial::parse_expression(e, names); };
  const std::string pi = fmt::format("{:.17g}", std::numbers::pi);
  std::vector<std::vector<Polynomial>> derivs = {
      {P("-q1^2"), P("0")},
      {P(pi + "*q1*q2"), P("0")},
      {P("0"), P("-q3^2")},
      {P("0"), P(pi + "*q3*q4")},
  };
  const double inf = std::numeric_limits<double>::infinity();
  PfaffianChain chain(2, derivs, Box{{0.0, 0.0}, {inf, inf}}, OdeAnchor{{1.0, 1.0}, {1, 1, 1, 1}});
  return PfaffianFunction(chain, Polynomial::parse_expression("q2 + q4 - 1", names));
}

// Sign changes of y -> f(x, y) on a fine grid over [lo, hi].
int roots_on_vertical(const PfaffianFunction& f, double x, double lo, double hi) {
  const int n = 400;
  int changes = 0;
  double prev = f.eval(x, lo);
  for (int k = 1; k <= n; ++k) {
    const double v = f.eval(x, lo + (hi - lo) * k / n);
    if ((v > 0) != (prev > 0) || v == 0.0) ++changes;
    prev = v;
  }
  return changes;
}

void check_arc_invariants(const PlanarArc& arc) {
  const Parameterization g(arc);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(arc.xlo(), arc.xhi());
  auto [ylo, yhi] = arc.y_range();
  const double pad = 1e-9 * (1.0 + std::fabs(ylo) + std::fabs(yhi));
  for (int k = 0; k < 100; ++k) {
    const double x = u(rng);
    if (!arc.contains_x(x)) continue;
    const double y = g.value(x);
    CHECK(std::fabs(arc.function().eval(x, y)) <= 1e-10);
    CHECK(y >= ylo - pad);
    CHECK(y <= yhi + pad);
    if (yhi - ylo > 1e-6) CHECK(roots_on_vertical(arc.function(), x, ylo - pad, yhi + pad) == 1);
  }
  if (arc.monotonicity() == Monotonicity::Constant) return;
  const int n = 200;
  double prev = g.value(arc.xlo() + (arc.xhi() - arc.xlo()) / (n + 1));
  for (int k = 2; k <= n; ++k) {
    const double v = g.value(arc.xlo() + (arc.xhi() - arc.xlo()) * k / (n + 1));
    if (arc.monotonicity() == Monotonicity::Increasing) {
      CHECK(v - prev > 1e-12);
    } else {
      CHECK(prev - v > 1e-12);
    }
    prev = v;
  }
}

}  // namespace

TEST_CASE("solve_on_vertical examples") {
  CHECK(solve_on_vertical(plain("x^2 + y^2 - 1"), 0.6, 0.0, 1.0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(solve_on_vertical(exp_curve(), 0.0, 0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  const double y = solve_on_vertical(ln_curve(), std::exp(1.0), 0.0, 2.0, 1e-13);
  CHECK(std::fabs(y - 1.0) <= 1e-12);
  CHECK(std::fabs(ln_curve().eval(std::exp(1.0), y)) <= 1e-13);
}

TEST_CASE("solve_on_vertical errors") {
  const auto circle = plain("x^2 + y^2 - 1");
  CHECK_THROWS_AS(solve_on_vertical(circle, 0.6, 0.9, 2.0), Error);
  try {
    solve_on_vertical(circle, 0.6, 0.9, 2.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Bracket);
  }
  try {
    solve_on_vertical(circle, 0.6, 0.0, 1.0, 0.0, 3);
    FAIL("expected a convergence error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Convergence);
  }
}

TEST_CASE("parameterize examples") {
  const PlanarArc e(exp_curve(), -1.0, 1.0, {0.0, 1.0});
  const auto ge = parameterize(e);
  CHECK(ge.value(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ge.slope(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.monotonicity() == Monotonicity::Increasing);

  const PlanarArc c(plain("x^2 + y^2 - 1"), 0.0, 1.0, {0.5, std::sqrt(0.75)});
  const auto gc = parameterize(c);
  CHECK(gc.value(0.6) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(gc.slope(0.6) == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(c.monotonicity() == Monotonicity::Decreasing);

  const PlanarArc l(plain("y - 3*x - 1"), -2.0, 2.0, {0.0, 1.0});
  const auto gl = parameterize(l);
  for (double x : {-1.9, -0.3, 0.0, 1.2, 1.99}) {
    CHECK(gl.slope(x) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::fabs(l.function().eval(x, gl.value(x))) <= 1e-10);
  }
}

TEST_CASE("arcs reject bad seeds and non-graphs") {
  const auto circle = plain("x^2 + y^2 - 1");
  try {
    PlanarArc(circle, 0.0, 0.5, {0.3, 0.3});
    FAIL("expected a seed error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Seed);
  }
  try {
    PlanarArc(circle, -0.5, 0.5, {0.0, 1.0});
    FAIL("expected a graph-condition error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GraphCondition);
  }
  try {
    PlanarArc(circle, 0.0, 1.5, {0.5, std::sqrt(0.75)});
    FAIL("expected a graph-condition error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GraphCondition);
  }
  try {
    extract_monotone_arc(circle, {0.3, 0.3}, {-1.0, 1.0});
    FAIL("expected a seed error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Seed);
  }
}

TEST_CASE("extract_monotone_arc examples") {
  const auto e = extract_monotone_arc(exp_curve(), {0.0, 1.0}, {0.0, 1.0});
  REQUIRE(e.size() == 1);
  CHECK(e[0].monotonicity() == Monotonicity::Increasing);
  CHECK(e[0].xlo() == doctest::Approx(0.0));
  CHECK(e[0].xhi() == doctest::Approx(1.0));

  const auto p = extract_monotone_arc(plain("y - x^2"), {0.0, 0.0}, {-1.0, 1.0});
  REQUIRE(p.size() == 2);
  CHECK(p[0].monotonicity() == Monotonicity::Decreasing);
  CHECK(p[1].monotonicity() == Monotonicity::Increasing);
  CHECK(std::fabs(p[0].xhi()) < 1e-9);
  CHECK(std::fabs(p[1].xlo()) < 1e-9);

  const auto c = extract_monotone_arc(plain("x^2 + y^2 - 1"), {0.0, 1.0}, {-0.9, 0.9});
  REQUIRE(c.size() == 2);
  CHECK(c[0].monotonicity() == Monotonicity::Increasing);
  CHECK(c[1].monotonicity() == Monotonicity::Decreasing);
  CHECK(std::fabs(c[0].xhi()) < 1e-9);

  // A full circle window stops at the vertical tangents.
  const auto full = extract_monotone_arc(plain("x^2 + y^2 - 1"), {0.0, 1.0}, {-2.0, 2.0});
  REQUIRE(full.size() == 2);
  CHECK(full[0].xlo() > -1.0);
  CHECK(full[1].xhi() < 1.0);
  CHECK(full[1].xhi() > 0.999);
}

TEST_CASE("graph and monotonicity properties of extracted arcs") {
  std::vector<PlanarArc> arcs;
  for (auto& a : extract_monotone_arc(exp_curve(), {0.0, 1.0}, {-1.0, 2.0})) arcs.push_back(a);
  for (auto& a : extract_monotone_arc(plain("y - x^2"), {0.0, 0.0}, {-1.0, 1.0})) arcs.push_back(a);
  for (auto& a : extract_monotone_arc(plain("x^2 + y^2 - 1"), {0.0, -1.0}, {-1.5, 1.5})) arcs.push_back(a);
  for (auto& a : extract_monotone_arc(plain("y - x^3 + x"), {0.0, 0.0}, {-2.0, 2.0})) arcs.push_back(a);
  for (auto& a : extract_monotone_arc(ln_curve(), {1.0, 0.0}, {0.1, 5.0})) arcs.push_back(a);
  CHECK(arcs.size() == 1 + 2 + 2 + 3 + 1);
  for (const auto& arc : arcs) check_arc_invariants(arc);
}

TEST_CASE("classify_curve examples") {
  const auto halves = extract_monotone_arc(plain("x^2 + y^2 - 4"), {0.0, 2.0}, {-1.9, 1.9});
  REQUIRE(halves.size() == 2);
  for (const auto& h : halves) {
    const CurveClass c = classify_curve(h);
    REQUIRE(c.is_circle());
    const Circle circle = std::get<Circle>(c.shape);
    CHECK(std::fabs(circle.center.x) < 1e-8);
    CHECK(std::fabs(circle.center.y) < 1e-8);
    CHECK(circle.radius == doctest::Approx(2.0).epsilon(1e-10));
  }

  const PlanarArc l(plain("y - 3*x - 1"), -1.0, 1.0, {0.0, 1.0});
  const CurveClass lc = classify_curve(l);
  REQUIRE(lc.is_line());
  const Line line = std::get<Line>(lc.shape);
  CHECK(line.direction.x == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-12));
  CHECK(line.direction.y == doctest::Approx(3.0 / std::sqrt(10.0)).epsilon(1e-12));

  const PlanarArc e(exp_curve(), 0.0, 1.0, {0.5, std::exp(0.5)});
  const CurveClass ec = classify_curve(e);
  CHECK(ec.is_other());
  CHECK(ec.residual > 1e-6);

  CHECK_THROWS_AS(classify_curve(e, 4), Error);
}

TEST_CASE("classification soundness on random lines and circles") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> rad(0.5, 4.0);
  for (int t = 0; t < 20; ++t) {
    const double a = u(rng), b = u(rng);
    const auto f = plain(fmt::format("y - ({:.17g})*x - ({:.17g})", a, b));
    const PlanarArc arc(f, -1.0, 1.0, {0.0, b});
    const CurveClass c = classify_curve(arc);
    REQUIRE(c.is_line());
    const Line line = std::get<Line>(c.shape);
    const double s = std::sqrt(1 + a * a);
    CHECK(std::fabs(line.direction.x - 1 / s) < 1e-8);
    CHECK(std::fabs(line.direction.y - a / s) < 1e-8);
    // normal (-a, 1)/s, so offset = b / s
    CHECK(std::fabs(line.offset - b / s) < 1e-8);
  }
  for (int t = 0; t < 20; ++t) {
    const double cx = u(rng), cy = u(rng), r = rad(rng);
    const auto f = plain(fmt::format("(x - ({0:.17g}))^2 + (y - ({1:.17g}))^2 - ({2:.17g})^2", cx, cy, r));
    const double x0 = cx + 0.5 * r;
    const PlanarArc arc(f, cx + 0.05 * r, cx + 0.95 * r, {x0, cy + std::sqrt(r * r - 0.25 * r * r)});
    const CurveClass c = classify_curve(arc);
    REQUIRE(c.is_circle());
    const Circle circle = std::get<Circle>(c.shape);
    CHECK(std::fabs(circle.center.x - cx) < 1e-8);
    CHECK(std::fabs(circle.center.y - cy) < 1e-8);
    CHECK(std::fabs(circle.radius - r) < 1e-8);
  }
  const double y0 = std::pow(1 - std::pow(0.5, std::numbers::pi), 1 / std::numbers::pi);
  const PlanarArc se(superellipse(), 0.1, 0.9, {0.5, y0});
  CHECK(se.monotonicity() == Monotonicity::Decreasing);
  CHECK(classify_curve(se).is_other());
}

TEST_CASE("exact class tags override fitting") {
  CurveClass tag{Circle{{0, 0}, 1}, 0.0};
  const PlanarArc e(exp_curve(), 0.0, 1.0, {0.5, std::exp(0.5)}, tag);
  CHECK(classify_curve(e).is_circle());
}

TEST_CASE("degenerate_pair examples") {
  const CurveClass l1{Line{{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}, 0.0}, 0.0};
  const CurveClass l2{Line{{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}, 1.0}, 0.0};
  const CurveClass l3{Line{{1 / std::sqrt(2.0), -1 / std::sqrt(2.0)}, 0.0}, 0.0};
  const CurveClass c1{Circle{{0, 0}, 1}, 0.0};
  const CurveClass c2{Circle{{0, 0}, 2}, 0.0};
  const CurveClass c3{Circle{{0, 1}, 2}, 0.0};
  CHECK(degenerate_pair(l1, l2) == DegeneratePair::ParallelLines);
  CHECK(degenerate_pair(l1, l3) == DegeneratePair::OrthogonalLines);
  CHECK(degenerate_pair(c1, c2) == DegeneratePair::ConcentricCircles);
  CHECK(degenerate_pair(c1, c3) == DegeneratePair::None);
  CHECK(degenerate_pair(l1, c1) == DegeneratePair::None);
  CHECK(degenerate_pair(CurveClass{OtherCurve{}, 1.0}, c1) == DegeneratePair::None);
}

TEST_CASE("arc descriptors round trip") {
  const PlanarArc c(plain("x^2 + y^2 - 1"), 0.1, 0.9, {0.5, std::sqrt(0.75)});
  const std::string text = arc_descriptor(c, "circle");
  const auto resolve = [](const std::string& ref) {
    if (ref == "circle") return plain("x^2 + y^2 - 1");
    throw Error(ErrorCode::Parse, "unknown function " + ref);
  };
  const PlanarArc back = parse_arc_descriptor(text, resolve);
  CHECK(back.xlo() == c.xlo());
  CHECK(back.xhi() == c.xhi());
  CHECK(back.monotonicity() == c.monotonicity());
  CHECK(parameterize(back).value(0.6) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK_THROWS_AS(parse_arc_descriptor("circle 0.1 0.9 increasing 0.5 0.866", resolve), Error);
  CHECK_THROWS_AS(parse_arc_descriptor("circle 0.1", resolve), Error);
}
