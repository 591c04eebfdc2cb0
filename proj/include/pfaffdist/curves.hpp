#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pfaffdist/common.hpp"
#include "pfaffdist/pfaffian.hpp"

namespace pfaffdist::curves {

using pfaffian::PfaffianFunction;

// Constant marks horizontal segments, which are graphs but not strictly
// monotone.
enum class Monotonicity { Increasing, Decreasing, Constant };

std::string_view to_string(Monotonicity m);
Monotonicity parse_monotonicity(std::string_view text);

// Line through the points p with dot(normal, p) = offset, where normal is the
// unit direction rotated by +90 degrees. direction.x > 0, or direction = (0, 1).
struct Line {
  Vec2 direction;
  double offset = 0.0;
};

struct Circle {
  Point2 center;
  double radius = 0.0;
};

struct OtherCurve {};

struct CurveClass {
  std::variant<Line, Circle, OtherCurve> shape;
  double residual = 0.0;

  bool is_line() const { return std::holds_alternative<Line>(shape); }
  bool is_circle() const { return std::holds_alternative<Circle>(shape); }
  bool is_other() const { return std::holds_alternative<OtherCurve>(shape); }
};

// Graph arc y = g2(x) of the zero set of a bivariate Pfaffian function over an
// open x-interval. The arc keeps a table of traced nodes that bracket g2.
class PlanarArc {
 public:
  // Traces the zero set from `seed` across (xlo, xhi). Throws Seed when the
  // seed is off the curve, GraphCondition when f_y vanishes or g2 is not
  // monotone on the interval.
  PlanarArc(PfaffianFunction f, double xlo, double xhi, Point2 seed,
            std::optional<CurveClass> exact_class = std::nullopt);

  const PfaffianFunction& function() const { return *f_; }
  std::shared_ptr<const PfaffianFunction> function_ptr() const { return f_; }
  double xlo() const { return xlo_; }
  double xhi() const { return xhi_; }
  Monotonicity monotonicity() const { return monotonicity_; }
  int fy_sign() const { return fy_sign_; }
  const std::vector<Point2>& nodes() const { return nodes_; }
  const std::optional<CurveClass>& exact_class() const { return exact_class_; }
  void set_exact_class(CurveClass c) { exact_class_ = std::move(c); }

  std::pair<double, double> y_range() const;
  bool contains_x(double x) const { return x > xlo_ && x < xhi_; }
  // Bracket for g2(x) taken from the neighbouring nodes.
  std::pair<double, double> bracket(double x) const;

 private:
  friend std::vector<PlanarArc> extract_monotone_arc(const PfaffianFunction&, Point2,
                                                     std::pair<double, double>, int);
  PlanarArc(std::shared_ptr<const PfaffianFunction> f, std::vector<Point2> nodes,
            Monotonicity mono);
  void finish();

  std::shared_ptr<const PfaffianFunction> f_;
  double xlo_ = 0.0;
  double xhi_ = 0.0;
  Monotonicity monotonicity_ = Monotonicity::Increasing;
  int fy_sign_ = 1;
  std::vector<Point2> nodes_;
  std::optional<CurveClass> exact_class_;
};

// Root of y -> f(x, y) inside [lo, hi] by a safeguarded secant/bisection
// iteration. Throws Bracket without a sign change, Convergence after
// max_iter iterations.
double solve_on_vertical(const PfaffianFunction& f, double x, double lo, double hi,
                         double tol = 1e-12, int max_iter = 200);

// y = g2(x) and its slope -f_x/f_y on an arc.
class Parameterization {
 public:
  explicit Parameterization(const PlanarArc& arc) : arc_(&arc) {}

  double value(double x) const;
  double slope(double x) const;  // Throws GraphCondition when f_y ~ 0.
  Point2 point(double x) const { return {x, value(x)}; }

 private:
  const PlanarArc* arc_;
};

Parameterization parameterize(const PlanarArc& arc);

// Continues the zero set from `seed` inside `window` and cuts it into
// strictly monotone (or constant) graph arcs. Continuation stops at vertical
// tangents and at the window or domain boundary. Step length is
// window length / (50 * samples).
std::vector<PlanarArc> extract_monotone_arc(const PfaffianFunction& f, Point2 seed,
                                            std::pair<double, double> window,
                                            int samples = 20);

// Least-squares line and algebraic circle fits on `samples` arc points; the
// exact class tag, when present, wins.
CurveClass classify_curve(const PlanarArc& arc, int samples = 50, double tol = 1e-6);
// Same fits on raw points.
CurveClass classify_points(const std::vector<Point2>& pts, double tol = 1e-6);

enum class DegeneratePair { ParallelLines, OrthogonalLines, ConcentricCircles, None };
std::string_view to_string(DegeneratePair d);

DegeneratePair degenerate_pair(const CurveClass& c1, const CurveClass& c2, double tol = 1e-6);

// Arc descriptor: "<function-ref> <xlo> <xhi> <monotonicity> <seed_x> <seed_y>".
std::string arc_descriptor(const PlanarArc& arc, std::string_view function_ref);
PlanarArc parse_arc_descriptor(
    std::string_view text,
    const std::function<PfaffianFunction(const std::string&)>& resolve);

}  // namespace pfaffdist::curves
