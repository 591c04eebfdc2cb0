#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pfaffdist/common.hpp"
#include "pfaffdist/curves.hpp"
#include "pfaffdist/metrics.hpp"

namespace pfaffdist::configurations {

enum class Family { ParallelLines, OrthogonalLines, GenericLines, ConcentricCircles, OnCurve, LogCircles };
enum class SchemeKind { Uniform, Arithmetic, Geometric };

std::string_view to_string(Family f);
std::string_view to_string(SchemeKind s);
Family parse_family(std::string_view text);
SchemeKind parse_scheme(std::string_view text);

struct Scheme {
  SchemeKind kind = SchemeKind::Arithmetic;
  // Geometric ratio; 0 picks the ratio that spans the window.
  double ratio = 0.0;
};

struct LogCircleParams {
  double A = 2.0, B = 1.0, D = 5.0;
};

struct ConfigSpec {
  Family family = Family::ParallelLines;
  int m = 1;
  int n = 1;
  Scheme scheme;
  std::uint64_t seed = 0;
  double angle = 1.0;              // GenericLines: direction of the second line
  double r1 = 1.0, r2 = 2.0;       // ConcentricCircles
  std::string arc1 = "exp";        // OnCurve presets
  std::string arc2 = "circle";
  LogCircleParams log;             // LogCircles
  bool mixed_branches = false;     // LogCircles: alternate the sign of the root

  void validate() const;
  // key=value lines
  std::string to_text() const;
  static ConfigSpec parse(std::string_view text);
  std::string label() const;
};

// Named arcs usable by OnCurve: exp, circle, line, parabola, cubic, log.
std::shared_ptr<const curves::PlanarArc> arc_preset(std::string_view name);
std::vector<std::string> arc_preset_names();

// x-values for `count` points on the open interval (lo, hi).
std::vector<double> scheme_values(const Scheme& scheme, int count, double lo, double hi, std::uint64_t seed);

metrics::PointConfiguration generate(const ConfigSpec& spec);

struct Point3 {
  double x = 0, y = 0, z = 0;
};

struct Window {
  double lo = 0, hi = 0;
};

// Radicands D + A ln x - (x-B)^2 (first circle, plane z = 0) and
// D + A ln(x-B) - x^2 (second circle, plane y = 0).
double log_radicand1(const LogCircleParams& p, double x);
double log_radicand2(const LogCircleParams& p, double x);

// Largest subinterval of [lo, hi] with a positive radicand, from a sign scan
// at 1000 grid points. Window error when none.
Window feasible_window(const LogCircleParams& p, int which, double lo, double hi);

struct LogCirclePoints {
  std::vector<Point3> p;  // on the first circle
  std::vector<Point3> q;  // on the second circle
  Window x_window, xp_window;
};

// Default windows x in [1, 2] and x' in [2, 2.3]; a shared-ratio Geometric
// scheme makes u = x (x' - B) run over a geometric progression.
LogCirclePoints gen_log_circles(const LogCircleParams& p, int m, int n, const Scheme& scheme,
                                std::uint64_t seed = 0, bool mixed_branches = false,
                                Window x_window = {1.0, 2.0}, Window xp_window = {2.0, 2.3});

// Max residual of the two circle equations.
double log_circle_residual(const LogCircleParams& p, const LogCirclePoints& pts);

std::int64_t distinct_distances_3d(const std::vector<Point3>& p, const std::vector<Point3>& q,
                                   double tol = 1e-9);

// max |dist^2(p, q) - (-2u + A ln u + 2D - B^2)| with u = p.x (q.x - B).
double log_circle_invariant(const LogCircleParams& params, const std::vector<Point3>& p,
                            const std::vector<Point3>& q);

// Max residual of the defining curve equations over a generated configuration.
double curve_residual(const ConfigSpec& spec, const metrics::PointConfiguration& cfg);

void write_points_csv(std::ostream& out, const std::vector<Point2>& pts);
void write_points_csv(std::ostream& out, const std::vector<Point3>& pts);

}  // namespace pfaffdist::configurations
