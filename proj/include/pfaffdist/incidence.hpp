#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "pfaffdist/common.hpp"
#include "pfaffdist/curves.hpp"
#include "pfaffdist/metrics.hpp"
#include "pfaffdist/polynomial.hpp"

namespace pfaffdist::incidence {

using curves::PlanarArc;
using metrics::PointConfiguration;

// C_{i,j}: pairs (q, q') on the arc with |p_i q| = |p_j q'|.
struct DistanceCurve {
  Point2 pi;
  Point2 pj;
  std::shared_ptr<const PlanarArc> arc;
  int i = 0;
  int j = 0;
};

bool is_incident(const DistanceCurve& c, Point2 q, Point2 q2, double tol = 1e-9);

// F(x, y) = |p_i (x, g2(x))|^2 - |p_j (y, g2(y))|^2 on the arc's x-interval
// squared. F is separable: F(x, y) = A(x) - B(y).
class ProjectedCurve {
 public:
  explicit ProjectedCurve(DistanceCurve source);

  const DistanceCurve& source() const { return src_; }
  double a(double x) const;
  double b(double y) const;
  double operator()(double x, double y) const { return a(x) - b(y); }
  // (dF/dx, dF/dy)
  std::pair<double, double> gradient(double x, double y) const;
  // Point of C_{i,j} in R^4 over (x, y).
  std::pair<Point2, Point2> lift(double x, double y) const;

 private:
  DistanceCurve src_;
  curves::Parameterization g_;
};

ProjectedCurve project_curve(const DistanceCurve& c);

// I(P_c, Gamma) by testing every (point, curve) pair on the squared
// distance table; equals metrics::proximity_energy.
BigInt count_incidences(const PointConfiguration& cfg, double c, double tol = 1e-9);

// Largest number of curves of Gamma through two distinct points of P_c.
std::int64_t empirical_multiplicity(const PointConfiguration& cfg, double c, double tol = 1e-9);

struct IntersectionPoint {
  double x = 0.0;  // q_x
  double y = 0.0;  // q'_x
  int cluster_size = 0;
};

struct IntersectionResult {
  std::vector<IntersectionPoint> points;
  bool overlap_suspected = false;
};

// Common zeros of the projected equations on a grid x grid lattice over the
// arc box, refined by Levenberg-Marquardt and clustered.
IntersectionResult intersect_curves(const std::vector<DistanceCurve>& cs, int grid, double tol = 1e-9);
IntersectionResult pairwise_intersection(const DistanceCurve& c1, const DistanceCurve& c2,
                                         int grid = 64, double tol = 1e-9);

// Names the first violated hypothesis |p_i p_k| != |p_j p_l|,
// |p_i p_s| != |p_j p_t|, |p_k p_s| != |p_l p_t|; Precondition error.
void check_triple_hypotheses(const DistanceCurve& c1, const DistanceCurve& c2,
                             const DistanceCurve& c3, double tol = 1e-9);

// Isolated common points of three curves; the count must agree at grid and
// 2 * grid, otherwise Inconclusive.
int triple_intersection_count(const DistanceCurve& c1, const DistanceCurve& c2,
                              const DistanceCurve& c3, int grid = 48, double tol = 1e-9);

struct StableCount {
  int coarse = 0;
  int fine = 0;
  bool overlap_suspected = false;
  bool stable() const { return coarse == fine && !overlap_suspected; }
};
StableCount stable_pairwise_count(const DistanceCurve& c1, const DistanceCurve& c2, int grid = 48,
                                  double tol = 1e-9);

// CSV rows `i,j,k,l,x,y,cluster_size`.
void write_intersections_csv(std::ostream& out, const DistanceCurve& c1, const DistanceCurve& c2,
                             const IntersectionResult& r, bool header = true);

// Canonical coordinates for the six anchors p_i, p_k, p_s and p_j, p_l, p_t.
struct CanonicalTriple {
  double a = 0, b = 0, w = 1, c = 0, d = 0;
  double scale = 1.0;  // 1 / |p_i p_k|
  double angle1 = 0.0;  // rotation applied after translating p_i to the origin
  double angle2 = 0.0;  // rotation applied after translating p_j to the origin
};

CanonicalTriple canonicalize_triple(Point2 pi, Point2 pk, Point2 ps, Point2 pj, Point2 pl, Point2 pt);

// Coefficients of the quadratic form in (X, Y) = (q_{2,x}, q_{2,y}):
// Axx X^2 + Ayy Y^2 + Axy XY + hx X + hy Y + h0 = 0.
struct QuadCoefficients {
  double axx = 0, ayy = 0, axy = 0;
  double hx = 0, hy = 0, h0 = 0;
};

// The same coefficients as exact polynomials in (a, b, c, d, w), obtained by
// eliminating q_1 from the three distance equations.
struct SymbolicQuad {
  Polynomial axx, ayy, axy, hx, hy, h0;
};
const SymbolicQuad& symbolic_quad();
// Variable order of the symbolic coefficients.
const std::vector<std::string>& symbolic_quad_variables();

QuadCoefficients quad_coefficients(const CanonicalTriple& t);

enum class Degeneracy { A0, A1, Wplus1, Wminus1, NonDegenerate };
std::string_view to_string(Degeneracy d);

// Which factor of a(a-1)(w+1)(w-1) vanishes on a triple whose form vanishes
// identically. Wplus1 means w + 1 = 0, Wminus1 means w - 1 = 0.
Degeneracy degeneracy_witness(const CanonicalTriple& t, double tol = 1e-9);

// Hypotheses of the triple lemma that fail: 0 for |p_i p_k| = |p_j p_l|,
// 1 for |p_i p_s| = |p_j p_t|, 2 for |p_k p_s| = |p_l p_t|.
std::vector<int> violated_hypotheses(Point2 pi, Point2 pk, Point2 ps, Point2 pj, Point2 pl, Point2 pt,
                                     double tol = 1e-9);

}  // namespace pfaffdist::incidence
