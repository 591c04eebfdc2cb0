#include "pfaffdist/incidence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <ostream>
#include <unordered_map>

#include <fmt/format.h>

namespace pfaffdist::incidence {

namespace {

bool close_rel(double u, double v, double tol) {
  return std::fabs(u - v) <= tol * std::max(std::fabs(u), std::fabs(v));
}

// Squared distances d[i][a] = |p_i q_a|^2 and a comparison that is exact for
// rational configurations.
class DistanceTable {
 public:
  DistanceTable(const PointConfiguration& cfg, double tol) : n_(cfg.n()), tol_(tol) {
    for (const auto& p : cfg.p1()) {
      for (const auto& q : cfg.p2()) d_.push_back(squared_distance(p, q));
    }
    if (cfg.is_exact()) {
      for (const auto& p : cfg.exact_p1()) {
        for (const auto& q : cfg.exact_p2()) {
          const Rational dx = p.x - q.x, dy = p.y - q.y;
          exact_.push_back(dx * dx + dy * dy);
        }
      }
    }
  }

  bool equal(std::size_t i, std::size_t a, std::size_t j, std::size_t b) const {
    const std::size_t u = i * n_ + a, v = j * n_ + b;
    if (exact_.empty()) return close_rel(d_[u], d_[v], tol_);
    if (!close_rel(d_[u], d_[v], 1e-6)) return false;
    return exact_[u] == exact_[v];
  }

 private:
  std::size_t n_;
  double tol_;
  std::vector<double> d_;
  std::vector<Rational> exact_;
};

struct Box2 {
  double lo, hi;
};

// Levenberg-Marquardt on the projected equations from (x, y).
std::optional<Point2> refine(const std::vector<ProjectedCurve>& fs, Point2 start, Box2 box,
                             double abs_tol) {
  const double margin = 1e-12 * (box.hi - box.lo);
  auto clamp = [&](double v) { return std::clamp(v, box.lo + margin, box.hi - margin); };
  auto residuals = [&](Point2 p, std::vector<double>& r) {
    r.clear();
    for (const auto& f : fs) r.push_back(f(p.x, p.y));
  };
  auto cost_of = [](const std::vector<double>& r) {
    double s = 0;
    for (double v : r) s += v * v;
    return s;
  };
  auto max_abs = [](const std::vector<double>& r) {
    double s = 0;
    for (double v : r) s = std::max(s, std::fabs(v));
    return s;
  };
  Point2 p = start;
  std::vector<double> r, rt;
  double lambda = 1e-3;
  try {
    residuals(p, r);
    double cost = cost_of(r);
    for (int it = 0; it < 80; ++it) {
      if (max_abs(r) <= abs_tol) return p;
      double jxx = 0, jxy = 0, jyy = 0, gx = 0, gy = 0;
      for (std::size_t k = 0; k < fs.size(); ++k) {
        const auto [dx, dy] = fs[k].gradient(p.x, p.y);
        jxx += dx * dx;
        jxy += dx * dy;
        jyy += dy * dy;
        gx += dx * r[k];
        gy += dy * r[k];
      }
      bool improved = false;
      while (lambda < 1e14) {
        const double axx = jxx * (1 + lambda) + 1e-300, ayy = jyy * (1 + lambda) + 1e-300;
        const double det = axx * ayy - jxy * jxy;
        if (det == 0.0 || !std::isfinite(det)) {
          lambda *= 10;
          continue;
        }
        const double sx = -(ayy * gx - jxy * gy) / det;
        const double sy = -(axx * gy - jxy * gx) / det;
        const Point2 trial{clamp(p.x + sx), clamp(p.y + sy)};
        residuals(trial, rt);
        const double ct = cost_of(rt);
        if (ct < cost) {
          const double moved = std::hypot(trial.x - p.x, trial.y - p.y);
          p = trial;
          r.swap(rt);
          cost = ct;
          lambda = std::max(lambda / 5, 1e-12);
          improved = true;
          if (moved <= 1e-15 * (box.hi - box.lo) && max_abs(r) > abs_tol) return std::nullopt;
          break;
        }
        lambda *= 4;
      }
      if (!improved) break;
    }
    if (max_abs(r) <= abs_tol) return p;
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

bool is_incident(const DistanceCurve& c, Point2 q, Point2 q2, double tol) {
  return close_rel(squared_distance(c.pi, q), squared_distance(c.pj, q2), tol);
}

// ---------------------------------------------------------------------------
// Projected curves

ProjectedCurve::ProjectedCurve(DistanceCurve source) : src_(std::move(source)), g_(*src_.arc) {}

double ProjectedCurve::a(double x) const {
  return squared_distance(src_.pi, {x, g_.value(x)});
}

double ProjectedCurve::b(double y) const {
  return squared_distance(src_.pj, {y, g_.value(y)});
}

std::pair<double, double> ProjectedCurve::gradient(double x, double y) const {
  const double gx = g_.value(x), sx = g_.slope(x);
  const double gy = g_.value(y), sy = g_.slope(y);
  const double dfx = -2 * (src_.pi.x - x) - 2 * (src_.pi.y - gx) * sx;
  const double dfy = 2 * (src_.pj.x - y) + 2 * (src_.pj.y - gy) * sy;
  return {dfx, dfy};
}

std::pair<Point2, Point2> ProjectedCurve::lift(double x, double y) const {
  return {g_.point(x), g_.point(y)};
}

ProjectedCurve project_curve(const DistanceCurve& c) {
  if (!c.arc) throw Error(ErrorCode::Parameter, "distance curve without an arc");
  return ProjectedCurve(c);
}

// ---------------------------------------------------------------------------
// Incidences

BigInt count_incidences(const PointConfiguration& cfg, double c, double tol) {
  const std::int64_t wm = metrics::proximity_window(c, cfg.m());
  const std::int64_t wn = metrics::proximity_window(c, cfg.n());
  if (cfg.m() == 0 || cfg.n() == 0) throw Error(ErrorCode::Parameter, "both point sets must be non-empty");
  const DistanceTable table(cfg, tol);
  const auto m = static_cast<std::int64_t>(cfg.m()), n = static_cast<std::int64_t>(cfg.n());
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < m; ++i) {
    for (std::int64_t j = std::max<std::int64_t>(0, i - wm); j <= std::min(m - 1, i + wm); ++j) {
      // curve C_{i,j} against every point (q_a, q_b) of P_c
      for (std::int64_t a = 0; a < n; ++a) {
        for (std::int64_t b = std::max<std::int64_t>(0, a - wn); b <= std::min(n - 1, a + wn); ++b) {
          if (table.equal(i, a, j, b)) ++count;
        }
      }
    }
  }
  return BigInt(count);
}

std::int64_t empirical_multiplicity(const PointConfiguration& cfg, double c, double tol) {
  const std::int64_t wm = metrics::proximity_window(c, cfg.m());
  const std::int64_t wn = metrics::proximity_window(c, cfg.n());
  const DistanceTable table(cfg, tol);
  const auto m = static_cast<std::int64_t>(cfg.m()), n = static_cast<std::int64_t>(cfg.n());
  std::unordered_map<std::uint64_t, std::int64_t> shared;
  std::int64_t best = 0;
  std::vector<std::uint64_t> on_curve;
  for (std::int64_t i = 0; i < m; ++i) {
    for (std::int64_t j = std::max<std::int64_t>(0, i - wm); j <= std::min(m - 1, i + wm); ++j) {
      on_curve.clear();
      for (std::int64_t a = 0; a < n; ++a) {
        for (std::int64_t b = std::max<std::int64_t>(0, a - wn); b <= std::min(n - 1, a + wn); ++b) {
          if (table.equal(i, a, j, b)) on_curve.push_back(static_cast<std::uint64_t>(a * n + b));
        }
      }
      const std::uint64_t stride = static_cast<std::uint64_t>(n) * n;
      for (std::size_t u = 0; u < on_curve.size(); ++u) {
        for (std::size_t v = u + 1; v < on_curve.size(); ++v) {
          best = std::max(best, ++shared[on_curve[u] * stride + on_curve[v]]);
        }
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Intersections

IntersectionResult intersect_curves(const std::vector<DistanceCurve>& cs, int grid, double tol) {
  if (cs.size() < 2) throw Error(ErrorCode::Parameter, "intersection needs at least two curves");
  if (grid < 4) throw Error(ErrorCode::Parameter, "intersection grid must be at least 4");
  const PlanarArc& arc = *cs.front().arc;
  for (const auto& c : cs) {
    if (c.arc.get() != &arc && (c.arc->xlo() != arc.xlo() || c.arc->xhi() != arc.xhi() ||
                                c.arc->function_ptr() != arc.function_ptr())) {
      throw Error(ErrorCode::Parameter, "intersected curves must share the same arc");
    }
  }
  std::vector<ProjectedCurve> fs;
  for (const auto& c : cs) fs.push_back(project_curve(c));

  const double len = arc.xhi() - arc.xlo();
  const Box2 box{arc.xlo(), arc.xhi()};
  const double margin = 1e-9 * len;
  std::vector<double> nodes(grid + 1);
  for (int k = 0; k <= grid; ++k) nodes[k] = arc.xlo() + margin + (len - 2 * margin) * k / grid;

  // F_c(x_k, y_l) = A_c[k] - B_c[l]
  std::vector<std::vector<double>> A(fs.size()), B(fs.size());
  double scale = 1.0;
  for (std::size_t c = 0; c < fs.size(); ++c) {
    for (double x : nodes) {
      A[c].push_back(fs[c].a(x));
      B[c].push_back(fs[c].b(x));
      scale = std::max({scale, std::fabs(A[c].back()), std::fabs(B[c].back())});
    }
  }
  const double abs_tol = tol * scale;

  auto block_has_zero = [&](std::size_t c, int k, int l) {
    bool pos = false, neg = false;
    for (int u = k; u <= k + 2; ++u) {
      for (int v = l; v <= l + 2; ++v) {
        const double f = A[c][u] - B[c][v];
        if (f >= 0) pos = true;
        if (f <= 0) neg = true;
      }
    }
    return pos && neg;
  };

  std::vector<Point2> roots;
  for (int k = 0; k + 2 <= grid; ++k) {
    for (int l = 0; l + 2 <= grid; ++l) {
      bool all = true;
      for (std::size_t c = 0; c < fs.size() && all; ++c) all = block_has_zero(c, k, l);
      if (!all) continue;
      if (auto p = refine(fs, {nodes[k + 1], nodes[l + 1]}, box, abs_tol)) roots.push_back(*p);
    }
  }

  std::sort(roots.begin(), roots.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  const double merge = 1e-6 * len;
  IntersectionResult out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t u = 0; u < roots.size(); ++u) {
    if (used[u]) continue;
    IntersectionPoint ip{roots[u].x, roots[u].y, 1};
    used[u] = true;
    for (std::size_t v = u + 1; v < roots.size() && roots[v].x - roots[u].x <= merge; ++v) {
      if (!used[v] && std::fabs(roots[v].y - roots[u].y) <= merge) {
        used[v] = true;
        ++ip.cluster_size;
      }
    }
    out.points.push_back(ip);
  }
  out.overlap_suspected = static_cast<int>(out.points.size()) > grid / 2;
  return out;
}

IntersectionResult pairwise_intersection(const DistanceCurve& c1, const DistanceCurve& c2, int grid,
                                         double tol) {
  return intersect_curves({c1, c2}, grid, tol);
}

StableCount stable_pairwise_count(const DistanceCurve& c1, const DistanceCurve& c2, int grid,
                                  double tol) {
  const auto coarse = pairwise_intersection(c1, c2, grid, tol);
  const auto fine = pairwise_intersection(c1, c2, 2 * grid, tol);
  return {static_cast<int>(coarse.points.size()), static_cast<int>(fine.points.size()),
          coarse.overlap_suspected || fine.overlap_suspected};
}

std::vector<int> violated_hypotheses(Point2 pi, Point2 pk, Point2 ps, Point2 pj, Point2 pl, Point2 pt,
                                     double tol) {
  std::vector<int> bad;
  if (close_rel(squared_distance(pi, pk), squared_distance(pj, pl), tol)) bad.push_back(0);
  if (close_rel(squared_distance(pi, ps), squared_distance(pj, pt), tol)) bad.push_back(1);
  if (close_rel(squared_distance(pk, ps), squared_distance(pl, pt), tol)) bad.push_back(2);
  return bad;
}

void check_triple_hypotheses(const DistanceCurve& c1, const DistanceCurve& c2,
                             const DistanceCurve& c3, double tol) {
  const auto bad = violated_hypotheses(c1.pi, c2.pi, c3.pi, c1.pj, c2.pj, c3.pj, tol);
  if (bad.empty()) return;
  const DistanceCurve* pairs[3][2] = {{&c1, &c2}, {&c1, &c3}, {&c2, &c3}};
  const auto& [u, v] = pairs[bad.front()];
  throw Error(ErrorCode::Precondition,
              fmt::format("|p_{} p_{}| = |p_{} p_{}| for curves C({},{}) and C({},{})", u->i, v->i,
                          u->j, v->j, u->i, u->j, v->i, v->j));
}

int triple_intersection_count(const DistanceCurve& c1, const DistanceCurve& c2,
                              const DistanceCurve& c3, int grid, double tol) {
  check_triple_hypotheses(c1, c2, c3, tol);
  const auto coarse = intersect_curves({c1, c2, c3}, grid, tol);
  const auto fine = intersect_curves({c1, c2, c3}, 2 * grid, tol);
  if (coarse.points.size() != fine.points.size()) {
    throw Error(ErrorCode::Inconclusive,
                fmt::format("triple intersection count changed from {} to {} under grid doubling",
                            coarse.points.size(), fine.points.size()));
  }
  if (coarse.overlap_suspected || fine.overlap_suspected) {
    throw Error(ErrorCode::Inconclusive, "triple intersection looks one-dimensional");
  }
  return static_cast<int>(fine.points.size());
}

void write_intersections_csv(std::ostream& out, const DistanceCurve& c1, const DistanceCurve& c2,
                             const IntersectionResult& r, bool header) {
  if (header) out << "i,j,k,l,x,y,cluster_size\n";
  for (const auto& p : r.points) {
    out << fmt::format("{},{},{},{},{:.17g},{:.17g},{}\n", c1.i, c1.j, c2.i, c2.j, p.x, p.y, p.cluster_size);
  }
}

// ---------------------------------------------------------------------------
// Canonical triples and the quadratic form

CanonicalTriple canonicalize_triple(Point2 pi, Point2 pk, Point2 ps, Point2 pj, Point2 pl, Point2 pt) {
  const Vec2 v1 = pk - pi, v2 = pl - pj;
  if (norm(v1) == 0.0 || norm(v2) == 0.0) {
    throw Error(ErrorCode::Degenerate, "coincident anchor points in a triple");
  }
  CanonicalTriple t;
  t.scale = 1.0 / norm(v1);
  t.angle1 = std::atan2(v1.y, v1.x);
  t.angle2 = std::atan2(v2.y, v2.x);
  auto frame = [&](Point2 p, Point2 origin, double angle) {
    const Vec2 d = p - origin;
    const double c = std::cos(angle), s = std::sin(angle);
    return Point2{t.scale * (c * d.x + s * d.y), t.scale * (-s * d.x + c * d.y)};
  };
  const Point2 s1 = frame(ps, pi, t.angle1);
  const Point2 t2 = frame(pt, pj, t.angle2);
  t.a = s1.x;
  t.b = s1.y;
  t.w = t.scale * norm(v2);
  t.c = t2.x;
  t.d = t2.y;
  return t;
}

namespace {

enum Var { VA, VB, VC, VD, VW, VX, VY, VQX, VQY, NVARS };

// Solves `eq` = 0 for `var`, which must occur linearly with a constant
// coefficient.
Polynomial solve_linear(const Polynomial& eq, std::size_t var) {
  Polynomial rest(eq.num_vars());
  Coeff coef(0);
  for (const auto& [e, c] : eq.terms()) {
    if (e[var] == 0) {
      rest.add_term(e, c);
      continue;
    }
    Polynomial::Exponents plain(e.size(), 0);
    plain[var] = 1;
    if (e != plain) throw Error(ErrorCode::Inconsistency, "variable does not occur linearly");
    coef = c;
  }
  if (coef.is_zero()) throw Error(ErrorCode::Inconsistency, "variable absent from the equation");
  return (Coeff(-1) / coef) * rest;
}

// Solves `eq` = 0 for the product factor*var, where var occurs only as
// const*factor*var.
Polynomial solve_product(const Polynomial& eq, std::size_t factor, std::size_t var) {
  Polynomial rest(eq.num_vars());
  Coeff coef(0);
  for (const auto& [e, c] : eq.terms()) {
    if (e[var] == 0) {
      rest.add_term(e, c);
      continue;
    }
    Polynomial::Exponents plain(e.size(), 0);
    plain[var] = 1;
    plain[factor] = 1;
    if (e != plain) throw Error(ErrorCode::Inconsistency, "product does not occur linearly");
    coef = c;
  }
  return (Coeff(-1) / coef) * rest;
}

// Replaces every factor^k * var^k (k = exponent of var) by value^k.
Polynomial substitute_product(const Polynomial& p, std::size_t factor, std::size_t var,
                              const Polynomial& value) {
  Polynomial out(p.num_vars());
  for (const auto& [e, c] : p.terms()) {
    const int k = e[var];
    if (e[factor] < k) throw Error(ErrorCode::Inconsistency, "product substitution needs more factors");
    Polynomial::Exponents rest = e;
    rest[var] = 0;
    rest[factor] -= k;
    Polynomial term(p.num_vars());
    term.add_term(rest, c);
    out += term * value.pow(k);
  }
  return out;
}

SymbolicQuad derive_quad() {
  const auto& names = symbolic_quad_variables();
  std::vector<std::string> all = names;
  for (const char* extra : {"X", "Y", "q1x", "q1y"}) all.push_back(extra);
  auto P = [&](const char* e) { return Polynomial::parse_expression(e, all); };
  const Polynomial eq1 = P("q1x^2 + q1y^2 - X^2 - Y^2");
  const Polynomial eq2 = P("(q1x - 1)^2 + q1y^2 - (X - w)^2 - Y^2");
  const Polynomial eq3 = P("(q1x - a)^2 + (q1y - b)^2 - (X - c)^2 - (Y - d)^2");

  const Polynomial q1x = solve_linear(eq2 - eq1, VQX);
  const Polynomial third = (eq3 - eq1).substitute(VQX, q1x);
  const Polynomial bq1y = solve_product(third, VB, VQY);
  const Polynomial form =
      substitute_product((P("b^2") * eq1).substitute(VQX, q1x), VB, VQY, bq1y);

  std::array<Polynomial, 6> parts;
  parts.fill(Polynomial(NVARS));
  for (const auto& [e, c] : form.terms()) {
    if (e[VQX] != 0 || e[VQY] != 0) throw Error(ErrorCode::Inconsistency, "q1 not eliminated");
    int slot = -1;
    if (e[VX] == 2 && e[VY] == 0) slot = 0;
    else if (e[VX] == 0 && e[VY] == 2) slot = 1;
    else if (e[VX] == 1 && e[VY] == 1) slot = 2;
    else if (e[VX] == 1 && e[VY] == 0) slot = 3;
    else if (e[VX] == 0 && e[VY] == 1) slot = 4;
    else if (e[VX] == 0 && e[VY] == 0) slot = 5;
    if (slot < 0) throw Error(ErrorCode::Inconsistency, "form is not quadratic in (X, Y)");
    Polynomial::Exponents rest = e;
    rest[VX] = rest[VY] = 0;
    parts[slot].add_term(rest, c);
  }
  auto shrink = [](const Polynomial& p) { return p.resized(5); };
  return {shrink(parts[0]), shrink(parts[1]), shrink(parts[2]),
          shrink(parts[3]), shrink(parts[4]), shrink(parts[5])};
}

}  // namespace

const std::vector<std::string>& symbolic_quad_variables() {
  static const std::vector<std::string> names = {"a", "b", "c", "d", "w"};
  return names;
}

const SymbolicQuad& symbolic_quad() {
  static const SymbolicQuad quad = derive_quad();
  return quad;
}

QuadCoefficients quad_coefficients(const CanonicalTriple& t) {
  const auto& s = symbolic_quad();
  const double at[5] = {t.a, t.b, t.c, t.d, t.w};
  return {s.axx.evaluate(at), s.ayy.evaluate(at), s.axy.evaluate(at),
          s.hx.evaluate(at),  s.hy.evaluate(at),  s.h0.evaluate(at)};
}

std::string_view to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::A0: return "a=0";
    case Degeneracy::A1: return "a=1";
    case Degeneracy::Wplus1: return "w=-1";
    case Degeneracy::Wminus1: return "w=1";
    case Degeneracy::NonDegenerate: return "non-degenerate";
  }
  return "";
}

Degeneracy degeneracy_witness(const CanonicalTriple& t, double tol) {
  const QuadCoefficients q = quad_coefficients(t);
  const double worst = std::max({std::fabs(q.axx), std::fabs(q.ayy), std::fabs(q.axy),
                                 std::fabs(q.hx), std::fabs(q.hy), std::fabs(q.h0)});
  if (worst > tol) return Degeneracy::NonDegenerate;
  // The constant term is k^2 with k = -a(a-1)(w+1)(w-1)/2, so a vanishing
  // form pins the product only to about sqrt(tol).
  const std::array<std::pair<double, Degeneracy>, 4> factors = {{
      {std::fabs(t.a), Degeneracy::A0},
      {std::fabs(t.a - 1), Degeneracy::A1},
      {std::fabs(t.w - 1), Degeneracy::Wminus1},
      {std::fabs(t.w + 1), Degeneracy::Wplus1},
  }};
  const double product = std::fabs(t.a * (t.a - 1) * (t.w + 1) * (t.w - 1));
  if (product > 4 * std::sqrt(tol)) {
    throw Error(ErrorCode::Inconsistency,
                fmt::format("form vanishes but a(a-1)(w+1)(w-1) = {}", product));
  }
  return std::min_element(factors.begin(), factors.end(),
                          [](const auto& u, const auto& v) { return u.first < v.first; })
      ->second;
}

}  // namespace pfaffdist::incidence
