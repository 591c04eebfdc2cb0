#include "pfaffdist/curves.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <fmt/format.h>

namespace pfaffdist::curves {

namespace {

constexpr double kZeroSlope = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

int sign_of(double v) { return (v > 0) - (v < 0); }

struct Grad2 {
  double fx;
  double fy;
};

Grad2 grad2(const PfaffianFunction& f, double x, double y) {
  const double p[2] = {x, y};
  const auto g = f.gradient(p);
  return {g[0], g[1]};
}

double slope_at(const PfaffianFunction& f, double x, double y) {
  const Grad2 g = grad2(f, x, y);
  if (std::fabs(g.fy) <= 1e-12 * std::max(1.0, std::fabs(g.fx))) {
    throw Error(ErrorCode::GraphCondition,
                fmt::format("f_y vanishes at ({}, {}); the curve is not a graph there", x, y));
  }
  return -g.fx / g.fy;
}

// Newton in y at fixed x, starting from y0. Returns nullopt on failure.
std::optional<double> correct_y(const PfaffianFunction& f, double x, double y0) {
  double y = y0;
  for (int it = 0; it < 16; ++it) {
    const double p[2] = {x, y};
    const double v = f(p);
    const double fy = f.gradient(p)[1];
    if (!std::isfinite(v) || !std::isfinite(fy) || fy == 0.0) return std::nullopt;
    const double dy = v / fy;
    y -= dy;
    if (std::fabs(dy) <= 1e-14 * (1.0 + std::fabs(y))) return y;
  }
  return std::nullopt;
}

// Predictor-corrector continuation from `start` towards x_end. The returned
// nodes begin with `start`.
std::vector<Point2> trace(const PfaffianFunction& f, Point2 start, double x_end, double h0) {
  std::vector<Point2> nodes{start};
  const double dir = x_end > start.x ? 1.0 : -1.0;
  const double h_min = h0 * 1e-6;
  const int fy_sign = sign_of(grad2(f, start.x, start.y).fy);
  double h = h0;
  Point2 cur = start;
  while (dir * (x_end - cur.x) > 0) {
    const double step = std::min(h, std::fabs(x_end - cur.x));
    const double xn = (step == std::fabs(x_end - cur.x)) ? x_end : cur.x + dir * step;
    bool ok = false;
    try {
      const double slope = slope_at(f, cur.x, cur.y);
      if (std::fabs(slope) < 1e8) {
        const double yp = cur.y + (xn - cur.x) * slope;
        if (auto yn = correct_y(f, xn, yp)) {
          const Grad2 g = grad2(f, xn, *yn);
          const bool same_branch = sign_of(g.fy) == fy_sign &&
                                   std::fabs(g.fy) > 1e-12 * std::max(1.0, std::fabs(g.fx));
          const bool close = std::fabs(*yn - yp) <= std::max(0.25 * step * (1.0 + std::fabs(slope)), 1e-9);
          if (same_branch && close) {
            cur = {xn, *yn};
            nodes.push_back(cur);
            ok = true;
          }
        }
      }
    } catch (const Error&) {
      ok = false;
    }
    if (ok) {
      h = std::min(h0, 2.0 * h);
    } else {
      h *= 0.5;
      if (h < h_min) break;
    }
  }
  return nodes;
}

std::vector<Point2> trace_both_ways(const PfaffianFunction& f, Point2 seed, double xlo,
                                    double xhi, double h0) {
  auto left = trace(f, seed, xlo, h0);
  auto right = trace(f, seed, xhi, h0);
  std::vector<Point2> nodes(left.rbegin(), left.rend());
  nodes.insert(nodes.end(), right.begin() + 1, right.end());
  return nodes;
}

Point2 snap_seed(const PfaffianFunction& f, Point2 seed) {
  const double p[2] = {seed.x, seed.y};
  double v = 0.0;
  Grad2 g{};
  try {
    v = f(p);
    g = grad2(f, seed.x, seed.y);
  } catch (const Error& e) {
    throw Error(ErrorCode::Seed, fmt::format("seed ({}, {}) cannot be evaluated: {}", seed.x,
                                             seed.y, e.what()));
  }
  const double gnorm = std::hypot(g.fx, g.fy);
  if (!(std::fabs(v) <= 1e-8 * std::max(gnorm, 1e-300)) && std::fabs(v) > 1e-12) {
    throw Error(ErrorCode::Seed,
                fmt::format("seed ({}, {}) is not on the curve: f = {}", seed.x, seed.y, v));
  }
  if (std::fabs(g.fy) <= 1e-12 * std::max(1.0, std::fabs(g.fx))) {
    throw Error(ErrorCode::GraphCondition, "f_y vanishes at the seed");
  }
  if (auto y = correct_y(f, seed.x, seed.y)) return {seed.x, *y};
  return seed;
}

Monotonicity monotonicity_of(const PfaffianFunction& f, const std::vector<Point2>& nodes) {
  bool pos = false;
  bool neg = false;
  for (const Point2& n : nodes) {
    const double s = slope_at(f, n.x, n.y);
    if (s > kZeroSlope) pos = true;
    if (s < -kZeroSlope) neg = true;
  }
  if (pos && neg) throw Error(ErrorCode::GraphCondition, "g2 is not monotone on the interval");
  if (pos) return Monotonicity::Increasing;
  if (neg) return Monotonicity::Decreasing;
  return Monotonicity::Constant;
}

}  // namespace

std::string_view to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::Increasing: return "increasing";
    case Monotonicity::Decreasing: return "decreasing";
    case Monotonicity::Constant: return "constant";
  }
  return "";
}

Monotonicity parse_monotonicity(std::string_view text) {
  if (text == "increasing") return Monotonicity::Increasing;
  if (text == "decreasing") return Monotonicity::Decreasing;
  if (text == "constant") return Monotonicity::Constant;
  throw Error(ErrorCode::Parse, "unknown monotonicity '" + std::string(text) + "'");
}

std::string_view to_string(DegeneratePair d) {
  switch (d) {
    case DegeneratePair::ParallelLines: return "parallel-lines";
    case DegeneratePair::OrthogonalLines: return "orthogonal-lines";
    case DegeneratePair::ConcentricCircles: return "concentric-circles";
    case DegeneratePair::None: return "none";
  }
  return "";
}

// ---------------------------------------------------------------------------
// PlanarArc

PlanarArc::PlanarArc(PfaffianFunction f, double xlo, double xhi, Point2 seed,
                     std::optional<CurveClass> exact_class)
    : f_(std::make_shared<const PfaffianFunction>(std::move(f))),
      xlo_(xlo),
      xhi_(xhi),
      exact_class_(std::move(exact_class)) {
  if (f_->dim() != 2) throw Error(ErrorCode::Parameter, "planar arcs need a bivariate function");
  if (!(xlo < xhi)) throw Error(ErrorCode::Parameter, "arc interval is empty");
  if (seed.x < xlo || seed.x > xhi) throw Error(ErrorCode::Seed, "seed outside the arc interval");
  const Point2 start = snap_seed(*f_, seed);
  const double h0 = (xhi - xlo) / 1000.0;
  nodes_ = trace_both_ways(*f_, start, xlo, xhi, h0);
  // The interval is open: continuation may stop just short of an endpoint
  // where the tangent turns vertical.
  const double slack = 1e-6 * (xhi - xlo);
  if (nodes_.front().x - xlo > slack || xhi - nodes_.back().x > slack) {
    throw Error(ErrorCode::GraphCondition,
                fmt::format("zero set is not a graph over ({}, {}); continuation stopped at "
                            "[{}, {}]", xlo, xhi, nodes_.front().x, nodes_.back().x));
  }
  monotonicity_ = monotonicity_of(*f_, nodes_);
  finish();
}

PlanarArc::PlanarArc(std::shared_ptr<const PfaffianFunction> f, std::vector<Point2> nodes,
                     Monotonicity mono)
    : f_(std::move(f)), monotonicity_(mono), nodes_(std::move(nodes)) {
  xlo_ = nodes_.front().x;
  xhi_ = nodes_.back().x;
  finish();
}

void PlanarArc::finish() {
  const Point2 mid = nodes_[nodes_.size() / 2];
  fy_sign_ = sign_of(grad2(*f_, mid.x, mid.y).fy);
}

std::pair<double, double> PlanarArc::y_range() const {
  auto [lo, hi] = std::minmax_element(nodes_.begin(), nodes_.end(),
                                      [](Point2 a, Point2 b) { return a.y < b.y; });
  return {lo->y, hi->y};
}

std::pair<double, double> PlanarArc::bracket(double x) const {
  if (x < xlo_ || x > xhi_) {
    throw Error(ErrorCode::Domain, fmt::format("x = {} outside the arc interval ({}, {})", x, xlo_, xhi_));
  }
  if (x <= nodes_.front().x) return {nodes_.front().y, nodes_.front().y};
  if (x >= nodes_.back().x) return {nodes_.back().y, nodes_.back().y};
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x,
                             [](Point2 n, double v) { return n.x < v; });
  if (it->x == x || it == nodes_.begin()) return {it->y, it->y};
  const Point2 right = *it;
  const Point2 left = *(it - 1);
  return {std::min(left.y, right.y), std::max(left.y, right.y)};
}

// ---------------------------------------------------------------------------
// Root finding and parameterization

double solve_on_vertical(const PfaffianFunction& f, double x, double lo, double hi, double tol,
                         int max_iter) {
  if (lo > hi) std::swap(lo, hi);
  auto fv = [&](double y) {
    const double p[2] = {x, y};
    return f(p);
  };
  double a = lo, b = hi;
  double fa = fv(a), fb = fv(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (sign_of(fa) == sign_of(fb)) {
    throw Error(ErrorCode::Bracket,
                fmt::format("no sign change of f({}, .) on [{}, {}]", x, lo, hi));
  }
  int side = 0;
  double width_before = b - a;
  for (int it = 0; it < max_iter; ++it) {
    double c = b - fb * (b - a) / (fb - fa);
    // Bisect every third iteration unless the bracket halved meanwhile.
    if (!(c > a && c < b) || (it % 3 == 2 && (b - a) > 0.5 * width_before)) {
      c = 0.5 * (a + b);
    }
    if (it % 3 == 2) width_before = b - a;
    const double fc = fv(c);
    if (std::fabs(fc) <= tol) return c;
    if (sign_of(fc) == sign_of(fa)) {
      a = c;
      fa = fc;
      if (side == -1) fb *= 0.5;  // Illinois
      side = -1;
    } else {
      b = c;
      fb = fc;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
    if (b - a <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(a), std::fabs(b)) ||
        b - a <= std::numeric_limits<double>::min()) {
      return std::fabs(fv(a)) < std::fabs(fv(b)) ? a : b;
    }
  }
  throw Error(ErrorCode::Convergence,
              fmt::format("root of f({}, .) not found in {} iterations", x, max_iter));
}

double Parameterization::value(double x) const {
  const auto& f = arc_->function();
  auto [lo, hi] = arc_->bracket(x);
  auto fv = [&](double y) {
    const double p[2] = {x, y};
    return f(p);
  };
  if (lo == hi && fv(lo) == 0.0) return lo;
  double width = std::max(hi - lo, 1e-10 * (1.0 + std::fabs(lo) + std::fabs(hi)));
  for (int attempt = 0; attempt < 40; ++attempt) {
    try {
      if (sign_of(fv(lo)) != sign_of(fv(hi))) return solve_on_vertical(f, x, lo, hi, 1e-13);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Domain) throw;
    }
    lo -= width;
    hi += width;
    width *= 2.0;
  }
  throw Error(ErrorCode::Convergence, fmt::format("could not bracket g2({})", x));
}

double Parameterization::slope(double x) const {
  const double y = value(x);
  return slope_at(arc_->function(), x, y);
}

Parameterization parameterize(const PlanarArc& arc) { return Parameterization(arc); }

// ---------------------------------------------------------------------------
// Monotone arc extraction

std::vector<PlanarArc> extract_monotone_arc(const PfaffianFunction& f, Point2 seed,
                                            std::pair<double, double> window, int samples) {
  if (f.dim() != 2) throw Error(ErrorCode::Parameter, "arc extraction needs a bivariate function");
  if (samples < 1 || !(window.first < window.second)) {
    throw Error(ErrorCode::Parameter, "bad extraction window or sample count");
  }
  if (seed.x < window.first || seed.x > window.second) {
    throw Error(ErrorCode::Seed, "seed outside the window");
  }
  const Point2 start = snap_seed(f, seed);
  const double h0 = (window.second - window.first) / (50.0 * samples);
  const auto nodes = trace_both_ways(f, start, window.first, window.second, h0);
  auto fptr = std::make_shared<const PfaffianFunction>(f);

  std::vector<int> signs;
  signs.reserve(nodes.size());
  for (const Point2& n : nodes) {
    const double s = slope_at(f, n.x, n.y);
    signs.push_back(std::fabs(s) <= kZeroSlope ? 0 : sign_of(s));
  }

  // Locates a zero of the slope between two nodes by bisection on x.
  auto split_point = [&](Point2 a, Point2 b, int sign_a) {
    PlanarArc probe(fptr, {a, b}, Monotonicity::Increasing);
    const Parameterization g(probe);
    double lo = a.x, hi = b.x;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::fabs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (sign_of(g.slope(mid)) == sign_a) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double x = 0.5 * (lo + hi);
    return Point2{x, g.value(x)};
  };

  std::vector<PlanarArc> arcs;
  std::vector<Point2> cur;
  int cur_sign = 0;
  auto close = [&] {
    if (cur.size() >= 2 && cur.back().x > cur.front().x) {
      const Monotonicity m = cur_sign > 0   ? Monotonicity::Increasing
                             : cur_sign < 0 ? Monotonicity::Decreasing
                                            : Monotonicity::Constant;
      arcs.push_back(PlanarArc(fptr, cur, m));
    }
    cur.clear();
  };
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const int s = signs[k];
    if (s == 0) {
      if (cur_sign != 0) {
        cur.push_back(nodes[k]);
        close();
      } else if (cur.size() >= 2 && k + 1 < nodes.size() && signs[k + 1] != 0) {
        // end of a constant run followed by a sloped piece
        cur.push_back(nodes[k]);
        close();
      }
      cur.push_back(nodes[k]);
      cur_sign = 0;
    } else if (cur_sign == 0) {
      if (cur.size() >= 2) {
        const Point2 last = cur.back();
        close();
        cur.push_back(last);
      }
      cur.push_back(nodes[k]);
      cur_sign = s;
    } else if (s == cur_sign) {
      cur.push_back(nodes[k]);
    } else {
      const Point2 turn = split_point(nodes[k - 1], nodes[k], cur_sign);
      cur.push_back(turn);
      close();
      cur = {turn, nodes[k]};
      cur_sign = s;
    }
  }
  close();
  return arcs;
}

// ---------------------------------------------------------------------------
// Classification

namespace {

// Solves a 3x3 system by Gaussian elimination with partial pivoting.
std::optional<std::array<double, 3>> solve3(std::array<std::array<double, 4>, 3> m) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    }
    if (std::fabs(m[piv][col]) < 1e-300) return std::nullopt;
    std::swap(m[piv], m[col]);
    for (int r = col + 1; r < 3; ++r) {
      const double factor = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  std::array<double, 3> x{};
  for (int r = 2; r >= 0; --r) {
    double s = m[r][3];
    for (int c = r + 1; c < 3; ++c) s -= m[r][c] * x[c];
    x[r] = s / m[r][r];
  }
  return x;
}

}  // namespace

CurveClass classify_points(const std::vector<Point2>& pts, double tol) {
  if (pts.size() < 3) throw Error(ErrorCode::Parameter, "classification needs at least 3 points");
  const double n = static_cast<double>(pts.size());
  Point2 c{0, 0};
  for (const Point2& p : pts) c = c + p;
  c = (1.0 / n) * c;
  double suu = 0, svv = 0, suv = 0;
  for (const Point2& p : pts) {
    const Vec2 d = p - c;
    suu += d.x * d.x;
    svv += d.y * d.y;
    suv += d.x * d.y;
  }

  // Total least squares line through the centroid.
  const double theta = 0.5 * std::atan2(2 * suv, suu - svv);
  Vec2 dir{std::cos(theta), std::sin(theta)};
  if (dir.x < 0 || (dir.x == 0 && dir.y < 0)) dir = -1.0 * dir;
  double line_res = 0.0;
  for (const Point2& p : pts) line_res = std::max(line_res, std::fabs(cross(dir, p - c)));
  const Vec2 normal{-dir.y, dir.x};
  if (line_res < tol) return {Line{dir, dot(normal, c)}, line_res};

  // Algebraic (Kasa) circle fit on centred coordinates.
  double su3 = 0, sv3 = 0, su2v = 0, suv2 = 0;
  for (const Point2& p : pts) {
    const Vec2 d = p - c;
    su3 += d.x * d.x * d.x;
    sv3 += d.y * d.y * d.y;
    su2v += d.x * d.x * d.y;
    suv2 += d.x * d.y * d.y;
  }
  const auto sol = solve3({{{suu, suv, 0.0, -(su3 + suv2)},
                            {suv, svv, 0.0, -(su2v + sv3)},
                            {0.0, 0.0, n, -(suu + svv)}}});
  double circle_res = kInf;
  Circle circle;
  if (sol) {
    const double cu = -(*sol)[0] / 2, cv = -(*sol)[1] / 2;
    const double r2 = cu * cu + cv * cv - (*sol)[2];
    if (r2 > 0 && std::isfinite(r2)) {
      circle = {Point2{c.x + cu, c.y + cv}, std::sqrt(r2)};
      circle_res = 0.0;
      for (const Point2& p : pts) {
        circle_res = std::max(circle_res, std::fabs(distance(p, circle.center) - circle.radius));
      }
    }
  }
  if (circle_res < tol) return {circle, circle_res};
  return {OtherCurve{}, std::min(line_res, circle_res)};
}

CurveClass classify_curve(const PlanarArc& arc, int samples, double tol) {
  if (samples < 5) throw Error(ErrorCode::Parameter, "classification needs at least 5 samples");
  if (arc.exact_class()) return *arc.exact_class();
  const Parameterization g(arc);
  std::vector<Point2> pts;
  for (int k = 1; k <= samples; ++k) {
    const double x = arc.xlo() + (arc.xhi() - arc.xlo()) * k / (samples + 1);
    pts.push_back(g.point(x));
  }
  return classify_points(pts, tol);
}

DegeneratePair degenerate_pair(const CurveClass& c1, const CurveClass& c2, double tol) {
  if (c1.is_line() && c2.is_line()) {
    const Vec2 u1 = std::get<Line>(c1.shape).direction;
    const Vec2 u2 = std::get<Line>(c2.shape).direction;
    if (std::fabs(cross(u1, u2)) < tol) return DegeneratePair::ParallelLines;
    if (std::fabs(dot(u1, u2)) < tol) return DegeneratePair::OrthogonalLines;
  }
  if (c1.is_circle() && c2.is_circle()) {
    if (distance(std::get<Circle>(c1.shape).center, std::get<Circle>(c2.shape).center) < tol) {
      return DegeneratePair::ConcentricCircles;
    }
  }
  return DegeneratePair::None;
}

// ---------------------------------------------------------------------------
// Descriptor text

std::string arc_descriptor(const PlanarArc& arc, std::string_view function_ref) {
  const Point2 seed = arc.nodes()[arc.nodes().size() / 2];
  return fmt::format("{} {:.17g} {:.17g} {} {:.17g} {:.17g}", function_ref, arc.xlo(), arc.xhi(),
                     to_string(arc.monotonicity()), seed.x, seed.y);
}

PlanarArc parse_arc_descriptor(
    std::string_view text, const std::function<PfaffianFunction(const std::string&)>& resolve) {
  std::istringstream in{std::string(text)};
  std::string ref, mono;
  double xlo = 0, xhi = 0, sx = 0, sy = 0;
  if (!(in >> ref >> xlo >> xhi >> mono >> sx >> sy)) {
    throw Error(ErrorCode::Parse, "arc descriptor must be 'ref xlo xhi monotonicity seed_x seed_y'");
  }
  const Monotonicity expected = parse_monotonicity(mono);
  PlanarArc arc(resolve(ref), xlo, xhi, {sx, sy});
  if (arc.monotonicity() != expected) {
    throw Error(ErrorCode::Parse, fmt::format("descriptor says {}, traced arc is {}", mono,
                                              to_string(arc.monotonicity())));
  }
  return arc;
}

}  // namespace pfaffdist::curves
