#include "pfaffdist/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

namespace pfaffdist::isometry {

namespace {

Vec2 canonical_direction(Vec2 u) {
  const double n = norm(u);
  u = (1.0 / n) * u;
  if (u.x < 0 || (u.x == 0 && u.y < 0)) u = -1.0 * u;
  return u;
}

double orthogonality_defect(const Mat2& a) {
  return (a.transpose() * a - Mat2::identity()).max_abs();
}

// Orthogonal factor of the polar decomposition.
Mat2 polar(const Mat2& a) {
  if (a.det() >= 0) {
    const double t = std::atan2(a.a21 - a.a12, a.a11 + a.a22);
    return Mat2::rotation(t);
  }
  const Mat2 flip{1, 0, 0, -1};
  const Mat2 b = a * flip;
  const double t = std::atan2(b.a21 - b.a12, b.a11 + b.a22);
  return Mat2::rotation(t) * flip;
}

bool same_isometry(const Isometry& p, const Isometry& q, double tol) {
  return (p.a() - q.a()).max_abs() <= tol && norm(p.w() - q.w()) <= tol * (1 + norm(p.w()));
}

}  // namespace

Mat2 Mat2::rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c, -s, s, c};
}

Mat2 Mat2::reflection(Vec2 direction) {
  const double t = 2 * std::atan2(direction.y, direction.x);
  return {std::cos(t), std::sin(t), std::sin(t), -std::cos(t)};
}

Mat2 operator*(const Mat2& p, const Mat2& q) {
  return {p.a11 * q.a11 + p.a12 * q.a21, p.a11 * q.a12 + p.a12 * q.a22,
          p.a21 * q.a11 + p.a22 * q.a21, p.a21 * q.a12 + p.a22 * q.a22};
}

Mat2 operator+(const Mat2& p, const Mat2& q) {
  return {p.a11 + q.a11, p.a12 + q.a12, p.a21 + q.a21, p.a22 + q.a22};
}

Mat2 operator-(const Mat2& p, const Mat2& q) {
  return {p.a11 - q.a11, p.a12 - q.a12, p.a21 - q.a21, p.a22 - q.a22};
}

double Mat2::max_abs() const {
  return std::max({std::fabs(a11), std::fabs(a12), std::fabs(a21), std::fabs(a22)});
}

std::optional<Mat2> Mat2::inverse() const {
  const double d = det();
  if (d == 0.0) return std::nullopt;
  return Mat2{a22 / d, -a12 / d, -a21 / d, a11 / d};
}

// ---------------------------------------------------------------------------
// Isometry

Isometry::Isometry(Mat2 a, Vec2 w) : a_(a), w_(w) {
  const double defect = orthogonality_defect(a);
  if (!(defect <= 1e-9)) {
    throw Error(ErrorCode::Parameter, fmt::format("matrix is not orthogonal (|A^T A - I| = {})", defect));
  }
  if (defect > 1e-12) a_ = polar(a);
  if (!std::isfinite(w.x) || !std::isfinite(w.y)) throw Error(ErrorCode::Parameter, "non-finite translation");
}

Isometry Isometry::translation(Vec2 w) { return {Mat2::identity(), w}; }

Isometry Isometry::rotation(Point2 center, double angle) {
  const Mat2 a = Mat2::rotation(angle);
  return {a, center - a * center};
}

Isometry Isometry::reflection(Point2 point, Vec2 direction) {
  if (norm(direction) == 0.0) throw Error(ErrorCode::Degenerate, "reflection axis without direction");
  const Mat2 a = Mat2::reflection(direction);
  return {a, point - a * point};
}

std::string Isometry::to_text() const {
  return fmt::format("{:.17g} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g}", a_.a11, a_.a12, a_.a21, a_.a22,
                     w_.x, w_.y);
}

Isometry Isometry::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  Mat2 a;
  Vec2 w;
  if (!(in >> a.a11 >> a.a12 >> a.a21 >> a.a22 >> w.x >> w.y)) {
    throw Error(ErrorCode::Parse, "isometry text must be 'a11 a12 a21 a22 w1 w2'");
  }
  std::string extra;
  if (in >> extra) throw Error(ErrorCode::Parse, "trailing text after isometry");
  return {a, w};
}

Point2 apply(const Isometry& h, Point2 v) { return h.apply(v); }

Isometry compose(const Isometry& h2, const Isometry& h1) {
  return {h2.a() * h1.a(), h2.a() * h1.w() + h2.w()};
}

Isometry inverse(const Isometry& h) {
  const Mat2 inv = h.a().transpose();
  return {inv, -1.0 * (inv * h.w())};
}

// ---------------------------------------------------------------------------
// Classification

IsometryClass classify(const Isometry& h, double tol) {
  const Mat2& a = h.a();
  const Vec2 w = h.w();
  if (a.det() > 0) {
    if ((a - Mat2::identity()).max_abs() <= tol) {
      if (norm(w) <= tol) return IdentityClass{};
      return TranslationClass{w};
    }
    const Mat2 m = Mat2::identity() - a;
    if (std::fabs(m.det()) <= tol) {
      throw Error(ErrorCode::Tolerance,
                  fmt::format("rotation too close to the identity to locate its center (det(I-A) = {})", m.det()));
    }
    return RotationClass{*m.inverse() * w, std::atan2(a.a21, a.a11)};
  }
  const Vec2 u = canonical_direction({std::cos(std::atan2(a.a21, a.a11) / 2), std::sin(std::atan2(a.a21, a.a11) / 2)});
  if (norm(a * w + w) <= tol) return ReflectionClass{0.5 * w, u};
  const Vec2 shift = dot(w, u) * u;
  return GlideReflectionClass{0.5 * (w - shift), u, shift};
}

std::string describe(const IsometryClass& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, IdentityClass>) {
          return "identity";
        } else if constexpr (std::is_same_v<T, TranslationClass>) {
          return fmt::format("translation vector {:.12g} {:.12g}", v.w.x, v.w.y);
        } else if constexpr (std::is_same_v<T, RotationClass>) {
          return fmt::format("rotation center {:.12g} {:.12g} angle {:.12g}", v.center.x, v.center.y, v.angle);
        } else if constexpr (std::is_same_v<T, ReflectionClass>) {
          return fmt::format("reflection axis {:.12g} {:.12g} direction {:.12g} {:.12g}", v.point.x, v.point.y,
                             v.direction.x, v.direction.y);
        } else {
          return fmt::format("glide-reflection axis {:.12g} {:.12g} direction {:.12g} {:.12g} shift {:.12g} {:.12g}",
                             v.point.x, v.point.y, v.direction.x, v.direction.y, v.shift.x, v.shift.y);
        }
      },
      c);
}

Vec2 rotation_commutator(const Isometry& h1, const Isometry& h2, double tol) {
  const auto c1 = classify(h1, tol);
  const auto c2 = classify(h2, tol);
  const auto* r1 = std::get_if<RotationClass>(&c1);
  const auto* r2 = std::get_if<RotationClass>(&c2);
  if (!r1 || !r2) throw Error(ErrorCode::Precondition, "commutator needs two rotations");
  const Mat2 i = Mat2::identity();
  return (i - h2.a().transpose()) * ((i - h1.a().transpose()) * (r2->center - r1->center));
}

RigidPair rigid_motions_mapping(Point2 pi, Point2 pk, Point2 pj, Point2 pl, double tol) {
  const Vec2 u = pk - pi, v = pl - pj;
  const double d1 = norm(u), d2 = norm(v);
  if (d1 == 0.0 || d2 == 0.0) throw Error(ErrorCode::Degenerate, "coincident points in a rigid-motion pair");
  if (std::fabs(d1 - d2) > tol) {
    throw Error(ErrorCode::Precondition, fmt::format("distances differ: {} vs {}", d1, d2));
  }
  const double angle = std::atan2(v.y, v.x) - std::atan2(u.y, u.x);
  const Mat2 a = Mat2::rotation(angle);
  const Isometry direct(a, pj - a * pi);
  const Isometry reflected = compose(direct, Isometry::reflection(pi, u));
  const double scale = 1 + std::max({norm(pi), norm(pk), norm(pj), norm(pl)});
  for (const Isometry* t : {&direct, &reflected}) {
    if (norm(t->apply(pi) - pj) > 1e-10 * scale || norm(t->apply(pk) - pl) > 1e-10 * scale + std::fabs(d1 - d2)) {
      throw Error(ErrorCode::Inconsistency, "rigid motion does not map the input pair");
    }
  }
  return {direct, reflected};
}

// ---------------------------------------------------------------------------
// Symmetries of arcs

bool is_symmetry(const curves::PlanarArc& arc, const Isometry& h, int samples, double tol) {
  if (samples < 10) throw Error(ErrorCode::Parameter, "symmetry check needs at least 10 samples");
  const curves::Parameterization g(arc);
  const auto& f = arc.function();
  int in_domain = 0;
  bool ok = true;
  for (int k = 0; k < samples; ++k) {
    const double x = arc.xlo() + (arc.xhi() - arc.xlo()) * (k + 0.5) / samples;
    const Point2 p = g.point(x);
    const Point2 q = h.apply(p);
    const double at_p[2] = {p.x, p.y};
    const double at_q[2] = {q.x, q.y};
    try {
      const double v = f(at_q);
      const auto gq = f.gradient(at_q);
      const auto gp = f.gradient(at_p);
      const double scale = std::max(std::hypot(gq[0], gq[1]), std::hypot(gp[0], gp[1]));
      ++in_domain;
      if (!(std::fabs(v) <= tol * scale)) ok = false;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Domain && e.code() != ErrorCode::Convergence) throw;
    }
  }
  if (2 * in_domain < samples) {
    throw Error(ErrorCode::Inconclusive,
                fmt::format("only {} of {} images lie in the evaluation domain", in_domain, samples));
  }
  return ok;
}

SymmetryReport detect_symmetries(const curves::PlanarArc& arc, int samples, double tol) {
  SymmetryReport report;
  const curves::CurveClass cls = curves::classify_curve(arc);
  if (cls.is_line() || cls.is_circle()) {
    report.infinite_family = cls;
    report.symmetries.push_back(Isometry::identity());
    return report;
  }
  const curves::Parameterization g(arc);
  const double lo = arc.xlo(), len = arc.xhi() - arc.xlo();
  auto at = [&](double t) { return g.point(lo + len * t); };
  const Point2 a = at(0.3), b = at(0.45), e = at(0.7);
  const double chord = distance(a, b);
  const auto& f = arc.function();

  auto add = [&](const Isometry& h) {
    for (const auto& s : report.symmetries) {
      if (same_isometry(s, h, 1e-6)) return;
    }
    try {
      if (is_symmetry(arc, h, 50, tol)) report.symmetries.push_back(h);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::Inconclusive) throw;
    }
  };
  add(Isometry::identity());
  add(Isometry::reflection({0, 0}, {1, 0}));
  add(Isometry::reflection({0, 0}, {0, 1}));

  const int n = 4 * samples;
  const double inner = 1e-6;
  auto x_of = [&](int k) { return lo + len * (inner + (1 - 2 * inner) * k / n); };

  // Partner d of c along the arc in direction dir with |q_c q_d| = chord.
  auto partner = [&](double xc, int dir) -> std::optional<double> {
    const Point2 qc = g.point(xc);
    auto phi = [&](double x) { return distance(qc, g.point(x)) - chord; };
    const double step = len / n;
    double x0 = xc, f0 = phi(x0);
    for (int s = 1; s <= n; ++s) {
      const double x1 = xc + dir * step * s;
      if (x1 <= lo || x1 >= lo + len) return std::nullopt;
      const double f1 = phi(x1);
      if ((f0 < 0) != (f1 < 0)) {
        double l = x0, r = x1, fl = f0;
        for (int it = 0; it < 100; ++it) {
          const double m = 0.5 * (l + r);
          const double fm = phi(m);
          if ((fm < 0) == (fl < 0)) {
            l = m;
            fl = fm;
          } else {
            r = m;
          }
        }
        return 0.5 * (l + r);
      }
      x0 = x1;
      f0 = f1;
    }
    return std::nullopt;
  };

  // Candidate built from c; its defect is f at the image of e.
  auto candidate = [&](double xc, int dir, bool reflected) -> std::optional<Isometry> {
    const auto xd = partner(xc, dir);
    if (!xd) return std::nullopt;
    try {
      const RigidPair rp = rigid_motions_mapping(a, b, g.point(xc), g.point(*xd), 1e-7 * (1 + chord));
      return reflected ? rp.reflected : rp.direct;
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  auto defect = [&](const Isometry& h) -> std::optional<double> {
    const Point2 q = h.apply(e);
    const double p[2] = {q.x, q.y};
    try {
      return f(p);
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  for (int dir : {1, -1}) {
    for (bool reflected : {false, true}) {
      std::optional<double> prev_val;
      double prev_x = 0;
      for (int k = 0; k <= n; ++k) {
        const double xc = x_of(k);
        std::optional<double> val;
        if (auto h = candidate(xc, dir, reflected)) val = defect(*h);
        if (val && *val == 0.0) {
          add(*candidate(xc, dir, reflected));
        } else if (val && prev_val && ((*val < 0) != (*prev_val < 0))) {
          double l = prev_x, r = xc, fl = *prev_val;
          bool ok = true;
          for (int it = 0; it < 60 && ok; ++it) {
            const double m = 0.5 * (l + r);
            const auto hm = candidate(m, dir, reflected);
            const auto fm = hm ? defect(*hm) : std::nullopt;
            if (!fm) {
              ok = false;
              break;
            }
            if ((*fm < 0) == (fl < 0)) {
              l = m;
              fl = *fm;
            } else {
              r = m;
            }
          }
          if (ok) {
            if (auto h = candidate(0.5 * (l + r), dir, reflected)) add(*h);
          }
        }
        prev_val = val;
        prev_x = xc;
      }
    }
  }
  return report;
}

std::vector<std::pair<int, int>> respected_pairs(const std::vector<Isometry>& symmetries,
                                                 const std::vector<Point2>& points, double tol) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    for (int j = 0; j < static_cast<int>(points.size()); ++j) {
      for (const auto& t : symmetries) {
        if (norm(t.apply(points[i]) - points[j]) <= tol * (1 + norm(points[j]))) {
          out.emplace_back(i, j);
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace pfaffdist::isometry
